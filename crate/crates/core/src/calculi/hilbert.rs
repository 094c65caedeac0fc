//! Hilbert-style proof lines and the checker for the Frege family:
//! F (twelve axiom schemes, modus ponens), EF (plus extension axioms
//! `q <-> D` over fresh atoms), and SF (plus the substitution rule).

use std::collections::BTreeSet;

use crate::formula::{
    apply_substitution, parse_formula_allow_reserved, render_formula, Atom, Formula, Substitution,
};

use super::{CheckReport, Conclusion, ProofFormatError, RejectReason, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    F,
    EF,
    SF,
}

impl Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Variant::F => "F",
            Variant::EF => "EF",
            Variant::SF => "SF",
        }
    }

    pub fn from_name(s: &str) -> Option<Variant> {
        match s {
            "F" => Some(Variant::F),
            "EF" => Some(Variant::EF),
            "SF" => Some(Variant::SF),
            _ => None,
        }
    }
}

/// One of the twelve axiom schemes A1..A12.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SchemeId(u8);

impl SchemeId {
    pub fn from_name(name: &str) -> Option<SchemeId> {
        let rest = name.strip_prefix('A')?;
        let n: u8 = rest.parse().ok()?;
        if (1..=12).contains(&n) {
            Some(SchemeId(n))
        } else {
            None
        }
    }

    pub fn name(&self) -> String {
        format!("A{}", self.0)
    }

    pub fn index(&self) -> usize {
        self.0 as usize - 1
    }
}

fn pattern_var(name: &str) -> Formula {
    Formula::var(Atom::pattern(name).expect("static pattern name"))
}

/// The axiom scheme table. Implicationally complete over the DeMorgan
/// language together with modus ponens; `imp` below is the stored
/// `(or (not _) _)` shape.
fn build_schemes() -> [Formula; 12] {
    {
        let p = || pattern_var("P");
        let q = || pattern_var("Q");
        let r = || pattern_var("R");
        let imp = Formula::imp;
        [
            // A1: P -> (Q -> P)
            imp(p(), imp(q(), p())),
            // A2: (P -> (Q -> R)) -> ((P -> Q) -> (P -> R))
            imp(
                imp(p(), imp(q(), r())),
                imp(imp(p(), q()), imp(p(), r())),
            ),
            // A3: (P and Q) -> P
            imp(Formula::and(p(), q()), p()),
            // A4: (P and Q) -> Q
            imp(Formula::and(p(), q()), q()),
            // A5: P -> (Q -> (P and Q))
            imp(p(), imp(q(), Formula::and(p(), q()))),
            // A6: P -> (P or Q)
            imp(p(), Formula::or(p(), q())),
            // A7: Q -> (P or Q)
            imp(q(), Formula::or(p(), q())),
            // A8: (P -> R) -> ((Q -> R) -> ((P or Q) -> R))
            imp(
                imp(p(), r()),
                imp(imp(q(), r()), imp(Formula::or(p(), q()), r())),
            ),
            // A9: (P -> Q) -> ((P -> not Q) -> not P)
            imp(
                imp(p(), q()),
                imp(imp(p(), Formula::not(q())), Formula::not(p())),
            ),
            // A10: not not P -> P
            imp(Formula::not(Formula::not(p())), p()),
            // A11: the constant 1
            Formula::constant(true),
            // A12: 0 -> P
            imp(Formula::constant(false), p()),
        ]
    }
}

pub fn scheme_formula(id: SchemeId) -> Formula {
    thread_local! {
        // Formula trees are Rc-shared, so the table is per thread.
        static TABLE: [Formula; 12] = build_schemes();
    }
    TABLE.with(|t| t[id.index()].clone())
}

pub fn scheme_ids() -> impl Iterator<Item = SchemeId> {
    (1..=12).map(SchemeId)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HilbertJust {
    Ax { scheme: SchemeId, subst: Substitution },
    Mp { implication: u64, antecedent: u64 },
    Ext { atom: Atom },
    Sub { source: u64, subst: Substitution },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertLine {
    pub id: u64,
    pub formula: Formula,
    pub just: HilbertJust,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertProof {
    pub variant: Variant,
    pub lines: Vec<HilbertLine>,
}

impl HilbertProof {
    pub fn steps(&self) -> u64 {
        self.lines.len() as u64
    }

    pub fn symbols(&self) -> u64 {
        self.lines.iter().map(|l| l.formula.size()).sum()
    }

    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }
}

/// Destructure an extension axiom `(and (or (not q) d) (or (not d) q))`,
/// returning the defined formula `d` when the shape matches atom `q`.
fn extension_body(formula: &Formula, q: &Atom) -> Option<Formula> {
    use crate::formula::FKind;
    if let FKind::And(left, right) = formula.kind() {
        let (a1, d1) = left.as_implication()?;
        let (d2, a2) = right.as_implication()?;
        let qf = Formula::var(q.clone());
        if *a1 == qf && *a2 == qf && d1 == d2 {
            return Some(d1.clone());
        }
    }
    None
}

/// Check a Frege-family proof: every line must satisfy the invariants of
/// its justification for the declared variant. Runs in time polynomial in
/// proof size.
pub fn check_frege_family(proof: &HilbertProof) -> CheckReport {
    let steps = proof.steps();
    let symbols = proof.symbols();
    let reject = |line: u64, reason: RejectReason| CheckReport {
        verdict: Verdict::Reject { line, reason },
        conclusion: None,
        steps,
        symbols,
    };

    let final_formula = match proof.lines.last() {
        Some(line) => line.formula.clone(),
        None => return reject(0, RejectReason::EmptyProof),
    };
    let final_atoms = final_formula.atoms();

    // id -> index of earlier lines, for MP/SUB references.
    let mut by_id: std::collections::HashMap<u64, usize> = std::collections::HashMap::new();
    // Atoms appearing in any earlier line, for EXT freshness.
    let mut used_atoms: BTreeSet<Atom> = BTreeSet::new();
    let mut last_id: Option<u64> = None;

    for (idx, line) in proof.lines.iter().enumerate() {
        if let Some(prev) = last_id {
            if line.id <= prev {
                return reject(line.id, RejectReason::NondecreasingId);
            }
        }
        last_id = Some(line.id);

        match &line.just {
            HilbertJust::Ax { scheme, subst } => {
                let pattern = scheme_formula(*scheme);
                if apply_substitution(&pattern, subst) != line.formula {
                    return reject(line.id, RejectReason::BadAxiomInstance);
                }
            }
            HilbertJust::Mp {
                implication,
                antecedent,
            } => {
                let (imp_idx, ante_idx) = match (by_id.get(implication), by_id.get(antecedent)) {
                    (Some(&i), Some(&j)) => (i, j),
                    _ => return reject(line.id, RejectReason::UnknownId),
                };
                let expected = Formula::imp(
                    proof.lines[ante_idx].formula.clone(),
                    line.formula.clone(),
                );
                if proof.lines[imp_idx].formula != expected {
                    return reject(line.id, RejectReason::BadMp);
                }
            }
            HilbertJust::Ext { atom } => {
                if proof.variant != Variant::EF {
                    return reject(line.id, RejectReason::ExtForbidden);
                }
                let body = match extension_body(&line.formula, atom) {
                    Some(body) => body,
                    None => return reject(line.id, RejectReason::BadAxiomInstance),
                };
                if body.contains_atom(atom) || used_atoms.contains(atom) {
                    return reject(line.id, RejectReason::ExtNotFresh);
                }
                if final_atoms.contains(atom) {
                    return reject(line.id, RejectReason::ExtInConclusion);
                }
            }
            HilbertJust::Sub { source, subst } => {
                if proof.variant != Variant::SF {
                    return reject(line.id, RejectReason::SubForbidden);
                }
                let src_idx = match by_id.get(source) {
                    Some(&i) => i,
                    None => return reject(line.id, RejectReason::UnknownId),
                };
                if apply_substitution(&proof.lines[src_idx].formula, subst) != line.formula {
                    return reject(line.id, RejectReason::BadSubstitution);
                }
            }
        }
        line.formula.collect_atoms(&mut used_atoms);
        by_id.insert(line.id, idx);
    }

    CheckReport {
        verdict: Verdict::Accept,
        conclusion: Some(Conclusion::Formula(final_formula)),
        steps,
        symbols,
    }
}

// --- text format -----------------------------------------------------------

fn render_subst(subst: &Substitution) -> String {
    let parts: Vec<String> = subst
        .iter()
        .map(|(a, f)| format!("{}={}", a.name(), render_formula(f)))
        .collect();
    format!("{{{}}}", parts.join("; "))
}

/// One line per step: `<id> | <formula> | <justification>`, preceded by a
/// `system F|EF|SF` header.
pub fn render_hilbert(proof: &HilbertProof) -> String {
    let mut out = format!("system {}\n", proof.variant.name());
    for line in &proof.lines {
        let just = match &line.just {
            HilbertJust::Ax { scheme, subst } => {
                format!("AX {} {}", scheme.name(), render_subst(subst))
            }
            HilbertJust::Mp {
                implication,
                antecedent,
            } => format!("MP {implication} {antecedent}"),
            HilbertJust::Ext { atom } => format!("EXT {}", atom.name()),
            HilbertJust::Sub { source, subst } => {
                format!("SUB {} {}", source, render_subst(subst))
            }
        };
        out.push_str(&format!(
            "{} | {} | {}\n",
            line.id,
            render_formula(&line.formula),
            just
        ));
    }
    out
}

fn parse_subst(text: &str, line: usize, pattern_keys: bool) -> Result<Substitution, ProofFormatError> {
    let err = |message: String| ProofFormatError::Format { line, message };
    let inner = text
        .trim()
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| err("substitution must be brace-delimited".to_string()))?;
    let mut subst = Substitution::new();
    for part in inner.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (name, sexp) = part
            .split_once('=')
            .ok_or_else(|| err(format!("bad binding `{part}`")))?;
        let name = name.trim();
        let atom = if pattern_keys {
            Atom::pattern(name)
        } else {
            Atom::new(name)
        }
        .map_err(|e| err(e.to_string()))?;
        let formula =
            parse_formula_allow_reserved(sexp.trim()).map_err(|e| err(e.to_string()))?;
        subst.bind(atom, formula);
    }
    Ok(subst)
}

pub fn parse_hilbert(text: &str) -> Result<HilbertProof, ProofFormatError> {
    let mut variant: Option<Variant> = None;
    let mut lines = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let err = |message: String| ProofFormatError::Format {
            line: lineno + 1,
            message,
        };
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("system ") {
            variant = Some(
                Variant::from_name(rest.trim())
                    .ok_or_else(|| err(format!("unknown system `{}`", rest.trim())))?,
            );
            continue;
        }
        if variant.is_none() {
            return Err(err("proof line before system header".to_string()));
        }
        let mut parts = line.splitn(3, '|');
        let id_part = parts.next().unwrap_or("").trim();
        let formula_part = parts
            .next()
            .ok_or_else(|| err("missing formula field".to_string()))?
            .trim();
        let just_part = parts
            .next()
            .ok_or_else(|| err("missing justification field".to_string()))?
            .trim();
        let id: u64 = id_part
            .parse()
            .map_err(|_| err(format!("bad line id `{id_part}`")))?;
        let formula =
            parse_formula_allow_reserved(formula_part).map_err(|e| err(e.to_string()))?;
        let just = if let Some(rest) = just_part.strip_prefix("AX ") {
            let rest = rest.trim();
            let (scheme_name, subst_text) = rest
                .split_once(' ')
                .map(|(a, b)| (a, b.trim()))
                .unwrap_or((rest, "{}"));
            let scheme = SchemeId::from_name(scheme_name)
                .ok_or_else(|| err(format!("unknown scheme `{scheme_name}`")))?;
            let subst = parse_subst(subst_text, lineno + 1, true)?;
            HilbertJust::Ax { scheme, subst }
        } else if let Some(rest) = just_part.strip_prefix("MP ") {
            let ids: Vec<&str> = rest.split_whitespace().collect();
            if ids.len() != 2 {
                return Err(err("MP takes two line ids".to_string()));
            }
            HilbertJust::Mp {
                implication: ids[0].parse().map_err(|_| err("bad MP id".to_string()))?,
                antecedent: ids[1].parse().map_err(|_| err("bad MP id".to_string()))?,
            }
        } else if let Some(rest) = just_part.strip_prefix("EXT ") {
            let atom = Atom::new(rest.trim()).map_err(|e| err(e.to_string()))?;
            HilbertJust::Ext { atom }
        } else if let Some(rest) = just_part.strip_prefix("SUB ") {
            let (id_text, subst_text) = rest
                .trim()
                .split_once(' ')
                .ok_or_else(|| err("SUB takes an id and a substitution".to_string()))?;
            HilbertJust::Sub {
                source: id_text
                    .parse()
                    .map_err(|_| err("bad SUB id".to_string()))?,
                subst: parse_subst(subst_text.trim(), lineno + 1, false)?,
            }
        } else {
            return Err(err(format!("unknown justification `{just_part}`")));
        };
        lines.push(HilbertLine { id, formula, just });
    }
    let variant = variant.ok_or(ProofFormatError::Format {
        line: 0,
        message: "missing system header".to_string(),
    })?;
    Ok(HilbertProof { variant, lines })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    fn subst(bindings: &[(&str, &str)]) -> Substitution {
        bindings
            .iter()
            .map(|(k, v)| {
                (
                    Atom::pattern(k).unwrap(),
                    parse_formula(v).unwrap(),
                )
            })
            .collect()
    }

    fn a1_instance() -> HilbertLine {
        HilbertLine {
            id: 1,
            formula: parse_formula("(or (not p) (or (not q) p))").unwrap(),
            just: HilbertJust::Ax {
                scheme: SchemeId::from_name("A1").unwrap(),
                subst: subst(&[("P", "p"), ("Q", "q")]),
            },
        }
    }

    #[test]
    fn axiom_instance_accepts() {
        let proof = HilbertProof {
            variant: Variant::F,
            lines: vec![a1_instance()],
        };
        let report = check_frege_family(&proof);
        assert!(report.accepted());
        assert_eq!(report.steps, 1);
        assert_eq!(report.symbols, 7);
    }

    #[test]
    fn bad_axiom_instance_rejects() {
        let mut line = a1_instance();
        line.formula = parse_formula("(or (not p) (or (not q) q))").unwrap();
        let proof = HilbertProof {
            variant: Variant::F,
            lines: vec![line],
        };
        let report = check_frege_family(&proof);
        assert_eq!(
            report.verdict,
            Verdict::Reject {
                line: 1,
                reason: RejectReason::BadAxiomInstance
            }
        );
    }

    #[test]
    fn mp_with_non_implication_major_rejects() {
        // Line 1 is not an implication of line 2's formula.
        let lines = vec![
            HilbertLine {
                id: 1,
                formula: Formula::constant(true),
                just: HilbertJust::Ax {
                    scheme: SchemeId::from_name("A11").unwrap(),
                    subst: Substitution::new(),
                },
            },
            HilbertLine {
                id: 2,
                formula: Formula::constant(true),
                just: HilbertJust::Ax {
                    scheme: SchemeId::from_name("A11").unwrap(),
                    subst: Substitution::new(),
                },
            },
            HilbertLine {
                id: 3,
                formula: parse_formula("p").unwrap(),
                just: HilbertJust::Mp {
                    implication: 1,
                    antecedent: 2,
                },
            },
        ];
        let proof = HilbertProof {
            variant: Variant::F,
            lines,
        };
        assert_eq!(
            check_frege_family(&proof).verdict,
            Verdict::Reject {
                line: 3,
                reason: RejectReason::BadMp
            }
        );
    }

    #[test]
    fn mp_accepts_valid_chain() {
        // 1: 1 -> (1 -> 1)  (A1 with P=Q=1), 2: 1 (A11), 3: 1 -> 1 by MP.
        let one = Formula::constant(true);
        let lines = vec![
            HilbertLine {
                id: 1,
                formula: Formula::imp(one.clone(), Formula::imp(one.clone(), one.clone())),
                just: HilbertJust::Ax {
                    scheme: SchemeId::from_name("A1").unwrap(),
                    subst: subst(&[("P", "1"), ("Q", "1")]),
                },
            },
            HilbertLine {
                id: 2,
                formula: one.clone(),
                just: HilbertJust::Ax {
                    scheme: SchemeId::from_name("A11").unwrap(),
                    subst: Substitution::new(),
                },
            },
            HilbertLine {
                id: 3,
                formula: Formula::imp(one.clone(), one.clone()),
                just: HilbertJust::Mp {
                    implication: 1,
                    antecedent: 2,
                },
            },
        ];
        let proof = HilbertProof {
            variant: Variant::F,
            lines,
        };
        assert!(check_frege_family(&proof).accepted());
    }

    #[test]
    fn ext_only_in_ef() {
        let q = Atom::new("e_q").unwrap();
        let d = parse_formula("(or a b)").unwrap();
        let ext_line = HilbertLine {
            id: 1,
            formula: Formula::iff(Formula::var(q.clone()), d),
            just: HilbertJust::Ext { atom: q.clone() },
        };
        // EXT alone would put q in the conclusion; follow with a plain axiom.
        let tail = HilbertLine {
            id: 2,
            formula: Formula::constant(true),
            just: HilbertJust::Ax {
                scheme: SchemeId::from_name("A11").unwrap(),
                subst: Substitution::new(),
            },
        };
        let ef = HilbertProof {
            variant: Variant::EF,
            lines: vec![ext_line.clone(), tail.clone()],
        };
        assert!(check_frege_family(&ef).accepted());

        let f = HilbertProof {
            variant: Variant::F,
            lines: vec![ext_line.clone(), tail.clone()],
        };
        assert_eq!(
            check_frege_family(&f).verdict,
            Verdict::Reject {
                line: 1,
                reason: RejectReason::ExtForbidden
            }
        );

        // Reusing an atom that already occurred is not fresh.
        let a = Atom::new("a").unwrap();
        let stale = HilbertLine {
            id: 3,
            formula: Formula::iff(Formula::var(a.clone()), parse_formula("b").unwrap()),
            just: HilbertJust::Ext { atom: a },
        };
        let ef_bad = HilbertProof {
            variant: Variant::EF,
            lines: vec![ext_line, stale, tail],
        };
        assert_eq!(
            check_frege_family(&ef_bad).verdict,
            Verdict::Reject {
                line: 3,
                reason: RejectReason::ExtNotFresh
            }
        );
    }

    #[test]
    fn ext_in_conclusion_rejected() {
        let q = Atom::new("e_q").unwrap();
        let ext_line = HilbertLine {
            id: 1,
            formula: Formula::iff(Formula::var(q.clone()), parse_formula("a").unwrap()),
            just: HilbertJust::Ext { atom: q },
        };
        let proof = HilbertProof {
            variant: Variant::EF,
            lines: vec![ext_line],
        };
        assert_eq!(
            check_frege_family(&proof).verdict,
            Verdict::Reject {
                line: 1,
                reason: RejectReason::ExtInConclusion
            }
        );
    }

    #[test]
    fn sub_only_in_sf() {
        let base = a1_instance();
        let sub_line = HilbertLine {
            id: 2,
            formula: parse_formula("(or (not (and a b)) (or (not q) (and a b)))").unwrap(),
            just: HilbertJust::Sub {
                source: 1,
                subst: [(Atom::new("p").unwrap(), parse_formula("(and a b)").unwrap())]
                    .into_iter()
                    .collect(),
            },
        };
        let sf = HilbertProof {
            variant: Variant::SF,
            lines: vec![base.clone(), sub_line.clone()],
        };
        assert!(check_frege_family(&sf).accepted());

        let ef = HilbertProof {
            variant: Variant::EF,
            lines: vec![base, sub_line],
        };
        assert_eq!(
            check_frege_family(&ef).verdict,
            Verdict::Reject {
                line: 2,
                reason: RejectReason::SubForbidden
            }
        );
    }

    #[test]
    fn format_round_trip() {
        let q = Atom::new("e_q").unwrap();
        let proof = HilbertProof {
            variant: Variant::EF,
            lines: vec![
                a1_instance(),
                HilbertLine {
                    id: 2,
                    formula: Formula::iff(Formula::var(q.clone()), parse_formula("(and a b)").unwrap()),
                    just: HilbertJust::Ext { atom: q },
                },
                HilbertLine {
                    id: 3,
                    formula: Formula::constant(true),
                    just: HilbertJust::Ax {
                        scheme: SchemeId::from_name("A11").unwrap(),
                        subst: Substitution::new(),
                    },
                },
            ],
        };
        let text = render_hilbert(&proof);
        let back = parse_hilbert(&text).unwrap();
        assert_eq!(back, proof);
    }

    #[test]
    fn schemes_are_tautologies_on_sample_instances() {
        use crate::formula::{brute_force_classify, Classification};
        let s = subst(&[("P", "(or a b)"), ("Q", "(not c)"), ("R", "b")]);
        for id in scheme_ids() {
            let inst = apply_substitution(&scheme_formula(id), &s);
            assert_eq!(
                brute_force_classify(&inst).unwrap(),
                Classification::Tautology,
                "scheme {} instance not a tautology",
                id.name()
            );
        }
    }
}
