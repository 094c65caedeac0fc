//! Programmatic construction of Frege-family proofs. The `Prover` keeps a
//! stack of hypothesis scopes; steps taken inside a scope are compiled into
//! the parent scope through the deduction theorem when the scope closes, so
//! every finished proof is a flat axioms-and-modus-ponens line sequence
//! that `check_frege_family` accepts. Each scope level multiplies the line
//! count by a constant, keeping compiled sizes polynomial.

use std::collections::HashMap;

use thiserror::Error;

use crate::calculi::{HilbertJust, HilbertLine, HilbertProof, SchemeId, Variant};
use crate::formula::{apply_substitution, Atom, Formula, Substitution};

/// A handle to a proven step: depth 0 is a global proof line, depth k > 0
/// a step inside the k-th open scope. Handles into a scope die when that
/// scope closes; handles to outer scopes and global lines stay valid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StepRef {
    depth: usize,
    index: usize,
}

#[derive(Debug, Clone)]
enum StepJust {
    Hyp,
    Ax { scheme: SchemeId, subst: Substitution },
    Mp { imp: usize, ante: usize },
    Import { from: StepRef },
}

#[derive(Debug, Clone)]
struct Step {
    formula: Formula,
    just: StepJust,
}

struct Scope {
    hyp: Formula,
    steps: Vec<Step>,
    /// Dedup table for lifted outer references.
    imports: HashMap<StepRef, usize>,
}

pub struct Prover {
    variant: Variant,
    lines: Vec<HilbertLine>,
    next_id: u64,
    scopes: Vec<Scope>,
    /// Formulas proven as global lines, for theorem reuse.
    memo: HashMap<Formula, StepRef>,
}

fn pat(name: &str) -> Atom {
    Atom::pattern(name).expect("static pattern name")
}

impl Prover {
    pub fn new(variant: Variant) -> Prover {
        Prover {
            variant,
            lines: Vec::new(),
            next_id: 1,
            scopes: Vec::new(),
            memo: HashMap::new(),
        }
    }

    /// Continue an existing proof; new lines get ids above the prefix.
    pub fn extending(prefix: &HilbertProof) -> Prover {
        let next_id = prefix.lines.last().map_or(1, |l| l.id + 1);
        Prover {
            variant: prefix.variant,
            lines: prefix.lines.clone(),
            next_id,
            scopes: Vec::new(),
            memo: HashMap::new(),
        }
    }

    pub fn depth(&self) -> usize {
        self.scopes.len()
    }

    pub fn formula(&self, r: StepRef) -> &Formula {
        if r.depth == 0 {
            &self.lines[r.index].formula
        } else {
            &self.scopes[r.depth - 1].steps[r.index].formula
        }
    }

    pub fn global_ref(&self, line_id: u64) -> Option<StepRef> {
        self.lines
            .iter()
            .position(|l| l.id == line_id)
            .map(|index| StepRef { depth: 0, index })
    }

    pub fn line_count(&self) -> usize {
        self.lines.len()
    }

    /// Close out construction; all scopes must be closed.
    pub fn finish(self) -> HilbertProof {
        assert!(self.scopes.is_empty(), "unclosed scope at finish");
        HilbertProof {
            variant: self.variant,
            lines: self.lines,
        }
    }

    /// The lines added after an `extending` prefix of `prefix_len` lines.
    pub fn finish_suffix(self, prefix_len: usize) -> Vec<HilbertLine> {
        let proof = self.finish();
        proof.lines[prefix_len..].to_vec()
    }

    // -- low-level emission --------------------------------------------

    fn push_at(&mut self, depth: usize, formula: Formula, just: StepJust) -> StepRef {
        if depth == 0 {
            let just = match just {
                StepJust::Ax { scheme, subst } => HilbertJust::Ax { scheme, subst },
                StepJust::Mp { imp, ante } => HilbertJust::Mp {
                    implication: self.lines[imp].id,
                    antecedent: self.lines[ante].id,
                },
                StepJust::Hyp | StepJust::Import { .. } => {
                    unreachable!("hypothesis/import cannot appear at depth 0")
                }
            };
            let id = self.next_id;
            self.next_id += 1;
            self.lines.push(HilbertLine { id, formula, just });
            StepRef {
                depth: 0,
                index: self.lines.len() - 1,
            }
        } else {
            let scope = &mut self.scopes[depth - 1];
            scope.steps.push(Step { formula, just });
            StepRef {
                depth,
                index: scope.steps.len() - 1,
            }
        }
    }

    fn ax_at(&mut self, depth: usize, scheme: u8, binds: &[(&str, &Formula)]) -> StepRef {
        let scheme = SchemeId::from_name(&format!("A{scheme}")).expect("scheme in range");
        let subst: Substitution = binds
            .iter()
            .map(|(n, f)| (pat(n), (*f).clone()))
            .collect();
        let formula = apply_substitution(&scheme_pattern(scheme), &subst);
        self.push_at(depth, formula, StepJust::Ax { scheme, subst })
    }

    fn mp_at(&mut self, depth: usize, imp: StepRef, ante: StepRef) -> StepRef {
        debug_assert_eq!(imp.depth, depth);
        debug_assert_eq!(ante.depth, depth);
        let (a, b) = self
            .formula(imp)
            .as_implication()
            .map(|(a, b)| (a.clone(), b.clone()))
            .expect("modus ponens on non-implication");
        assert_eq!(
            &a,
            self.formula(ante),
            "modus ponens antecedent mismatch"
        );
        self.push_at(
            depth,
            b,
            StepJust::Mp {
                imp: imp.index,
                ante: ante.index,
            },
        )
    }

    /// From a step proving `f` at `depth`, derive `h -> f` there.
    fn weaken_at(&mut self, depth: usize, r: StepRef, h: &Formula) -> StepRef {
        let f = self.formula(r).clone();
        let a1 = self.ax_at(depth, 1, &[("P", &f), ("Q", h)]);
        self.mp_at(depth, a1, r)
    }

    /// Derive `h -> h` at `depth` from nothing.
    fn identity_at(&mut self, depth: usize, h: &Formula) -> StepRef {
        let hh = Formula::imp(h.clone(), h.clone());
        let s1 = self.ax_at(depth, 2, &[("P", h), ("Q", &hh), ("R", h)]);
        let s2 = self.ax_at(depth, 1, &[("P", h), ("Q", &hh)]);
        let s3 = self.mp_at(depth, s1, s2);
        let s4 = self.ax_at(depth, 1, &[("P", h), ("Q", h)]);
        self.mp_at(depth, s3, s4)
    }

    // -- public primitives ---------------------------------------------

    /// An axiom-scheme instance at the current depth; `binds` maps the
    /// scheme's pattern names (P, Q, R) to formulas.
    pub fn axiom(&mut self, scheme: u8, binds: &[(&str, &Formula)]) -> StepRef {
        self.ax_at(self.depth(), scheme, binds)
    }

    /// An axiom instance from an explicit scheme id and substitution, for
    /// replaying existing proof lines.
    pub fn axiom_subst(&mut self, scheme: SchemeId, subst: Substitution) -> StepRef {
        let formula = apply_substitution(&scheme_pattern(scheme), &subst);
        self.push_at(self.depth(), formula, StepJust::Ax { scheme, subst })
    }

    /// Modus ponens; arguments from outer scopes are lifted automatically.
    pub fn mp(&mut self, imp: StepRef, ante: StepRef) -> StepRef {
        let d = self.depth();
        let imp = self.lift(imp);
        let ante = self.lift(ante);
        self.mp_at(d, imp, ante)
    }

    /// Bring a global line or outer-scope step into the current scope.
    pub fn lift(&mut self, r: StepRef) -> StepRef {
        let d = self.depth();
        assert!(r.depth <= d, "stale reference into a closed scope");
        if r.depth == d {
            return r;
        }
        if let Some(&index) = self.scopes[d - 1].imports.get(&r) {
            return StepRef { depth: d, index };
        }
        let f = self.formula(r).clone();
        let lifted = self.push_at(d, f, StepJust::Import { from: r });
        self.scopes[d - 1].imports.insert(r, lifted.index);
        lifted
    }

    /// Open a scope assuming `hyp`; returns the hypothesis step.
    pub fn begin_scope(&mut self, hyp: Formula) -> StepRef {
        self.scopes.push(Scope {
            hyp: hyp.clone(),
            steps: vec![Step {
                formula: hyp,
                just: StepJust::Hyp,
            }],
            imports: HashMap::new(),
        });
        StepRef {
            depth: self.scopes.len(),
            index: 0,
        }
    }

    /// Close the innermost scope, compiling the derivation of `target`
    /// into the parent; returns a parent step proving `hyp -> target`.
    /// Steps not feeding into `target` are dropped.
    pub fn end_scope(&mut self, target: StepRef) -> StepRef {
        let d = self.depth();
        assert_eq!(target.depth, d, "target not in the innermost scope");
        let scope = self.scopes.pop().unwrap();
        let h = scope.hyp;
        let parent = d - 1;

        let mut needed = vec![false; scope.steps.len()];
        needed[target.index] = true;
        for i in (0..scope.steps.len()).rev() {
            if !needed[i] {
                continue;
            }
            if let StepJust::Mp { imp, ante } = scope.steps[i].just {
                needed[imp] = true;
                needed[ante] = true;
            }
        }

        let mut map: Vec<Option<StepRef>> = vec![None; scope.steps.len()];
        for (i, step) in scope.steps.iter().enumerate() {
            if !needed[i] {
                continue;
            }
            let compiled = match &step.just {
                StepJust::Hyp => self.identity_at(parent, &h),
                StepJust::Ax { scheme, subst } => {
                    let r = self.push_at(
                        parent,
                        step.formula.clone(),
                        StepJust::Ax {
                            scheme: *scheme,
                            subst: subst.clone(),
                        },
                    );
                    self.weaken_at(parent, r, &h)
                }
                StepJust::Import { from } => {
                    let base = if from.depth == parent {
                        *from
                    } else {
                        self.push_at(
                            parent,
                            step.formula.clone(),
                            StepJust::Import { from: *from },
                        )
                    };
                    self.weaken_at(parent, base, &h)
                }
                StepJust::Mp { imp, ante } => {
                    let pi = map[*imp].expect("premise compiled before use");
                    let pj = map[*ante].expect("premise compiled before use");
                    let a = scope.steps[*ante].formula.clone();
                    let g = step.formula.clone();
                    let a2 = self.ax_at(parent, 2, &[("P", &h), ("Q", &a), ("R", &g)]);
                    let s = self.mp_at(parent, a2, pi);
                    self.mp_at(parent, s, pj)
                }
            };
            map[i] = Some(compiled);
        }
        map[target.index].unwrap()
    }

    /// Extension axiom `atom <-> def` (EF only, outside all scopes).
    pub fn ext(&mut self, atom: Atom, def: Formula) -> StepRef {
        assert_eq!(self.variant, Variant::EF, "extension axiom outside EF");
        assert_eq!(self.depth(), 0, "extension axiom inside a scope");
        let formula = Formula::iff(Formula::var(atom.clone()), def);
        let id = self.next_id;
        self.next_id += 1;
        self.lines.push(HilbertLine {
            id,
            formula,
            just: HilbertJust::Ext { atom },
        });
        StepRef {
            depth: 0,
            index: self.lines.len() - 1,
        }
    }

    /// Substitution instance of an earlier global line (SF only).
    pub fn sub(&mut self, source: StepRef, subst: Substitution) -> StepRef {
        assert_eq!(self.variant, Variant::SF, "substitution outside SF");
        assert_eq!(self.depth(), 0, "substitution inside a scope");
        assert_eq!(source.depth, 0, "substitution source must be global");
        let formula = apply_substitution(&self.lines[source.index].formula, &subst);
        let source_id = self.lines[source.index].id;
        let id = self.next_id;
        self.next_id += 1;
        self.lines.push(HilbertLine {
            id,
            formula,
            just: HilbertJust::Sub {
                source: source_id,
                subst,
            },
        });
        StepRef {
            depth: 0,
            index: self.lines.len() - 1,
        }
    }

    // -- derived rules ---------------------------------------------------

    fn memoized(&mut self, f: &Formula) -> Option<StepRef> {
        let r = *self.memo.get(f)?;
        Some(self.lift(r))
    }

    fn memoize(&mut self, r: StepRef) {
        if r.depth == 0 {
            self.memo.insert(self.formula(r).clone(), r);
        }
    }

    /// `f -> f`.
    pub fn identity(&mut self, f: &Formula) -> StepRef {
        let goal = Formula::imp(f.clone(), f.clone());
        if let Some(r) = self.memoized(&goal) {
            return r;
        }
        let r = self.identity_at(self.depth(), f);
        self.memoize(r);
        r
    }

    /// From `x: A` and `y: B` derive `A and B`.
    pub fn and_intro(&mut self, x: StepRef, y: StepRef) -> StepRef {
        let a = self.formula(x).clone();
        let b = self.formula(y).clone();
        let a5 = self.axiom(5, &[("P", &a), ("Q", &b)]);
        let s = self.mp(a5, x);
        self.mp(s, y)
    }

    /// From `xy: A and B` derive `A`.
    pub fn and_elim_l(&mut self, xy: StepRef) -> StepRef {
        let (a, b) = match self.formula(xy).kind() {
            crate::formula::FKind::And(a, b) => (a.clone(), b.clone()),
            _ => panic!("and_elim_l on non-conjunction"),
        };
        let a3 = self.axiom(3, &[("P", &a), ("Q", &b)]);
        self.mp(a3, xy)
    }

    /// From `xy: A and B` derive `B`.
    pub fn and_elim_r(&mut self, xy: StepRef) -> StepRef {
        let (a, b) = match self.formula(xy).kind() {
            crate::formula::FKind::And(a, b) => (a.clone(), b.clone()),
            _ => panic!("and_elim_r on non-conjunction"),
        };
        let a4 = self.axiom(4, &[("P", &a), ("Q", &b)]);
        self.mp(a4, xy)
    }

    /// From `x: A` derive `A or q`.
    pub fn or_intro_l(&mut self, x: StepRef, q: &Formula) -> StepRef {
        let a = self.formula(x).clone();
        let a6 = self.axiom(6, &[("P", &a), ("Q", q)]);
        self.mp(a6, x)
    }

    /// From `y: B` derive `p or B`.
    pub fn or_intro_r(&mut self, p: &Formula, y: StepRef) -> StepRef {
        let b = self.formula(y).clone();
        let a7 = self.axiom(7, &[("P", p), ("Q", &b)]);
        self.mp(a7, y)
    }

    /// From `pr: P -> R`, `qr: Q -> R`, and `pq: P or Q` derive `R`.
    pub fn case_split(&mut self, pr: StepRef, qr: StepRef, pq: StepRef) -> StepRef {
        let (p, r) = self
            .formula(pr)
            .as_implication()
            .map(|(a, b)| (a.clone(), b.clone()))
            .expect("case_split: first premise not an implication");
        let q = self
            .formula(qr)
            .as_implication()
            .map(|(a, _)| a.clone())
            .expect("case_split: second premise not an implication");
        let a8 = self.axiom(8, &[("P", &p), ("Q", &q), ("R", &r)]);
        let s1 = self.mp(a8, pr);
        let s2 = self.mp(s1, qr);
        self.mp(s2, pq)
    }

    /// From `pq: P -> Q` and `pnq: P -> not Q` derive `not P`.
    pub fn reductio(&mut self, pq: StepRef, pnq: StepRef) -> StepRef {
        let (p, q) = self
            .formula(pq)
            .as_implication()
            .map(|(a, b)| (a.clone(), b.clone()))
            .expect("reductio: first premise not an implication");
        let a9 = self.axiom(9, &[("P", &p), ("Q", &q)]);
        let s = self.mp(a9, pq);
        self.mp(s, pnq)
    }

    /// From `nnp: not not P` derive `P`.
    pub fn dne(&mut self, nnp: StepRef) -> StepRef {
        let p = match self.formula(nnp).kind() {
            crate::formula::FKind::Not(inner) => match inner.kind() {
                crate::formula::FKind::Not(p) => p.clone(),
                _ => panic!("dne on non-double-negation"),
            },
            _ => panic!("dne on non-double-negation"),
        };
        let a10 = self.axiom(10, &[("P", &p)]);
        self.mp(a10, nnp)
    }

    /// From `zero: 0` derive any `target`.
    pub fn from_zero(&mut self, zero: StepRef, target: &Formula) -> StepRef {
        let a12 = self.axiom(12, &[("P", target)]);
        self.mp(a12, zero)
    }

    /// `not 0`.
    pub fn not_zero(&mut self) -> StepRef {
        let zero = Formula::constant(false);
        let goal = Formula::not(zero.clone());
        if let Some(r) = self.memoized(&goal) {
            return r;
        }
        let s00 = self.axiom(12, &[("P", &zero)]);
        let s0n = self.axiom(12, &[("P", &goal)]);
        let a9 = self.axiom(9, &[("P", &zero), ("Q", &zero)]);
        let s = self.mp(a9, s00);
        let r = self.mp(s, s0n);
        self.memoize(r);
        r
    }

    /// From `imp_zero: A -> 0` derive `not A`.
    pub fn neg_intro(&mut self, imp_zero: StepRef) -> StepRef {
        let zero = Formula::constant(false);
        let a = self
            .formula(imp_zero)
            .as_implication()
            .map(|(a, b)| {
                assert_eq!(b, &zero, "neg_intro: consequent must be 0");
                a.clone()
            })
            .expect("neg_intro: premise not an implication");
        let a9 = self.axiom(9, &[("P", &a), ("Q", &zero)]);
        let s1 = self.mp(a9, imp_zero);
        let nz = self.not_zero();
        let nzf = Formula::not(zero);
        let w = self.axiom(1, &[("P", &nzf), ("Q", &a)]);
        let s2 = self.mp(w, nz);
        self.mp(s1, s2)
    }

    /// From `x: A` and `nx: not A` derive any `target`.
    pub fn from_contradiction(
        &mut self,
        x: StepRef,
        nx: StepRef,
        target: &Formula,
    ) -> StepRef {
        let a = self.formula(x).clone();
        let na = self.formula(nx).clone();
        assert_eq!(na, Formula::not(a.clone()), "premises are not complementary");
        let nt = Formula::not(target.clone());
        let w1 = self.axiom(1, &[("P", &a), ("Q", &nt)]);
        let s1 = self.mp(w1, x);
        let w2 = self.axiom(1, &[("P", &na), ("Q", &nt)]);
        let s2 = self.mp(w2, nx);
        let a9 = self.axiom(9, &[("P", &nt), ("Q", &a)]);
        let s3 = self.mp(a9, s1);
        let s4 = self.mp(s3, s2);
        self.dne(s4)
    }

    /// `f or not f`.
    pub fn excluded_middle(&mut self, f: &Formula) -> StepRef {
        let goal = Formula::or(f.clone(), Formula::not(f.clone()));
        if let Some(r) = self.memoized(&goal) {
            return r;
        }
        let zero = Formula::constant(false);
        let h = Formula::not(goal.clone());
        let hr = self.begin_scope(h);
        let ar = self.begin_scope(f.clone());
        let d1 = self.or_intro_l(ar, &Formula::not(f.clone()));
        let hl = self.lift(hr);
        let z1 = self.from_contradiction(d1, hl, &zero);
        let f_imp_0 = self.end_scope(z1);
        let nf = self.neg_intro(f_imp_0);
        let d2 = self.or_intro_r(f, nf);
        let z2 = self.from_contradiction(d2, hr, &zero);
        let h_imp_0 = self.end_scope(z2);
        let nn = self.neg_intro(h_imp_0);
        let r = self.dne(nn);
        self.memoize(r);
        r
    }
}

fn scheme_pattern(scheme: SchemeId) -> Formula {
    crate::calculi::scheme_formula(scheme)
}

// --- macro expansion --------------------------------------------------------

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MacroError {
    #[error("unknown macro `{0}`")]
    UnknownMacro(String),
    #[error("macro `{name}` takes {expected} input lines, got {got}")]
    Arity {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("macro `{name}` needs binding `{binding}`")]
    MissingBinding { name: String, binding: String },
    #[error("no line with id {0} in the proof prefix")]
    UnknownLine(u64),
    #[error("input shape mismatch: {0}")]
    Shape(String),
}

pub const MACRO_NAMES: &[&str] = &[
    "identity",
    "em",
    "not_zero",
    "dne",
    "ex_falso",
    "and_intro",
    "and_elim_l",
    "and_elim_r",
    "or_intro_l",
    "or_intro_r",
    "case_split",
    "reductio",
    "from_contradiction",
];

/// Append the expansion of a named derived rule to `prefix`, returning only
/// the new lines. `inputs` are ids of lines in the prefix; `bindings`
/// supplies formula parameters under the pattern names P and Q.
pub fn expand_macro(
    prefix: &HilbertProof,
    rule: &str,
    inputs: &[u64],
    bindings: &Substitution,
) -> Result<Vec<HilbertLine>, MacroError> {
    let mut p = Prover::extending(prefix);
    let prefix_len = prefix.lines.len();

    let arity = |expected: usize| -> Result<(), MacroError> {
        if inputs.len() == expected {
            Ok(())
        } else {
            Err(MacroError::Arity {
                name: rule.to_string(),
                expected,
                got: inputs.len(),
            })
        }
    };
    let refs: Vec<StepRef> = inputs
        .iter()
        .map(|&id| p.global_ref(id).ok_or(MacroError::UnknownLine(id)))
        .collect::<Result<_, _>>()?;
    let binding = |name: &str| -> Result<Formula, MacroError> {
        bindings
            .get(&pat(name))
            .cloned()
            .ok_or(MacroError::MissingBinding {
                name: rule.to_string(),
                binding: name.to_string(),
            })
    };
    let shape = |msg: &str| MacroError::Shape(msg.to_string());

    match rule {
        "identity" => {
            arity(0)?;
            let f = binding("P")?;
            p.identity(&f);
        }
        "em" => {
            arity(0)?;
            let f = binding("P")?;
            p.excluded_middle(&f);
        }
        "not_zero" => {
            arity(0)?;
            p.not_zero();
        }
        "dne" => {
            arity(1)?;
            match p.formula(refs[0]).kind() {
                crate::formula::FKind::Not(inner)
                    if matches!(inner.kind(), crate::formula::FKind::Not(_)) => {}
                _ => return Err(shape("dne input must be a double negation")),
            }
            p.dne(refs[0]);
        }
        "ex_falso" => {
            arity(1)?;
            if *p.formula(refs[0]) != Formula::constant(false) {
                return Err(shape("ex_falso input must be the constant 0"));
            }
            let f = binding("P")?;
            p.from_zero(refs[0], &f);
        }
        "and_intro" => {
            arity(2)?;
            p.and_intro(refs[0], refs[1]);
        }
        "and_elim_l" | "and_elim_r" => {
            arity(1)?;
            if !matches!(p.formula(refs[0]).kind(), crate::formula::FKind::And(..)) {
                return Err(shape("input must be a conjunction"));
            }
            if rule == "and_elim_l" {
                p.and_elim_l(refs[0]);
            } else {
                p.and_elim_r(refs[0]);
            }
        }
        "or_intro_l" => {
            arity(1)?;
            let q = binding("Q")?;
            p.or_intro_l(refs[0], &q);
        }
        "or_intro_r" => {
            arity(1)?;
            let q = binding("P")?;
            p.or_intro_r(&q, refs[0]);
        }
        "case_split" => {
            arity(3)?;
            let (pf, rf) = p
                .formula(refs[0])
                .as_implication()
                .map(|(a, b)| (a.clone(), b.clone()))
                .ok_or_else(|| shape("first input must be an implication"))?;
            let (qf, rf2) = p
                .formula(refs[1])
                .as_implication()
                .map(|(a, b)| (a.clone(), b.clone()))
                .ok_or_else(|| shape("second input must be an implication"))?;
            if rf != rf2 {
                return Err(shape("case consequents differ"));
            }
            if *p.formula(refs[2]) != Formula::or(pf, qf) {
                return Err(shape("third input must be the matching disjunction"));
            }
            p.case_split(refs[0], refs[1], refs[2]);
        }
        "reductio" => {
            arity(2)?;
            let (pf, qf) = p
                .formula(refs[0])
                .as_implication()
                .map(|(a, b)| (a.clone(), b.clone()))
                .ok_or_else(|| shape("first input must be an implication"))?;
            let expected = Formula::imp(pf, Formula::not(qf));
            if *p.formula(refs[1]) != expected {
                return Err(shape("second input must negate the first's consequent"));
            }
            p.reductio(refs[0], refs[1]);
        }
        "from_contradiction" => {
            arity(2)?;
            let a = p.formula(refs[0]).clone();
            if *p.formula(refs[1]) != Formula::not(a) {
                return Err(shape("inputs must be complementary"));
            }
            let f = binding("P")?;
            p.from_contradiction(refs[0], refs[1], &f);
        }
        other => return Err(MacroError::UnknownMacro(other.to_string())),
    }
    Ok(p.finish_suffix(prefix_len))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculi::check_frege_family;
    use crate::formula::{brute_force_classify, parse_formula, Classification};

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn assert_proves(p: Prover, expected: &Formula) -> HilbertProof {
        let proof = p.finish();
        let report = check_frege_family(&proof);
        assert!(
            report.accepted(),
            "checker rejected: {:?}",
            report.verdict
        );
        assert_eq!(report.conclusion_formula().unwrap(), expected);
        assert_eq!(
            brute_force_classify(expected).unwrap(),
            Classification::Tautology
        );
        proof
    }

    #[test]
    fn identity_checks() {
        let mut p = Prover::new(Variant::F);
        let g = f("(or a (not b))");
        p.identity(&g);
        assert_proves(p, &Formula::imp(g.clone(), g));
    }

    #[test]
    fn scope_compiles_deduction() {
        // From the scope a |- a and a, conclude a -> (a and a).
        let mut p = Prover::new(Variant::F);
        let a = f("a");
        let h = p.begin_scope(a.clone());
        let c = p.and_intro(h, h);
        p.end_scope(c);
        assert_proves(p, &Formula::imp(a.clone(), Formula::and(a.clone(), a)));
    }

    #[test]
    fn nested_scopes_compile() {
        // a |- (b |- a and b) gives a -> (b -> (a and b)).
        let mut p = Prover::new(Variant::F);
        let a = f("a");
        let b = f("b");
        let ha = p.begin_scope(a.clone());
        let hb = p.begin_scope(b.clone());
        let both = p.and_intro(ha, hb);
        let inner = p.end_scope(both);
        p.end_scope(inner);
        let expected = Formula::imp(
            a.clone(),
            Formula::imp(b.clone(), Formula::and(a, b)),
        );
        assert_proves(p, &expected);
    }

    #[test]
    fn excluded_middle_checks() {
        let mut p = Prover::new(Variant::F);
        let g = f("(and x (not y))");
        p.excluded_middle(&g);
        let expected = Formula::or(g.clone(), Formula::not(g));
        let proof = assert_proves(p, &expected);
        // Two scope levels compile to a constant-size derivation.
        assert!(proof.lines.len() < 400, "EM took {} lines", proof.lines.len());
    }

    #[test]
    fn excluded_middle_is_memoized() {
        let mut p = Prover::new(Variant::F);
        let g = f("x");
        p.excluded_middle(&g);
        let n = p.line_count();
        let r = p.excluded_middle(&g);
        assert_eq!(p.line_count(), n);
        assert_eq!(r.depth, 0);
    }

    #[test]
    fn case_split_checks() {
        // From a or b under hypotheses a -> c, b -> c... build directly:
        // prove (a or b) -> (b or a).
        let mut p = Prover::new(Variant::F);
        let a = f("a");
        let b = f("b");
        let ab = Formula::or(a.clone(), b.clone());
        let ba = Formula::or(b.clone(), a.clone());
        let h = p.begin_scope(ab.clone());
        // a -> (b or a) and b -> (b or a) inside the scope.
        let ha = p.begin_scope(a.clone());
        let r1 = p.or_intro_r(&b, ha);
        let pa = p.end_scope(r1);
        let hb = p.begin_scope(b.clone());
        let r2 = p.or_intro_l(hb, &a);
        let pb = p.end_scope(r2);
        let out = p.case_split(pa, pb, h);
        p.end_scope(out);
        assert_proves(p, &Formula::imp(ab, ba));
    }

    #[test]
    fn neg_intro_and_contradiction_check() {
        // |- not (and a (not a)).
        let mut p = Prover::new(Variant::F);
        let a = f("a");
        let bad = Formula::and(a.clone(), Formula::not(a.clone()));
        let h = p.begin_scope(bad.clone());
        let x = p.and_elim_l(h);
        let nx = p.and_elim_r(h);
        let z = p.from_contradiction(x, nx, &Formula::constant(false));
        let imp0 = p.end_scope(z);
        p.neg_intro(imp0);
        assert_proves(p, &Formula::not(bad));
    }

    #[test]
    fn ef_extension_usable() {
        let mut p = Prover::new(Variant::EF);
        let q = Atom::new("e_d").unwrap();
        let def = f("(or a b)");
        let e = p.ext(q.clone(), def.clone());
        // Use the definition: from the equivalence derive e_d -> (a or b),
        // then conclude something extension-free: (not (a or b)) -> (not e_d)
        // still mentions e_d, so just re-derive a tautology over a, b:
        // and-elim both directions and recombine into def -> def.
        let fwd = p.and_elim_l(e);
        let bwd = p.and_elim_r(e);
        let _ = (fwd, bwd);
        p.identity(&def);
        let proof = p.finish();
        let report = check_frege_family(&proof);
        assert!(report.accepted(), "{:?}", report.verdict);
        assert_eq!(
            report.conclusion_formula().unwrap(),
            &Formula::imp(def.clone(), def)
        );
    }

    #[test]
    fn sf_substitution_usable() {
        let mut p = Prover::new(Variant::SF);
        let a = f("a");
        let gen = p.identity(&a);
        let subst: Substitution = [(Atom::new("a").unwrap(), f("(and x y)"))]
            .into_iter()
            .collect();
        p.sub(gen, subst);
        let inst = f("(and x y)");
        assert_proves(p, &Formula::imp(inst.clone(), inst));
    }

    #[test]
    fn macro_expansion_appends_checkable_lines() {
        // Build a prefix proving a -> a, then expand or_intro on it.
        let mut p = Prover::new(Variant::F);
        let a = f("a");
        p.identity(&a);
        let prefix = p.finish();
        let last_id = prefix.lines.last().unwrap().id;
        let bindings: Substitution = [(pat("Q"), f("b"))].into_iter().collect();
        let suffix = expand_macro(&prefix, "or_intro_l", &[last_id], &bindings).unwrap();
        assert!(!suffix.is_empty());
        let mut full = prefix.clone();
        full.lines.extend(suffix);
        let report = check_frege_family(&full);
        assert!(report.accepted());
        assert_eq!(
            report.conclusion_formula().unwrap(),
            &Formula::or(Formula::imp(a.clone(), a), f("b"))
        );
    }

    #[test]
    fn macro_errors_reported() {
        let mut p = Prover::new(Variant::F);
        p.identity(&f("a"));
        let prefix = p.finish();
        let none = Substitution::new();
        assert!(matches!(
            expand_macro(&prefix, "no_such_rule", &[], &none),
            Err(MacroError::UnknownMacro(_))
        ));
        assert!(matches!(
            expand_macro(&prefix, "and_intro", &[1], &none),
            Err(MacroError::Arity { .. })
        ));
        assert!(matches!(
            expand_macro(&prefix, "identity", &[], &none),
            Err(MacroError::MissingBinding { .. })
        ));
        assert!(matches!(
            expand_macro(&prefix, "dne", &[999], &none),
            Err(MacroError::UnknownLine(999))
        ));
        assert!(matches!(
            expand_macro(&prefix, "dne", &[1], &none),
            Err(MacroError::Shape(_))
        ));
    }

    #[test]
    fn every_macro_name_expands_or_validates() {
        // Smoke test: each named macro either expands on suitable inputs
        // or reports a structured error on empty inputs.
        let mut p = Prover::new(Variant::F);
        p.identity(&f("a"));
        let prefix = p.finish();
        let bindings: Substitution = [(pat("P"), f("a")), (pat("Q"), f("b"))]
            .into_iter()
            .collect();
        for name in MACRO_NAMES {
            let r = expand_macro(&prefix, name, &[], &bindings);
            match r {
                Ok(lines) => assert!(!lines.is_empty()),
                Err(MacroError::Arity { .. }) => {}
                Err(e) => panic!("macro {name}: unexpected error {e}"),
            }
        }
    }
}
