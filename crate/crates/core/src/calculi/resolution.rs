//! Resolution and extended resolution refutation checkers over a fixed
//! input CNF, plus the line-oriented text format.

use std::collections::{BTreeSet, HashMap};

use crate::cnf::{Clause, CnfFormula, Literal};
use crate::formula::Atom;

use super::{CheckReport, Conclusion, ProofFormatError, RejectReason, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResolutionSystem {
    Res,
    Er,
}

impl ResolutionSystem {
    pub fn name(&self) -> &'static str {
        match self {
            ResolutionSystem::Res => "RES",
            ResolutionSystem::Er => "ER",
        }
    }

    pub fn from_name(s: &str) -> Option<ResolutionSystem> {
        match s {
            "RES" => Some(ResolutionSystem::Res),
            "ER" => Some(ResolutionSystem::Er),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResolutionJust {
    /// 1-based index into the input CNF's clause list.
    Input(usize),
    /// Premise line ids. The pivot is optional in memory: when absent the
    /// checker infers the unique atom positive in `left` and negative in
    /// `right` whose resolvent matches the stated clause.
    Resolve {
        left: u64,
        right: u64,
        pivot: Option<Atom>,
    },
    /// One of the three defining clauses of the EXTEND marker with this id.
    ExtendDef(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResolutionLine {
    Clause {
        id: u64,
        clause: Clause,
        just: ResolutionJust,
    },
    /// Introduces `atom` standing for `l1 or l2`; its three defining
    /// clauses follow as ExtendDef lines.
    ExtendMarker {
        id: u64,
        atom: Atom,
        l1: Literal,
        l2: Literal,
    },
}

impl ResolutionLine {
    pub fn id(&self) -> u64 {
        match self {
            ResolutionLine::Clause { id, .. } => *id,
            ResolutionLine::ExtendMarker { id, .. } => *id,
        }
    }

    /// Literal count plus one for a clause line, three for a marker.
    pub fn symbols(&self) -> u64 {
        match self {
            ResolutionLine::Clause { clause, .. } => clause.len() as u64 + 1,
            ResolutionLine::ExtendMarker { .. } => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionProof {
    pub system: ResolutionSystem,
    /// Path of the input CNF recorded in the text header.
    pub cnf_path: String,
    pub lines: Vec<ResolutionLine>,
}

impl ResolutionProof {
    pub fn steps(&self) -> u64 {
        self.lines.len() as u64
    }

    pub fn symbols(&self) -> u64 {
        self.lines.iter().map(|l| l.symbols()).sum()
    }
}

/// The three defining clauses of `atom <-> (l1 or l2)`.
pub fn extension_clauses(atom: &Atom, l1: &Literal, l2: &Literal) -> [Clause; 3] {
    [
        Clause::new([Literal::neg(atom.clone()), l1.clone(), l2.clone()]),
        Clause::new([Literal::pos(atom.clone()), l1.negated()]),
        Clause::new([Literal::pos(atom.clone()), l2.negated()]),
    ]
}

struct CheckState<'a> {
    cnf: &'a CnfFormula,
    tree_like: bool,
    allow_extend: bool,
    /// line id -> derived clause.
    clauses: HashMap<u64, Clause>,
    /// premise ids already consumed, for the tree-like restriction.
    consumed: BTreeSet<u64>,
    /// marker id -> defining clauses not yet introduced.
    pending_defs: HashMap<u64, Vec<Clause>>,
    /// atoms available for extension literals and unavailable as fresh names.
    known_atoms: BTreeSet<Atom>,
}

fn check_inner(
    proof: &ResolutionProof,
    cnf: &CnfFormula,
    tree_like: bool,
    allow_extend: bool,
) -> CheckReport {
    let steps = proof.steps();
    let symbols = proof.symbols();
    let reject = |line: u64, reason: RejectReason| CheckReport {
        verdict: Verdict::Reject { line, reason },
        conclusion: None,
        steps,
        symbols,
    };

    if proof.lines.is_empty() {
        return reject(0, RejectReason::EmptyProof);
    }

    let mut st = CheckState {
        cnf,
        tree_like,
        allow_extend,
        clauses: HashMap::new(),
        consumed: BTreeSet::new(),
        pending_defs: HashMap::new(),
        known_atoms: cnf.atoms().iter().cloned().collect(),
    };

    let mut last_id: Option<u64> = None;
    for line in &proof.lines {
        let id = line.id();
        if let Some(prev) = last_id {
            if id <= prev {
                return reject(id, RejectReason::NondecreasingId);
            }
        }
        last_id = Some(id);
        if let Some(reason) = check_line(&mut st, line) {
            return reject(id, reason);
        }
    }

    match proof.lines.last() {
        Some(ResolutionLine::Clause { clause, .. }) if clause.is_empty() => CheckReport {
            verdict: Verdict::Accept,
            conclusion: Some(Conclusion::EmptyClause),
            steps,
            symbols,
        },
        Some(line) => reject(line.id(), RejectReason::NotEmptyFinal),
        None => unreachable!(),
    }
}

fn check_line(st: &mut CheckState<'_>, line: &ResolutionLine) -> Option<RejectReason> {
    match line {
        ResolutionLine::ExtendMarker { id, atom, l1, l2 } => {
            if !st.allow_extend {
                return Some(RejectReason::ExtendForbidden);
            }
            // Extension atoms live in the reserved `e_` namespace and must
            // abbreviate literals over atoms already in play.
            if !atom.is_extension() || st.known_atoms.contains(atom) {
                return Some(RejectReason::ExtNotFresh);
            }
            if !st.known_atoms.contains(&l1.atom)
                || !st.known_atoms.contains(&l2.atom)
                || l1.atom == *atom
                || l2.atom == *atom
            {
                return Some(RejectReason::BadExtensionClause);
            }
            st.known_atoms.insert(atom.clone());
            st.pending_defs
                .insert(*id, extension_clauses(atom, l1, l2).to_vec());
            None
        }
        ResolutionLine::Clause { id, clause, just } => {
            match just {
                ResolutionJust::Input(k) => {
                    let input = match k.checked_sub(1).and_then(|i| st.cnf.clauses().get(i)) {
                        Some(c) => c,
                        None => return Some(RejectReason::UnknownId),
                    };
                    if clause != input {
                        return Some(RejectReason::InputMismatch);
                    }
                }
                ResolutionJust::Resolve { left, right, pivot } => {
                    let (lc, rc) = match (st.clauses.get(left), st.clauses.get(right)) {
                        (Some(l), Some(r)) => (l, r),
                        _ => return Some(RejectReason::UnknownId),
                    };
                    let ok = match pivot {
                        Some(p) => {
                            lc.contains(&Literal::pos(p.clone()))
                                && rc.contains(&Literal::neg(p.clone()))
                                && lc.resolve(rc, p) == *clause
                        }
                        None => lc.literals().iter().any(|l| {
                            l.positive
                                && rc.contains(&l.negated())
                                && lc.resolve(rc, &l.atom) == *clause
                        }),
                    };
                    if !ok {
                        return Some(RejectReason::BadPivot);
                    }
                    if st.tree_like {
                        if !st.consumed.insert(*left) || !st.consumed.insert(*right) {
                            return Some(RejectReason::ReuseInTree);
                        }
                    }
                }
                ResolutionJust::ExtendDef(marker) => {
                    if !st.allow_extend {
                        return Some(RejectReason::ExtendForbidden);
                    }
                    let pending = match st.pending_defs.get_mut(marker) {
                        Some(p) => p,
                        None => return Some(RejectReason::UnknownId),
                    };
                    let pos = match pending.iter().position(|c| c == clause) {
                        Some(p) => p,
                        None => return Some(RejectReason::BadExtensionClause),
                    };
                    pending.remove(pos);
                }
            }
            for lit in clause.literals() {
                st.known_atoms.insert(lit.atom.clone());
            }
            st.clauses.insert(*id, clause.clone());
            None
        }
    }
}

/// Check a resolution refutation of `cnf`. With `tree_like` every derived
/// or input line may serve as a premise at most once.
pub fn check_resolution(proof: &ResolutionProof, cnf: &CnfFormula, tree_like: bool) -> CheckReport {
    check_inner(proof, cnf, tree_like, false)
}

/// Check an extended resolution refutation of `cnf`: resolution plus
/// EXTEND markers introducing fresh definitions `q <-> (l1 or l2)`.
pub fn check_extended_resolution(proof: &ResolutionProof, cnf: &CnfFormula) -> CheckReport {
    check_inner(proof, cnf, false, true)
}

// --- text format -----------------------------------------------------------

/// Read the `cnf <path>` header of a refutation without parsing the body,
/// so the caller can load the input CNF first.
pub fn resolution_cnf_path(text: &str) -> Result<String, ProofFormatError> {
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("system ") {
            continue;
        }
        if let Some(path) = line.strip_prefix("cnf ") {
            return Ok(path.trim().to_string());
        }
        return Err(ProofFormatError::Format {
            line: lineno + 1,
            message: "expected `cnf <path>` header".to_string(),
        });
    }
    Err(ProofFormatError::Format {
        line: 0,
        message: "missing `cnf <path>` header".to_string(),
    })
}

/// Render using literal integers indexed by the CNF atom order followed by
/// extension atoms in marker order; clause lines end their literal list and
/// their justification with `0`.
pub fn render_resolution(proof: &ResolutionProof, cnf: &CnfFormula) -> String {
    let mut index: HashMap<Atom, usize> = cnf
        .atoms()
        .iter()
        .enumerate()
        .map(|(i, a)| (a.clone(), i + 1))
        .collect();
    for line in &proof.lines {
        if let ResolutionLine::ExtendMarker { atom, .. } = line {
            let next = index.len() + 1;
            index.entry(atom.clone()).or_insert(next);
        }
    }
    let lit = |l: &Literal| -> i64 {
        let k = index[&l.atom] as i64;
        if l.positive {
            k
        } else {
            -k
        }
    };
    let mut out = format!("system {}\ncnf {}\n", proof.system.name(), proof.cnf_path);
    for line in &proof.lines {
        match line {
            ResolutionLine::ExtendMarker { id, atom, l1, l2 } => {
                out.push_str(&format!(
                    "{id} e {} {} {}\n",
                    atom.name(),
                    lit(l1),
                    lit(l2)
                ));
            }
            ResolutionLine::Clause { id, clause, just } => {
                let lits: Vec<String> =
                    clause.literals().iter().map(|l| lit(l).to_string()).collect();
                let body = if lits.is_empty() {
                    String::new()
                } else {
                    format!("{} ", lits.join(" "))
                };
                let tail = match just {
                    ResolutionJust::Input(k) => format!("i{k} 0"),
                    ResolutionJust::Resolve { left, right, .. } => format!("{left} {right} 0"),
                    ResolutionJust::ExtendDef(m) => format!("e{m} 0"),
                };
                out.push_str(&format!("{id} {body}0 {tail}\n"));
            }
        }
    }
    out
}

pub fn parse_resolution(
    text: &str,
    cnf: &CnfFormula,
) -> Result<ResolutionProof, ProofFormatError> {
    let mut system: Option<ResolutionSystem> = None;
    let mut cnf_path: Option<String> = None;
    let mut atoms: Vec<Atom> = cnf.atoms().to_vec();
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
            system = Some(
                ResolutionSystem::from_name(rest.trim())
                    .ok_or_else(|| err(format!("unknown system `{}`", rest.trim())))?,
            );
            continue;
        }
        if let Some(rest) = line.strip_prefix("cnf ") {
            cnf_path = Some(rest.trim().to_string());
            continue;
        }
        if system.is_none() || cnf_path.is_none() {
            return Err(err("proof line before headers".to_string()));
        }
        let mut tokens = line.split_whitespace();
        let id: u64 = tokens
            .next()
            .unwrap()
            .parse()
            .map_err(|_| err("bad line id".to_string()))?;
        let rest: Vec<&str> = tokens.collect();

        if rest.first() == Some(&"e") {
            // EXTEND marker: `<id> e <atom> <lit1> <lit2>`.
            if rest.len() != 4 {
                return Err(err("EXTEND marker takes an atom and two literals".to_string()));
            }
            let atom = Atom::new(rest[1]).map_err(|e| err(e.to_string()))?;
            let decode = |tok: &str| -> Result<Literal, ProofFormatError> {
                let v: i64 = tok.parse().map_err(|_| err(format!("bad literal `{tok}`")))?;
                let k = v.unsigned_abs() as usize;
                if v == 0 || k > atoms.len() {
                    return Err(err(format!("literal `{tok}` out of range")));
                }
                let a = atoms[k - 1].clone();
                Ok(if v > 0 { Literal::pos(a) } else { Literal::neg(a) })
            };
            let l1 = decode(rest[2])?;
            let l2 = decode(rest[3])?;
            atoms.push(atom.clone());
            lines.push(ResolutionLine::ExtendMarker { id, atom, l1, l2 });
            continue;
        }

        // Clause line: `<id> <lits> 0 <just> 0`.
        if rest.last() != Some(&"0") {
            return Err(err("clause line must end with 0".to_string()));
        }
        let first_zero = rest
            .iter()
            .position(|t| *t == "0")
            .ok_or_else(|| err("missing literal terminator 0".to_string()))?;
        let just_tokens = &rest[first_zero + 1..rest.len() - 1];
        let mut literals = Vec::with_capacity(first_zero);
        for tok in &rest[..first_zero] {
            let v: i64 = tok.parse().map_err(|_| err(format!("bad literal `{tok}`")))?;
            let k = v.unsigned_abs() as usize;
            if k == 0 || k > atoms.len() {
                return Err(err(format!("literal `{tok}` out of range")));
            }
            let a = atoms[k - 1].clone();
            literals.push(if v > 0 { Literal::pos(a) } else { Literal::neg(a) });
        }
        let just = match just_tokens {
            [one] if one.starts_with('i') => ResolutionJust::Input(
                one[1..]
                    .parse()
                    .map_err(|_| err("bad input index".to_string()))?,
            ),
            [one] if one.starts_with('e') => ResolutionJust::ExtendDef(
                one[1..]
                    .parse()
                    .map_err(|_| err("bad marker id".to_string()))?,
            ),
            [a, b] => ResolutionJust::Resolve {
                left: a.parse().map_err(|_| err("bad premise id".to_string()))?,
                right: b.parse().map_err(|_| err("bad premise id".to_string()))?,
                pivot: None,
            },
            _ => return Err(err("bad justification".to_string())),
        };
        lines.push(ResolutionLine::Clause {
            id,
            clause: Clause::new(literals),
            just,
        });
    }

    Ok(ResolutionProof {
        system: system.ok_or(ProofFormatError::Format {
            line: 0,
            message: "missing system header".to_string(),
        })?,
        cnf_path: cnf_path.ok_or(ProofFormatError::Format {
            line: 0,
            message: "missing cnf header".to_string(),
        })?,
        lines,
    })
}
