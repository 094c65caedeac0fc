//! Clauses, CNF formulas and the DIMACS interchange format.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::formula::{Atom, Classification, Formula, DEFAULT_ATOM_LIMIT};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CnfError {
    #[error("DIMACS parse error on line {line}: {message}")]
    Dimacs { line: usize, message: String },
    #[error("literal atom `{0}` is not in the declared atom set")]
    UndeclaredAtom(String),
    #[error("cnf has {atoms} atoms, above the enumeration limit {limit}")]
    TooManyAtoms { atoms: usize, limit: usize },
}

/// A signed atom.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub atom: Atom,
    pub positive: bool,
}

impl Literal {
    pub fn pos(atom: Atom) -> Literal {
        Literal { atom, positive: true }
    }

    pub fn neg(atom: Atom) -> Literal {
        Literal { atom, positive: false }
    }

    pub fn negated(&self) -> Literal {
        Literal {
            atom: self.atom.clone(),
            positive: !self.positive,
        }
    }

    /// The literal as a formula: `p` or `(not p)`.
    pub fn to_formula(&self) -> Formula {
        let v = Formula::var(self.atom.clone());
        if self.positive {
            v
        } else {
            Formula::not(v)
        }
    }

    /// The complement as a formula, used for negated-clause disjuncts:
    /// `p` becomes `(not p)` and `(not p)` becomes `p`.
    pub fn complement_formula(&self) -> Formula {
        self.negated().to_formula()
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.atom)
        } else {
            write!(f, "-{}", self.atom)
        }
    }
}

/// A clause: a set of literals, canonicalized on construction (sorted,
/// duplicate literals removed). A clause may contain both `p` and `-p`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Clause(Vec<Literal>);

impl Clause {
    pub fn new(literals: impl IntoIterator<Item = Literal>) -> Clause {
        let set: BTreeSet<Literal> = literals.into_iter().collect();
        Clause(set.into_iter().collect())
    }

    pub fn empty() -> Clause {
        Clause(Vec::new())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn literals(&self) -> &[Literal] {
        &self.0
    }

    pub fn contains(&self, lit: &Literal) -> bool {
        self.0.binary_search(lit).is_ok()
    }

    /// True when every literal of `self` occurs in `other`.
    pub fn subsumes(&self, other: &Clause) -> bool {
        self.0.iter().all(|l| other.contains(l))
    }

    /// Contains some atom both positively and negatively.
    pub fn is_tautological(&self) -> bool {
        self.0.windows(2).any(|w| {
            w[0].atom == w[1].atom && w[0].positive != w[1].positive
        })
    }

    /// The clause as a right-nested disjunction; the empty clause is `0`.
    pub fn to_formula(&self) -> Formula {
        let mut it = self.0.iter().rev();
        match it.next() {
            None => Formula::constant(false),
            Some(last) => {
                let mut acc = last.to_formula();
                for lit in it {
                    acc = Formula::or(lit.to_formula(), acc);
                }
                acc
            }
        }
    }

    /// The negation of the clause as a right-nested conjunction of
    /// complemented literals; the disjunct shape used by DNF tautologies.
    /// The empty clause negates to `1`.
    pub fn negation_formula(&self) -> Formula {
        let mut it = self.0.iter().rev();
        match it.next() {
            None => Formula::constant(true),
            Some(last) => {
                let mut acc = last.complement_formula();
                for lit in it {
                    acc = Formula::and(lit.complement_formula(), acc);
                }
                acc
            }
        }
    }

    /// Resolvent on `pivot`: drops the positive pivot from `self` and the
    /// negative pivot from `other`. Opposite-polarity pivot occurrences are
    /// kept, so resolving tautological clauses stays sound. Callers check
    /// pivot occurrence themselves.
    pub fn resolve(&self, other: &Clause, pivot: &Atom) -> Clause {
        let pos = Literal::pos(pivot.clone());
        let neg = Literal::neg(pivot.clone());
        Clause::new(
            self.0
                .iter()
                .filter(|l| **l != pos)
                .chain(other.0.iter().filter(|l| **l != neg))
                .cloned(),
        )
    }

    pub fn satisfied_by(&self, value_of: impl Fn(&Atom) -> bool) -> bool {
        self.0.iter().any(|l| value_of(&l.atom) == l.positive)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "<empty>");
        }
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// A clause set with a declared atom set. Duplicate clauses are permitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    atoms: Vec<Atom>,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    pub fn new(
        atoms: impl IntoIterator<Item = Atom>,
        clauses: Vec<Clause>,
    ) -> Result<CnfFormula, CnfError> {
        let atom_list: Vec<Atom> = atoms.into_iter().collect();
        let declared: BTreeSet<&Atom> = atom_list.iter().collect();
        for clause in &clauses {
            for lit in clause.literals() {
                if !declared.contains(&lit.atom) {
                    return Err(CnfError::UndeclaredAtom(lit.atom.name().to_string()));
                }
            }
        }
        Ok(CnfFormula {
            atoms: atom_list,
            clauses,
        })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// The CNF as a right-nested conjunction of clause disjunctions.
    /// An empty clause list conjoins to `1`.
    pub fn to_formula(&self) -> Formula {
        let mut it = self.clauses.iter().rev();
        match it.next() {
            None => Formula::constant(true),
            Some(last) => {
                let mut acc = last.to_formula();
                for c in it {
                    acc = Formula::and(c.to_formula(), acc);
                }
                acc
            }
        }
    }

    /// The disjunction of negations of the clauses, in clause order: the
    /// DNF tautology shape paired with a contradictory CNF.
    pub fn negation_dnf(&self) -> Formula {
        let mut it = self.clauses.iter().rev();
        match it.next() {
            None => Formula::constant(false),
            Some(last) => {
                let mut acc = last.negation_formula();
                for c in it {
                    acc = Formula::or(c.negation_formula(), acc);
                }
                acc
            }
        }
    }

    /// Exhaustive satisfiability check over the declared atom set.
    pub fn brute_force_sat(&self) -> Result<bool, CnfError> {
        self.brute_force_sat_with_limit(DEFAULT_ATOM_LIMIT)
    }

    pub fn brute_force_sat_with_limit(&self, limit: usize) -> Result<bool, CnfError> {
        if self.atoms.len() > limit {
            return Err(CnfError::TooManyAtoms {
                atoms: self.atoms.len(),
                limit,
            });
        }
        let index: BTreeMap<&Atom, usize> = self.atoms.iter().zip(0..).collect();
        let compiled: Vec<Vec<(usize, bool)>> = self
            .clauses
            .iter()
            .map(|c| {
                c.literals()
                    .iter()
                    .map(|l| (index[&l.atom], l.positive))
                    .collect()
            })
            .collect();
        let total: u64 = 1u64 << self.atoms.len();
        'masks: for mask in 0..total {
            for clause in &compiled {
                if !clause
                    .iter()
                    .any(|&(i, pos)| (mask >> i) & 1 == pos as u64)
                {
                    continue 'masks;
                }
            }
            return Ok(true);
        }
        Ok(false)
    }

    pub fn brute_force_classification(&self) -> Result<Classification, CnfError> {
        // A CNF over its declared atoms; tautology means every assignment
        // satisfies all clauses.
        if self.atoms.len() > DEFAULT_ATOM_LIMIT {
            return Err(CnfError::TooManyAtoms {
                atoms: self.atoms.len(),
                limit: DEFAULT_ATOM_LIMIT,
            });
        }
        let index: BTreeMap<&Atom, usize> = self.atoms.iter().zip(0..).collect();
        let total: u64 = 1u64 << self.atoms.len();
        let mut any_true = false;
        let mut any_false = false;
        for mask in 0..total {
            let sat = self.clauses.iter().all(|c| {
                c.literals()
                    .iter()
                    .any(|l| (mask >> index[&l.atom]) & 1 == l.positive as u64)
            });
            if sat {
                any_true = true;
            } else {
                any_false = true;
            }
            if any_true && any_false {
                return Ok(Classification::SatisfiableNotTautology);
            }
        }
        Ok(if any_true {
            Classification::Tautology
        } else {
            Classification::Unsatisfiable
        })
    }
}

// --- DIMACS ----------------------------------------------------------------

/// Serialize as DIMACS with a `c atoms:` sidecar naming the variables in
/// index order.
pub fn write_dimacs(cnf: &CnfFormula) -> String {
    let mut out = String::new();
    out.push_str("c atoms:");
    for atom in cnf.atoms() {
        out.push(' ');
        out.push_str(atom.name());
    }
    out.push('\n');
    out.push_str(&format!(
        "p cnf {} {}\n",
        cnf.atoms().len(),
        cnf.clauses().len()
    ));
    let index: BTreeMap<&Atom, usize> = cnf.atoms().iter().zip(1..).collect();
    for clause in cnf.clauses() {
        for lit in clause.literals() {
            let v = index[&lit.atom] as i64;
            out.push_str(&format!("{} ", if lit.positive { v } else { -v }));
        }
        out.push_str("0\n");
    }
    out
}

/// Parse DIMACS. A `c atoms: ...` comment names variables; without it,
/// variable `k` is named `v<k>`.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, CnfError> {
    let mut atom_names: Option<Vec<String>> = None;
    let mut declared_vars: Option<usize> = None;
    let mut declared_clauses: Option<usize> = None;
    let mut clause_lits: Vec<Vec<i64>> = Vec::new();
    let mut current: Vec<i64> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let err = |message: &str| CnfError::Dimacs {
            line: lineno + 1,
            message: message.to_string(),
        };
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("c atoms:") {
            atom_names = Some(rest.split_whitespace().map(|s| s.to_string()).collect());
            continue;
        }
        if line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("p cnf") {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(err("malformed problem line"));
            }
            declared_vars = Some(parts[0].parse().map_err(|_| err("bad variable count"))?);
            declared_clauses = Some(parts[1].parse().map_err(|_| err("bad clause count"))?);
            continue;
        }
        if declared_vars.is_none() {
            return Err(err("clause before problem line"));
        }
        for tok in line.split_whitespace() {
            let v: i64 = tok.parse().map_err(|_| err("bad literal"))?;
            if v == 0 {
                clause_lits.push(std::mem::take(&mut current));
            } else {
                current.push(v);
            }
        }
    }
    if !current.is_empty() {
        return Err(CnfError::Dimacs {
            line: text.lines().count(),
            message: "unterminated clause".to_string(),
        });
    }
    let nvars = declared_vars.ok_or(CnfError::Dimacs {
        line: 0,
        message: "missing problem line".to_string(),
    })?;
    if let Some(n) = declared_clauses {
        if n != clause_lits.len() {
            return Err(CnfError::Dimacs {
                line: 0,
                message: format!("declared {} clauses, found {}", n, clause_lits.len()),
            });
        }
    }
    let names: Vec<String> = match atom_names {
        Some(names) => {
            if names.len() != nvars {
                return Err(CnfError::Dimacs {
                    line: 0,
                    message: format!(
                        "atom sidecar names {} atoms, problem line declares {}",
                        names.len(),
                        nvars
                    ),
                });
            }
            names
        }
        None => (1..=nvars).map(|k| format!("v{k}")).collect(),
    };
    let mut atoms = Vec::with_capacity(nvars);
    for name in &names {
        let atom = Atom::new(name).map_err(|_| CnfError::Dimacs {
            line: 0,
            message: format!("invalid atom name `{name}` in sidecar"),
        })?;
        if atom.is_extension() {
            return Err(CnfError::Dimacs {
                line: 0,
                message: format!("reserved extension atom `{name}` in CNF"),
            });
        }
        atoms.push(atom);
    }
    let mut clauses = Vec::with_capacity(clause_lits.len());
    for lits in clause_lits {
        let mut clause = Vec::with_capacity(lits.len());
        for v in lits {
            let idx = v.unsigned_abs() as usize;
            if idx == 0 || idx > nvars {
                return Err(CnfError::Dimacs {
                    line: 0,
                    message: format!("literal {v} out of range"),
                });
            }
            let atom = atoms[idx - 1].clone();
            clause.push(if v > 0 {
                Literal::pos(atom)
            } else {
                Literal::neg(atom)
            });
        }
        clauses.push(Clause::new(clause));
    }
    CnfFormula::new(atoms, clauses)
}
