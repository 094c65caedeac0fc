//! Pigeonhole formulas: `m` pigeons into `h` holes, as a contradictory CNF
//! or as the tautological disjunction of negated clauses, including weak
//! variants with many more pigeons than holes.

use crate::cnf::{Clause, CnfFormula, Literal};
use crate::formula::{Atom, Formula};

use super::GenError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhpForm {
    CnfContradiction,
    DnfTautology,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhpParams {
    pub pigeons: usize,
    pub holes: usize,
    /// Also emit the at-most-one-hole-per-pigeon clauses. Historically
    /// optional; on by default in the CLI.
    pub functionality: bool,
}

impl PhpParams {
    pub fn new(pigeons: usize, holes: usize, functionality: bool) -> Result<PhpParams, GenError> {
        if pigeons < 2 {
            return Err(GenError::Param(format!(
                "need at least 2 pigeons, got {pigeons}"
            )));
        }
        if holes < 1 {
            return Err(GenError::Param("need at least 1 hole".to_string()));
        }
        Ok(PhpParams {
            pigeons,
            holes,
            functionality,
        })
    }

    /// The standard instance with `n` pigeons and `n - 1` holes.
    pub fn standard(n: usize, functionality: bool) -> Result<PhpParams, GenError> {
        PhpParams::new(n, n.saturating_sub(1).max(1), functionality)
    }
}

pub fn php_atom(pigeon: usize, hole: usize) -> Atom {
    Atom::new(&format!("p_{pigeon}_{hole}")).expect("valid generated name")
}

/// The clause set: pigeon clauses, hole clauses pairwise, and (optionally)
/// functionality clauses pairwise. Atoms are `p_<i>_<j>`, 1-based.
pub fn gen_php_cnf(params: PhpParams) -> CnfFormula {
    let m = params.pigeons;
    let h = params.holes;
    let mut atoms = Vec::with_capacity(m * h);
    for i in 1..=m {
        for j in 1..=h {
            atoms.push(php_atom(i, j));
        }
    }
    let mut clauses = Vec::new();
    // Each pigeon sits somewhere.
    for i in 1..=m {
        clauses.push(Clause::new((1..=h).map(|j| Literal::pos(php_atom(i, j)))));
    }
    // No two pigeons share a hole; one binary clause per pair.
    for j in 1..=h {
        for i1 in 1..=m {
            for i2 in (i1 + 1)..=m {
                clauses.push(Clause::new([
                    Literal::neg(php_atom(i1, j)),
                    Literal::neg(php_atom(i2, j)),
                ]));
            }
        }
    }
    // No pigeon sits in two holes.
    if params.functionality {
        for i in 1..=m {
            for j1 in 1..=h {
                for j2 in (j1 + 1)..=h {
                    clauses.push(Clause::new([
                        Literal::neg(php_atom(i, j1)),
                        Literal::neg(php_atom(i, j2)),
                    ]));
                }
            }
        }
    }
    CnfFormula::new(atoms, clauses).expect("generated atoms are declared")
}

/// The tautology form: the disjunction of negations of exactly the CNF
/// clauses, in clause order.
pub fn gen_php_dnf(params: PhpParams) -> Formula {
    gen_php_cnf(params).negation_dnf()
}
