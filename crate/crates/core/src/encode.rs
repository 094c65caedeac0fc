//! Algebraic images of CNFs: multilinear polynomial equation systems and
//! integer linear inequality systems, with an exhaustive 0-1 solvability
//! oracle. Both encodings have a 0-1 solution exactly when the CNF is
//! satisfiable.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::cnf::CnfFormula;
use crate::formula::{Atom, DEFAULT_ATOM_LIMIT};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EncodeError {
    #[error("system has {atoms} atoms, above the enumeration limit {limit}")]
    TooManyAtoms { atoms: usize, limit: usize },
}

/// An integer-coefficient polynomial in multilinear normal form: monomials
/// are sets of atoms (x^2 is reduced to x on construction), kept sorted,
/// with no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    terms: BTreeMap<BTreeSet<Atom>, i64>,
}

impl Polynomial {
    pub fn zero() -> Polynomial {
        Polynomial::default()
    }

    pub fn constant(c: i64) -> Polynomial {
        let mut p = Polynomial::zero();
        p.add_term(BTreeSet::new(), c);
        p
    }

    pub fn var(atom: Atom) -> Polynomial {
        let mut p = Polynomial::zero();
        p.add_term([atom].into_iter().collect(), 1);
        p
    }

    pub fn add_term(&mut self, monomial: BTreeSet<Atom>, coefficient: i64) {
        if coefficient == 0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(monomial) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += coefficient;
                if *e.get() == 0 {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(coefficient);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BTreeSet<Atom>, i64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c);
        }
        out
    }

    /// Product with multilinear reduction: monomial union absorbs repeated
    /// atoms, which is exactly x^2 = x.
    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m1, c1) in self.terms() {
            for (m2, c2) in other.terms() {
                let monomial: BTreeSet<Atom> = m1.union(m2).cloned().collect();
                out.add_term(monomial, c1 * c2);
            }
        }
        out
    }

    pub fn eval(&self, value_of: impl Fn(&Atom) -> bool) -> i64 {
        self.terms()
            .map(|(m, c)| {
                if m.iter().all(|a| value_of(a)) {
                    c
                } else {
                    0
                }
            })
            .sum()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let rendered: Vec<String> = self
            .terms()
            .map(|(m, c)| {
                let mut s = c.to_string();
                for atom in m {
                    s.push('*');
                    s.push_str(atom.name());
                }
                s
            })
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

/// One equation `poly = 0`. Equations carrying `boolean_axiom` are the
/// per-atom x^2 - x = 0 constraints; they reduce to the zero polynomial in
/// multilinear form and are kept for fidelity of the serialized system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub poly: Polynomial,
    pub boolean_axiom: Option<Atom>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolynomialSystem {
    pub atoms: Vec<Atom>,
    pub equations: Vec<Equation>,
}

/// Per clause: the product of (1 - x) over positive literals and x over
/// negative literals, asserted = 0; plus one boolean axiom per atom.
pub fn encode_poly_system(cnf: &CnfFormula) -> PolynomialSystem {
    let mut equations = Vec::new();
    for clause in cnf.clauses() {
        let mut poly = Polynomial::constant(1);
        for lit in clause.literals() {
            let x = Polynomial::var(lit.atom.clone());
            let factor = if lit.positive {
                Polynomial::constant(1).add(&x.mul(&Polynomial::constant(-1)))
            } else {
                x
            };
            poly = poly.mul(&factor);
        }
        equations.push(Equation {
            poly,
            boolean_axiom: None,
        });
    }
    for atom in cnf.atoms() {
        equations.push(Equation {
            poly: Polynomial::zero(),
            boolean_axiom: Some(atom.clone()),
        });
    }
    PolynomialSystem {
        atoms: cnf.atoms().to_vec(),
        equations,
    }
}

/// One equation per line: monomials as `<coef>*a*b`, joined by ` + `, with
/// suffix `= 0`. Boolean axioms are rendered in their unreduced x*x - x
/// form and tagged `# reduced`.
pub fn render_poly_system(system: &PolynomialSystem) -> String {
    let mut out = String::new();
    for eq in &system.equations {
        match &eq.boolean_axiom {
            Some(atom) => {
                out.push_str(&format!(
                    "1*{a}*{a} + -1*{a} = 0 # reduced\n",
                    a = atom.name()
                ));
            }
            None => out.push_str(&format!("{} = 0\n", eq.poly)),
        }
    }
    out
}

/// One inequality `sum(coefficients * atoms) >= rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearConstraint {
    pub coefficients: BTreeMap<Atom, i64>,
    pub rhs: i64,
}

impl LinearConstraint {
    pub fn satisfied(&self, value_of: impl Fn(&Atom) -> bool) -> bool {
        let lhs: i64 = self
            .coefficients
            .iter()
            .map(|(a, c)| if value_of(a) { *c } else { 0 })
            .sum();
        lhs >= self.rhs
    }
}

/// Clause constraints plus implicit 0 <= x <= 1 bounds per atom; the bound
/// pair counts as two constraints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    pub atoms: Vec<Atom>,
    pub constraints: Vec<LinearConstraint>,
}

impl LinearSystem {
    /// Clause constraints plus both integrality bounds per atom.
    pub fn constraint_count(&self) -> usize {
        self.constraints.len() + 2 * self.atoms.len()
    }
}

/// Per clause: sum of positive-literal atoms plus (1 - x) per negative
/// literal, at least 1; normalized to integers as
/// `sum(+/- x) >= 1 - #negative`.
pub fn encode_linear_system(cnf: &CnfFormula) -> LinearSystem {
    let mut constraints = Vec::new();
    for clause in cnf.clauses() {
        let mut coefficients: BTreeMap<Atom, i64> = BTreeMap::new();
        let mut negatives = 0i64;
        for lit in clause.literals() {
            let entry = coefficients.entry(lit.atom.clone()).or_insert(0);
            if lit.positive {
                *entry += 1;
            } else {
                *entry -= 1;
                negatives += 1;
            }
        }
        coefficients.retain(|_, c| *c != 0);
        constraints.push(LinearConstraint {
            coefficients,
            rhs: 1 - negatives,
        });
    }
    LinearSystem {
        atoms: cnf.atoms().to_vec(),
        constraints,
    }
}

/// Constraint lines `<coef>*<atom> ... >= <const>`, then a `bounds 0 1`
/// section listing the atoms.
pub fn render_linear_system(system: &LinearSystem) -> String {
    let mut out = String::new();
    for c in &system.constraints {
        if c.coefficients.is_empty() {
            out.push_str(&format!("0 >= {}\n", c.rhs));
        } else {
            let parts: Vec<String> = c
                .coefficients
                .iter()
                .map(|(a, coef)| format!("{}*{}", coef, a.name()))
                .collect();
            out.push_str(&format!("{} >= {}\n", parts.join(" "), c.rhs));
        }
    }
    out.push_str("bounds 0 1");
    for atom in &system.atoms {
        out.push(' ');
        out.push_str(atom.name());
    }
    out.push('\n');
    out
}

pub enum System01<'a> {
    Poly(&'a PolynomialSystem),
    Linear(&'a LinearSystem),
}

/// Exhaustive 0-1 solvability over the declared atom set.
pub fn solvable_01(system: System01<'_>) -> Result<bool, EncodeError> {
    solvable_01_with_limit(system, DEFAULT_ATOM_LIMIT)
}

pub fn solvable_01_with_limit(system: System01<'_>, limit: usize) -> Result<bool, EncodeError> {
    let atoms: &[Atom] = match &system {
        System01::Poly(s) => &s.atoms,
        System01::Linear(s) => &s.atoms,
    };
    if atoms.len() > limit {
        return Err(EncodeError::TooManyAtoms {
            atoms: atoms.len(),
            limit,
        });
    }
    let index: BTreeMap<&Atom, usize> = atoms.iter().zip(0..).collect();
    let total: u64 = 1u64 << atoms.len();
    for mask in 0..total {
        let value_of = |a: &Atom| (mask >> index[a]) & 1 == 1;
        let ok = match &system {
            System01::Poly(s) => s.equations.iter().all(|eq| eq.poly.eval(value_of) == 0),
            System01::Linear(s) => s.constraints.iter().all(|c| c.satisfied(value_of)),
        };
        if ok {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::{Clause, Literal};
    use crate::gen::{gen_php_cnf, PhpParams};

    fn atom(name: &str) -> Atom {
        Atom::new(name).unwrap()
    }

    fn clause_cnf(clauses: Vec<Clause>, atoms: &[&str]) -> CnfFormula {
        CnfFormula::new(atoms.iter().map(|a| atom(a)), clauses).unwrap()
    }

    #[test]
    fn paper_clause_polynomial() {
        // p or -q or r encodes as (1-p) q (1-r) = q - pq - qr + pqr.
        let cnf = clause_cnf(
            vec![Clause::new([
                Literal::pos(atom("p")),
                Literal::neg(atom("q")),
                Literal::pos(atom("r")),
            ])],
            &["p", "q", "r"],
        );
        let system = encode_poly_system(&cnf);
        let mut expected = Polynomial::var(atom("q"));
        expected.add_term([atom("p"), atom("q")].into_iter().collect(), -1);
        expected.add_term([atom("q"), atom("r")].into_iter().collect(), -1);
        expected.add_term([atom("p"), atom("q"), atom("r")].into_iter().collect(), 1);
        assert_eq!(system.equations[0].poly, expected);
        // #clauses + #atoms equations.
        assert_eq!(system.equations.len(), 1 + 3);
    }

    #[test]
    fn empty_clause_is_constant_one() {
        let cnf = clause_cnf(vec![Clause::empty()], &[]);
        let system = encode_poly_system(&cnf);
        assert_eq!(system.equations[0].poly, Polynomial::constant(1));
        assert_eq!(solvable_01(System01::Poly(&system)), Ok(false));
    }

    #[test]
    fn contradictory_units_unsolvable() {
        let cnf = clause_cnf(
            vec![
                Clause::new([Literal::pos(atom("p"))]),
                Clause::new([Literal::neg(atom("p"))]),
            ],
            &["p"],
        );
        let system = encode_poly_system(&cnf);
        assert_eq!(solvable_01(System01::Poly(&system)), Ok(false));
    }

    #[test]
    fn paper_clause_linear() {
        // p or -q or r normalizes to p - q + r >= 0.
        let cnf = clause_cnf(
            vec![Clause::new([
                Literal::pos(atom("p")),
                Literal::neg(atom("q")),
                Literal::pos(atom("r")),
            ])],
            &["p", "q", "r"],
        );
        let system = encode_linear_system(&cnf);
        let c = &system.constraints[0];
        assert_eq!(c.rhs, 0);
        assert_eq!(c.coefficients[&atom("p")], 1);
        assert_eq!(c.coefficients[&atom("q")], -1);
        assert_eq!(c.coefficients[&atom("r")], 1);
        assert_eq!(system.constraint_count(), 1 + 2 * 3);
    }

    #[test]
    fn empty_clause_linear_infeasible() {
        let cnf = clause_cnf(vec![Clause::empty()], &[]);
        let system = encode_linear_system(&cnf);
        assert_eq!(system.constraints[0].rhs, 1);
        assert_eq!(solvable_01(System01::Linear(&system)), Ok(false));
    }

    #[test]
    fn php_3_2_linear_infeasible() {
        let cnf = gen_php_cnf(PhpParams::new(3, 2, true).unwrap());
        let system = encode_linear_system(&cnf);
        assert_eq!(system.constraints.len(), 12);
        assert_eq!(solvable_01(System01::Linear(&system)), Ok(false));
    }

    #[test]
    fn empty_system_vacuously_solvable() {
        let system = PolynomialSystem {
            atoms: vec![],
            equations: vec![],
        };
        assert_eq!(solvable_01(System01::Poly(&system)), Ok(true));
    }

    #[test]
    fn multilinear_reduction_matches_product_form() {
        // (1-p)p expands to p - p^2, multilinear 0; check eval agreement.
        let p = Polynomial::var(atom("p"));
        let one_minus = Polynomial::constant(1).add(&p.mul(&Polynomial::constant(-1)));
        let product = one_minus.mul(&p);
        assert!(product.is_zero());
        for v in [false, true] {
            let unreduced = (1 - v as i64) * (v as i64);
            assert_eq!(product.eval(|_| v), unreduced);
        }
    }

    #[test]
    fn render_formats() {
        let cnf = clause_cnf(
            vec![Clause::new([
                Literal::pos(atom("p")),
                Literal::neg(atom("q")),
            ])],
            &["p", "q"],
        );
        let poly = render_poly_system(&encode_poly_system(&cnf));
        assert!(poly.contains("= 0"));
        assert!(poly.contains("# reduced"));
        let lin = render_linear_system(&encode_linear_system(&cnf));
        assert!(lin.contains(">= 0"));
        assert!(lin.contains("bounds 0 1 p q"));
    }
}
