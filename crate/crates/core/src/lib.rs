//! A propositional proof-complexity workbench: generators for hard
//! tautology families (pigeonhole, Tseitin parity, circuit range
//! avoidance), polynomial-time proof checkers for resolution-family and
//! Frege-family calculi, checked translations between calculi with
//! measured size bounds, a constructive polynomial-size Extended Frege
//! prover for the pigeonhole tautologies, algebraic and integer-linear
//! encoders of CNFs, and brute-force oracles for desk-scale verification.

pub mod calculi;
pub mod cnf;
pub mod encode;
pub mod formula;
pub mod frege;
pub mod gen;
pub mod measure;
pub mod php;
pub mod refute;
pub mod search;
pub mod sim;

pub use cnf::{Clause, CnfFormula, Literal};
pub use formula::{
    brute_force_classify, parse_formula, render_formula, Assignment, Atom, Classification,
    Formula, Substitution,
};
