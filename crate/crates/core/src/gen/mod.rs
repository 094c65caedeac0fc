//! Hard tautology families: pigeonhole formulas, Tseitin parity formulas
//! and range-avoidance formulas built from circuits.

mod circuit;
mod php;
mod tseitin;

pub use circuit::{circuit_range, gen_tau, parse_circuit, render_circuit, Circuit, Gate, GateOp, TauInstance, Wire, DEFAULT_INPUT_LIMIT};
pub use php::{gen_php_cnf, gen_php_dnf, php_atom, PhpForm, PhpParams};
pub use tseitin::{gen_tseitin, parse_graph, render_graph, ChargeVector, Graph, DEFAULT_DEGREE_LIMIT};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("invalid parameters: {0}")]
    Param(String),
    #[error("vertex `{vertex}` has degree {degree}, above the limit {limit}")]
    DegreeLimit {
        vertex: String,
        degree: usize,
        limit: usize,
    },
    #[error("circuit has {inputs} inputs, above the enumeration limit {limit}")]
    TooManyInputs { inputs: usize, limit: usize },
    #[error("format error on line {line}: {message}")]
    Format { line: usize, message: String },
}
