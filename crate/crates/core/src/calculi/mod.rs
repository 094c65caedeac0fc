//! Polynomial-time proof checkers: resolution and extended resolution over
//! clause sets, and Hilbert-style Frege-family calculi (F, EF, SF), plus
//! the adapter turning a checker into a total proof-system function.

mod adapter;
mod hilbert;
mod resolution;

pub use adapter::{as_function, CalculusId};
pub use hilbert::{
    check_frege_family, parse_hilbert, render_hilbert, scheme_formula, scheme_ids, HilbertJust,
    HilbertLine, HilbertProof, SchemeId, Variant,
};
pub use resolution::{
    check_extended_resolution, check_resolution, extension_clauses, parse_resolution,
    render_resolution, resolution_cnf_path, ResolutionJust, ResolutionLine, ResolutionProof,
    ResolutionSystem,
};

use thiserror::Error;

use crate::formula::Formula;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProofFormatError {
    #[error("proof format error on line {line}: {message}")]
    Format { line: usize, message: String },
}

/// Why a checker rejected a proof line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RejectReason {
    // Resolution family.
    BadPivot,
    UnknownId,
    NotEmptyFinal,
    ReuseInTree,
    ExtendForbidden,
    InputMismatch,
    BadExtensionClause,
    // Shared.
    ExtNotFresh,
    // Frege family.
    BadAxiomInstance,
    BadMp,
    ExtInConclusion,
    SubForbidden,
    ExtForbidden,
    UnknownScheme,
    BadSubstitution,
    EmptyProof,
    NondecreasingId,
}

impl std::fmt::Display for RejectReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RejectReason::BadPivot => "BAD_PIVOT",
            RejectReason::UnknownId => "UNKNOWN_ID",
            RejectReason::NotEmptyFinal => "NOT_EMPTY_FINAL",
            RejectReason::ReuseInTree => "REUSE_IN_TREE",
            RejectReason::ExtendForbidden => "EXTEND_FORBIDDEN",
            RejectReason::InputMismatch => "INPUT_MISMATCH",
            RejectReason::BadExtensionClause => "BAD_EXTENSION_CLAUSE",
            RejectReason::ExtNotFresh => "EXT_NOT_FRESH",
            RejectReason::BadAxiomInstance => "BAD_AXIOM_INSTANCE",
            RejectReason::BadMp => "BAD_MP",
            RejectReason::ExtInConclusion => "EXT_IN_CONCLUSION",
            RejectReason::SubForbidden => "SUB_FORBIDDEN",
            RejectReason::ExtForbidden => "EXT_FORBIDDEN",
            RejectReason::UnknownScheme => "UNKNOWN_SCHEME",
            RejectReason::BadSubstitution => "BAD_SUBSTITUTION",
            RejectReason::EmptyProof => "EMPTY_PROOF",
            RejectReason::NondecreasingId => "NONDECREASING_ID",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject { line: u64, reason: RejectReason },
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

/// What an accepted proof establishes: the last formula for Frege-family
/// proofs, the empty clause for refutations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Conclusion {
    Formula(Formula),
    EmptyClause,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub verdict: Verdict,
    pub conclusion: Option<Conclusion>,
    pub steps: u64,
    pub symbols: u64,
}

impl CheckReport {
    pub fn accepted(&self) -> bool {
        self.verdict.is_accept()
    }

    pub fn conclusion_formula(&self) -> Option<&Formula> {
        match &self.conclusion {
            Some(Conclusion::Formula(f)) => Some(f),
            _ => None,
        }
    }
}
