//! The proof-system view of a checker: a total function from candidate
//! proofs to tautologies. Every string maps somewhere; strings that fail
//! to parse or check map to the constant `1`, so the range is exactly the
//! set of conclusions of accepted proofs plus `1`.

use crate::cnf::parse_dimacs;
use crate::formula::Formula;

use super::hilbert::{check_frege_family, parse_hilbert, Variant};
use super::resolution::{
    check_extended_resolution, check_resolution, parse_resolution, resolution_cnf_path,
    ResolutionSystem,
};
use super::Conclusion;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CalculusId {
    Res,
    ResTree,
    Er,
    F,
    Ef,
    Sf,
}

impl CalculusId {
    pub fn name(&self) -> &'static str {
        match self {
            CalculusId::Res => "RES",
            CalculusId::ResTree => "RES*",
            CalculusId::Er => "ER",
            CalculusId::F => "F",
            CalculusId::Ef => "EF",
            CalculusId::Sf => "SF",
        }
    }

    pub fn from_name(s: &str) -> Option<CalculusId> {
        match s {
            "RES" => Some(CalculusId::Res),
            "RES*" => Some(CalculusId::ResTree),
            "ER" => Some(CalculusId::Er),
            "F" => Some(CalculusId::F),
            "EF" => Some(CalculusId::Ef),
            "SF" => Some(CalculusId::Sf),
            _ => None,
        }
    }

    pub fn all() -> [CalculusId; 6] {
        [
            CalculusId::Res,
            CalculusId::ResTree,
            CalculusId::Er,
            CalculusId::F,
            CalculusId::Ef,
            CalculusId::Sf,
        ]
    }
}

/// Map a candidate proof to its conclusion. Total: any decode, parse,
/// load, or check failure yields the constant `1`. Refutation systems
/// conclude the DNF tautology equivalent to the negated input CNF;
/// `load_cnf` supplies the DIMACS text for the path named in the proof
/// header (returning `None` on failure).
pub fn as_function(
    calculus: CalculusId,
    input: &[u8],
    load_cnf: &dyn Fn(&str) -> Option<String>,
) -> Formula {
    as_function_inner(calculus, input, load_cnf).unwrap_or_else(|| Formula::constant(true))
}

fn as_function_inner(
    calculus: CalculusId,
    input: &[u8],
    load_cnf: &dyn Fn(&str) -> Option<String>,
) -> Option<Formula> {
    let text = std::str::from_utf8(input).ok()?;
    match calculus {
        CalculusId::F | CalculusId::Ef | CalculusId::Sf => {
            let proof = parse_hilbert(text).ok()?;
            let expected = match calculus {
                CalculusId::F => Variant::F,
                CalculusId::Ef => Variant::EF,
                _ => Variant::SF,
            };
            if proof.variant != expected {
                return None;
            }
            let report = check_frege_family(&proof);
            if !report.accepted() {
                return None;
            }
            report.conclusion_formula().cloned()
        }
        CalculusId::Res | CalculusId::ResTree | CalculusId::Er => {
            let path = resolution_cnf_path(text).ok()?;
            let cnf = parse_dimacs(&load_cnf(&path)?).ok()?;
            let proof = parse_resolution(text, &cnf).ok()?;
            let report = match calculus {
                CalculusId::Res => {
                    if proof.system != ResolutionSystem::Res {
                        return None;
                    }
                    check_resolution(&proof, &cnf, false)
                }
                CalculusId::ResTree => {
                    if proof.system != ResolutionSystem::Res {
                        return None;
                    }
                    check_resolution(&proof, &cnf, true)
                }
                _ => {
                    if proof.system != ResolutionSystem::Er {
                        return None;
                    }
                    check_extended_resolution(&proof, &cnf)
                }
            };
            if report.accepted() && report.conclusion == Some(Conclusion::EmptyClause) {
                Some(cnf.negation_dnf())
            } else {
                None
            }
        }
    }
}
