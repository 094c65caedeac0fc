//! Size measurement for proofs in both families: steps are proof lines,
//! symbols are formula nodes (clauses count literals plus one, extension
//! markers count three).

use crate::calculi::{CalculusId, ResolutionSystem, Variant};
use crate::sim::ProofPayload;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeReport {
    pub label: String,
    pub system: CalculusId,
    pub steps: u64,
    pub symbols: u64,
}

/// Both size measures of a proof, under the label it is reported as.
pub fn measure_proof(label: &str, payload: &ProofPayload) -> SizeReport {
    let (system, steps, symbols) = match payload {
        ProofPayload::Refutation(proof, _) => {
            // Tree-likeness is a checking mode, not a proof header; files
            // declare RES or ER only.
            let system = match proof.system {
                ResolutionSystem::Res => CalculusId::Res,
                ResolutionSystem::Er => CalculusId::Er,
            };
            (system, proof.steps(), proof.symbols())
        }
        ProofPayload::Derivation(proof) => {
            let system = match proof.variant {
                Variant::F => CalculusId::F,
                Variant::EF => CalculusId::Ef,
                Variant::SF => CalculusId::Sf,
            };
            (system, proof.steps(), proof.symbols())
        }
    };
    SizeReport {
        label: label.to_string(),
        system,
        steps,
        symbols,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculi::{parse_hilbert, parse_resolution};
    use crate::cnf::parse_dimacs;

    #[test]
    fn axiom_line_counts_nodes() {
        let proof = parse_hilbert(
            "system F\n1 | (or (not p) (or (not q) p)) | AX A1 {P=p; Q=q}\n",
        )
        .unwrap();
        let r = measure_proof("a1", &ProofPayload::Derivation(proof));
        assert_eq!(r.system, CalculusId::F);
        assert_eq!(r.steps, 1);
        assert_eq!(r.symbols, 7);
    }

    #[test]
    fn refutation_counts_lines_and_literals() {
        let cnf = parse_dimacs("p cnf 1 2\n1 0\n-1 0\n").unwrap();
        let text = "system RES\ncnf units.cnf\n1 1 0 i1 0\n2 -1 0 i2 0\n3 0 1 2 0\n";
        let proof = parse_resolution(text, &cnf).unwrap();
        let r = measure_proof("units", &ProofPayload::Refutation(proof, cnf));
        assert_eq!(r.system, CalculusId::Res);
        assert_eq!(r.steps, 3);
        // Two unit clauses and the empty clause: (1+1) + (1+1) + 1.
        assert_eq!(r.symbols, 5);
        assert!(r.steps <= r.symbols);
    }
}
