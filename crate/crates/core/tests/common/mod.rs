//! Shared corpus builders and mutation generators for the hardening and
//! acceptance suites.
//!
//! Mutations are drawn from: change a resolution pivot, swap resolve
//! premises, flip one literal sign, rename an extension atom to a used
//! atom, swap modus-ponens premises, and alter one substitution binding.
//! Candidates that do not change the justified content (for example a
//! rebinding the scheme instance is insensitive to) are skipped; everything
//! kept is semantic and must be rejected.

#![allow(dead_code)]

use proofbench::calculi::{scheme_formula, CalculusId, CheckReport, Conclusion, HilbertJust,
    HilbertLine, HilbertProof, ResolutionJust, ResolutionLine, ResolutionProof, Variant};
use proofbench::formula::apply_substitution;
use proofbench::frege::Prover;
use proofbench::gen::{gen_php_cnf, PhpParams};
use proofbench::php::build_ef_proof_php;
use proofbench::refute::refute_cnf;
use proofbench::sim::{translate, ProofPayload};
use proofbench::{
    brute_force_classify, Classification, Clause, CnfFormula, Formula, Literal,
};

pub fn php(n: usize) -> CnfFormula {
    gen_php_cnf(PhpParams::new(n, n - 1, false).unwrap())
}

/// Deterministic line sample: every line for small proofs, a fixed stride
/// capping the count for large ones (each mutation re-checks the whole
/// proof, so the budget scales with proof size).
pub fn sampled(len: usize, cap: usize) -> Vec<usize> {
    let stride = (len / cap).max(1);
    (0..len).step_by(stride).collect()
}

// --- resolution-family mutations --------------------------------------------

pub fn mutate_resolution(
    proof: &ResolutionProof,
    cnf: &CnfFormula,
) -> Vec<(String, ResolutionProof)> {
    let mut out = Vec::new();
    let mut push = |i: usize, what: &str, line: ResolutionLine| {
        let mut m = proof.clone();
        m.lines[i] = line;
        out.push((format!("line {} {what}", i + 1), m));
    };
    let used_atom = cnf.atoms()[0].clone();

    for &i in &sampled(proof.lines.len(), 400) {
        match &proof.lines[i] {
            ResolutionLine::ExtendMarker { id, l1, l2, .. } => {
                push(
                    i,
                    "extension renamed to a used atom",
                    ResolutionLine::ExtendMarker {
                        id: *id,
                        atom: used_atom.clone(),
                        l1: l1.clone(),
                        l2: l2.clone(),
                    },
                );
            }
            ResolutionLine::Clause { id, clause, just } => {
                // Flip the sign of the first literal, when there is one.
                if let Some(first) = clause.literals().first() {
                    let flipped = Clause::new(
                        clause
                            .literals()
                            .iter()
                            .map(|l| if l == first { l.negated() } else { l.clone() }),
                    );
                    if flipped != *clause {
                        push(
                            i,
                            "literal sign flipped",
                            ResolutionLine::Clause {
                                id: *id,
                                clause: flipped,
                                just: just.clone(),
                            },
                        );
                    }
                }
                match just {
                    ResolutionJust::Input(k) => {
                        // Point at a different input clause.
                        if let Some(k2) = (1..=cnf.clauses().len())
                            .find(|&k2| k2 != *k && cnf.clauses()[k2 - 1] != *clause)
                        {
                            push(
                                i,
                                "input id changed",
                                ResolutionLine::Clause {
                                    id: *id,
                                    clause: clause.clone(),
                                    just: ResolutionJust::Input(k2),
                                },
                            );
                        }
                    }
                    ResolutionJust::Resolve { left, right, pivot } => {
                        push(
                            i,
                            "premises swapped",
                            ResolutionLine::Clause {
                                id: *id,
                                clause: clause.clone(),
                                just: ResolutionJust::Resolve {
                                    left: *right,
                                    right: *left,
                                    pivot: pivot.clone(),
                                },
                            },
                        );
                        // A pivot the left premise cannot supply positively.
                        let left_clause = proof.lines.iter().find_map(|l| match l {
                            ResolutionLine::Clause { id: lid, clause, .. } if lid == left => {
                                Some(clause.clone())
                            }
                            _ => None,
                        });
                        if let Some(lc) = left_clause {
                            if let Some(bad) = cnf
                                .atoms()
                                .iter()
                                .find(|a| !lc.contains(&Literal::pos((*a).clone())))
                            {
                                push(
                                    i,
                                    "pivot changed",
                                    ResolutionLine::Clause {
                                        id: *id,
                                        clause: clause.clone(),
                                        just: ResolutionJust::Resolve {
                                            left: *left,
                                            right: *right,
                                            pivot: Some(bad.clone()),
                                        },
                                    },
                                );
                            }
                        }
                    }
                    ResolutionJust::ExtendDef(_) => {}
                }
            }
        }
    }
    out
}

// --- Frege-family mutations --------------------------------------------------

fn altered_subst(subst: &proofbench::Substitution) -> Option<proofbench::Substitution> {
    let (a, f) = subst.iter().next()?;
    let mut s = subst.clone();
    s.bind(a.clone(), Formula::not(f.clone()));
    Some(s)
}

pub fn mutate_hilbert(proof: &HilbertProof) -> Vec<(String, HilbertProof)> {
    let mut out = Vec::new();
    let mut push = |i: usize, what: &str, just: HilbertJust| {
        let mut m = proof.clone();
        m.lines[i] = HilbertLine {
            just,
            ..m.lines[i].clone()
        };
        out.push((format!("line {} {what}", i + 1), m));
    };
    let formula_of = |id: u64| {
        proof
            .lines
            .iter()
            .find(|l| l.id == id)
            .map(|l| l.formula.clone())
    };
    let used_atom = proof
        .lines
        .iter()
        .flat_map(|l| l.formula.atoms())
        .find(|a| !a.is_extension());

    let cap = if proof.symbols() > 500_000 { 40 } else { 300 };
    for &i in &sampled(proof.lines.len(), cap) {
        match &proof.lines[i].just {
            HilbertJust::Ax { scheme, subst } => {
                if let Some(s) = altered_subst(subst) {
                    // Keep only rebindings the instance is sensitive to.
                    if apply_substitution(&scheme_formula(*scheme), &s) != proof.lines[i].formula {
                        push(
                            i,
                            "substitution altered",
                            HilbertJust::Ax {
                                scheme: *scheme,
                                subst: s,
                            },
                        );
                    }
                }
            }
            HilbertJust::Mp {
                implication,
                antecedent,
            } => {
                // Skip the rare case where the swap is a valid alternative.
                let alt_ok = match (formula_of(*antecedent), formula_of(*implication)) {
                    (Some(imp2), Some(ant2)) => {
                        imp2 == Formula::imp(ant2, proof.lines[i].formula.clone())
                    }
                    _ => false,
                };
                if !alt_ok {
                    push(
                        i,
                        "premises swapped",
                        HilbertJust::Mp {
                            implication: *antecedent,
                            antecedent: *implication,
                        },
                    );
                }
            }
            HilbertJust::Ext { .. } => {
                if let Some(a) = &used_atom {
                    push(
                        i,
                        "extension renamed to a used atom",
                        HilbertJust::Ext { atom: a.clone() },
                    );
                }
            }
            HilbertJust::Sub { source, subst } => {
                if let Some(s) = altered_subst(subst) {
                    let changed = formula_of(*source)
                        .map(|src| apply_substitution(&src, &s) != proof.lines[i].formula)
                        .unwrap_or(true);
                    if changed {
                        push(
                            i,
                            "substitution altered",
                            HilbertJust::Sub {
                                source: *source,
                                subst: s,
                            },
                        );
                    }
                }
            }
        }
    }
    out
}

// --- corpus ------------------------------------------------------------------

pub fn resolution_corpus() -> Vec<(String, ResolutionProof, CnfFormula)> {
    let mut out = Vec::new();
    for n in 2..=4 {
        let cnf = php(n);
        let proof = refute_cnf(&cnf, "php.cnf").expect("pigeonhole refutes");
        out.push((format!("refute php{n}"), proof, cnf));
    }
    // An extended-resolution proof with genuine EXTEND lines.
    let ef = build_ef_proof_php(2, false).unwrap().proof;
    let r = translate(
        CalculusId::Ef,
        CalculusId::Er,
        &ProofPayload::Derivation(ef),
    )
    .unwrap();
    if let ProofPayload::Refutation(proof, cnf) = r.proof {
        out.push(("ef-to-er php2".to_string(), proof, cnf));
    }
    out
}

pub fn hilbert_corpus() -> Vec<(String, HilbertProof)> {
    let mut out = Vec::new();
    let mut p = Prover::new(Variant::F);
    p.identity(&php(2).to_formula());
    out.push(("f identity".to_string(), p.finish()));
    for n in 2..=3 {
        out.push((
            format!("ef php{n}"),
            build_ef_proof_php(n, false).unwrap().proof,
        ));
    }
    let ef3 = build_ef_proof_php(3, false).unwrap().proof;
    let r = translate(
        CalculusId::Ef,
        CalculusId::Sf,
        &ProofPayload::Derivation(ef3),
    )
    .unwrap();
    if let ProofPayload::Derivation(proof) = r.proof {
        out.push(("ef-to-sf php3".to_string(), proof));
    }
    out
}

/// The accepted proof's conclusion must survive the brute-force oracle.
pub fn assert_sound(label: &str, report: &CheckReport, cnf: Option<&CnfFormula>) {
    assert!(report.accepted(), "{label}: corpus proof must accept");
    match (&report.conclusion, cnf) {
        (Some(Conclusion::EmptyClause), Some(cnf)) => {
            assert_eq!(
                cnf.brute_force_sat(),
                Ok(false),
                "{label}: accepted refutation of a satisfiable CNF"
            );
        }
        (Some(Conclusion::Formula(f)), None) => {
            assert!(
                f.atoms().len() <= 24,
                "{label}: conclusion too wide to verify"
            );
            assert_eq!(
                brute_force_classify(f),
                Ok(Classification::Tautology),
                "{label}: accepted proof of a non-tautology"
            );
        }
        _ => panic!("{label}: conclusion shape does not match the proof family"),
    }
}
