//! Checker hardening: across a corpus of accepted proofs in every calculus,
//! single-line semantic mutations must all be rejected, and no checker may
//! accept a proof whose conclusion fails the brute-force oracle. The
//! mutation generators and corpus live in `common`.

mod common;

use common::{
    assert_sound, hilbert_corpus, mutate_hilbert, mutate_resolution, resolution_corpus,
};
use proofbench::calculi::{check_extended_resolution, check_frege_family};

#[test]
fn every_resolution_mutation_is_rejected() {
    let mut total = 0usize;
    for (label, proof, cnf) in resolution_corpus() {
        assert_sound(&label, &check_extended_resolution(&proof, &cnf), Some(&cnf));
        for (what, mutant) in mutate_resolution(&proof, &cnf) {
            total += 1;
            let report = check_extended_resolution(&mutant, &cnf);
            assert!(!report.accepted(), "{label}: mutation `{what}` was accepted");
        }
    }
    assert!(total > 100, "mutation sweep too small: {total}");
}

#[test]
fn every_frege_family_mutation_is_rejected() {
    let mut total = 0usize;
    for (label, proof) in hilbert_corpus() {
        assert_sound(&label, &check_frege_family(&proof), None);
        for (what, mutant) in mutate_hilbert(&proof) {
            total += 1;
            let report = check_frege_family(&mutant);
            assert!(!report.accepted(), "{label}: mutation `{what}` was accepted");
        }
    }
    assert!(total > 100, "mutation sweep too small: {total}");
}
