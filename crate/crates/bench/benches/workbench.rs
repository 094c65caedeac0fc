//! Throughput benchmarks: proof checking against proof byte size (the
//! p-time checker contract), instance generation, and the brute-force
//! truth-table oracle.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

use proofbench::brute_force_classify;
use proofbench::calculi::{check_extended_resolution, check_frege_family, render_hilbert, render_resolution};
use proofbench::gen::{gen_php_cnf, gen_php_dnf, PhpParams};
use proofbench::php::build_ef_proof_php;
use proofbench::refute::refute_cnf;

fn php(n: usize) -> proofbench::CnfFormula {
    gen_php_cnf(PhpParams::new(n, n - 1, false).unwrap())
}

/// Checker wall time against proof bytes; the per-byte rate staying flat-ish
/// across sizes is the empirical face of the polynomial-time contract.
fn bench_checkers(c: &mut Criterion) {
    let mut group = c.benchmark_group("check_frege");
    for n in [3usize, 5, 7] {
        let art = build_ef_proof_php(n, false).unwrap();
        let bytes = render_hilbert(&art.proof).len() as u64;
        group.throughput(Throughput::Bytes(bytes));
        group.bench_with_input(BenchmarkId::from_parameter(n), &art.proof, |b, proof| {
            b.iter(|| {
                assert!(check_frege_family(proof).accepted());
            })
        });
    }
    group.finish();

    let mut group = c.benchmark_group("check_resolution");
    for n in [3usize, 4, 5] {
        let cnf = php(n);
        let proof = refute_cnf(&cnf, "php.cnf").unwrap();
        let bytes = render_resolution(&proof, &cnf).len() as u64;
        group.throughput(Throughput::Bytes(bytes));
        group.bench_with_input(BenchmarkId::from_parameter(n), &(proof, cnf), |b, (p, f)| {
            b.iter(|| {
                assert!(check_extended_resolution(p, f).accepted());
            })
        });
    }
    group.finish();
}

fn bench_generators(c: &mut Criterion) {
    c.bench_function("gen_php_cnf_10", |b| {
        b.iter(|| gen_php_cnf(PhpParams::new(10, 9, true).unwrap()))
    });
    c.bench_function("gen_php_dnf_6", |b| {
        b.iter(|| gen_php_dnf(PhpParams::new(6, 5, false).unwrap()))
    });
}

fn bench_oracle(c: &mut Criterion) {
    let dnf = gen_php_dnf(PhpParams::new(3, 2, false).unwrap());
    c.bench_function("brute_force_classify_php3", |b| {
        b.iter(|| brute_force_classify(&dnf))
    });
}

criterion_group!(benches, bench_checkers, bench_generators, bench_oracle);
criterion_main!(benches);
