use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use posfact_bench::{member, SIZES};
use posfact_core::corpus::Corpus;
use posfact_core::factorization::schur_complement;
use posfact_core::{is_l2p, optimal_pair, Tolerances};
use std::hint::black_box;

fn membership(c: &mut Criterion) {
    let tol = Tolerances::default();
    let mut g = c.benchmark_group("is_l2p");
    for n in SIZES {
        let t = member(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &t, |b, t| {
            b.iter(|| is_l2p(black_box(t), &tol).unwrap())
        });
    }
    g.finish();
}

fn factorization(c: &mut Criterion) {
    let tol = Tolerances::default();
    let mut g = c.benchmark_group("optimal_pair");
    for n in SIZES {
        let t = member(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &t, |b, t| {
            b.iter(|| optimal_pair(black_box(t), &tol).unwrap())
        });
    }
    g.finish();

    let mut g = c.benchmark_group("schur_complement");
    for n in SIZES {
        let mut corpus = Corpus::new(n as u64);
        let bm = corpus.psd_any_rank(n);
        let s = corpus.subspace(n, n / 2);
        g.bench_with_input(BenchmarkId::from_parameter(n), &(bm, s), |b, (bm, s)| {
            b.iter(|| schur_complement(black_box(bm), s, &tol).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, membership, factorization);
criterion_main!(benches);
