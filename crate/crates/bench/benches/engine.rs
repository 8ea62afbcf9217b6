use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use umbra_bench::operators;
use umbra_core::logseq::LogBinomialSequence;
use umbra_core::operator::lagrange_inversion;
use umbra_core::sequence::{generate_recurrence, generate_transfer};
use umbra_core::TruncatedSeries;

fn series(c: &mut Criterion) {
    let mut group = c.benchmark_group("series");
    for order in [16i64, 32] {
        let (_, f) = operators(order).remove(1);
        let s = f.series().clone();
        group.bench_with_input(BenchmarkId::new("reciprocal", order), &s, |b, s| b.iter(|| black_box(s.reciprocal())));
        group.bench_with_input(BenchmarkId::new("compose", order), &s, |b, s| b.iter(|| black_box(s.compose(s))));
        group.bench_with_input(BenchmarkId::new("inverse", order), &s, |b, s| b.iter(|| black_box(s.compositional_inverse())));
    }
    group.finish();
}

fn sequences(c: &mut Criterion) {
    let mut group = c.benchmark_group("sequences");
    for n in [10usize, 20] {
        for (name, f) in operators(n as i64 + 2) {
            group.bench_with_input(BenchmarkId::new(format!("transfer/{name}"), n), &f, |b, f| {
                b.iter(|| black_box(generate_transfer(f, n)))
            });
            group.bench_with_input(BenchmarkId::new(format!("recurrence/{name}"), n), &f, |b, f| {
                b.iter(|| black_box(generate_recurrence(f, n)))
            });
        }
    }
    group.finish();
}

fn inversion(c: &mut Criterion) {
    let mut group = c.benchmark_group("inversion");
    let order = 21;
    let t = TruncatedSeries::variable(order + 2);
    for (name, f) in operators(order) {
        group.bench_function(BenchmarkId::new("lagrange", name), |b| b.iter(|| black_box(lagrange_inversion(&f, &t, 20))));
        group.bench_function(BenchmarkId::new("newton", name), |b| b.iter(|| black_box(f.inverse_series())));
    }
    group.finish();
}

fn log_windows(c: &mut Criterion) {
    let mut group = c.benchmark_group("log_windows");
    for depth in [12usize, 24] {
        let (_, f) = operators(depth as i64 + 1).remove(0);
        group.bench_with_input(BenchmarkId::new("terms_-5..5", depth), &f, |b, f| {
            b.iter(|| {
                let s = LogBinomialSequence::new(f.clone(), depth).unwrap();
                for n in -5..=5 {
                    black_box(s.term(n).unwrap());
                }
            })
        });
    }
    group.finish();
}

criterion_group!(benches, series, sequences, inversion, log_windows);
criterion_main!(benches);
