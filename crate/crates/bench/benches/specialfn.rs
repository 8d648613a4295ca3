use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use std::hint::black_box;

use halfline_core::specialfn::{digamma, log_beta, mean_s, trigamma, var_s};
use halfline_core::WeightProfile;

fn bench_polygamma(c: &mut Criterion) {
    let mut group = c.benchmark_group("polygamma");
    for z in [0.01, 0.5, 3.0, 50.0, 1e6] {
        group.bench_with_input(BenchmarkId::new("digamma", z), &z, |b, &z| {
            b.iter(|| black_box(digamma(black_box(z)).unwrap()))
        });
        group.bench_with_input(BenchmarkId::new("trigamma", z), &z, |b, &z| {
            b.iter(|| black_box(trigamma(black_box(z)).unwrap()))
        });
    }
    group.bench_function("log_beta", |b| {
        b.iter(|| black_box(log_beta(black_box(0.37), black_box(12.5)).unwrap()))
    });
    group.finish();
}

fn bench_moment_sums(c: &mut Criterion) {
    let mut group = c.benchmark_group("moment_sums");
    let profile = WeightProfile::log_poly(0.5, 1.0, 1.0).unwrap();
    let x = 100_000u64;
    group.throughput(Throughput::Elements(x));
    group.bench_function("mean_s_1e5", |b| {
        b.iter(|| black_box(mean_s(&profile, x).unwrap()))
    });
    group.bench_function("var_s_1e5", |b| {
        b.iter(|| black_box(var_s(&profile, x).unwrap()))
    });
    group.finish();
}

criterion_group!(benches, bench_polygamma, bench_moment_sums);
criterion_main!(benches);
