use std::hint::black_box;

use ccei_bench::random_dataset;
use ccei_core::{ccei_binary_search, ccei_exact, check_e_garp, solve_afriat, EfficiencyVector};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn garp(c: &mut Criterion) {
    let mut group = c.benchmark_group("check_e_garp");
    for t in [10, 50, 100] {
        let d = random_dataset(t, 10, 1);
        let df = d.to_f64();
        let ones = EfficiencyVector::ones(t);
        let ones_f = ones.to_f64();
        group.bench_with_input(BenchmarkId::new("exact", t), &t, |b, _| {
            b.iter(|| check_e_garp(black_box(&d), &ones).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("float", t), &t, |b, _| {
            b.iter(|| check_e_garp(black_box(&df), &ones_f).unwrap())
        });
    }
    group.finish();
}

fn index(c: &mut Criterion) {
    let d = random_dataset(100, 10, 2);
    let df = d.to_f64();
    let mut group = c.benchmark_group("ccei_t100_l10");
    group.sample_size(10);
    group.bench_function("exact", |b| b.iter(|| ccei_exact(black_box(&d))));
    group.bench_function("float", |b| b.iter(|| ccei_exact(black_box(&df))));
    group.bench_function("bisect_float", |b| {
        b.iter(|| ccei_binary_search(black_box(&df), &1e-9).unwrap())
    });
    group.finish();
}

fn afriat(c: &mut Criterion) {
    let d = random_dataset(100, 10, 3);
    let df = d.to_f64();
    // Below the index every Afriat system is feasible.
    let level = ccei_exact(&df).value * 0.99;
    let e = EfficiencyVector::uniform(level, 100).unwrap();
    let mut group = c.benchmark_group("solve_afriat_t100_l10");
    group.sample_size(10);
    group.bench_function("float", |b| b.iter(|| solve_afriat(black_box(&df), &e).unwrap()));
    group.finish();
}

criterion_group!(benches, garp, index, afriat);
criterion_main!(benches);
