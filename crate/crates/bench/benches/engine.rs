use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use darboux_bench::{partial_map, poset};
use darboux_core::analysis::{integrate, IntegrateOptions, Strategy};
use darboux_core::completion::DEFAULT_SET_LIMIT;
use darboux_core::cut::parse_expression;
use darboux_core::extension::extension_pair;
use darboux_core::rational::rat;
use darboux_core::{darboux_completion, macneille_cuts, CutBudget, OracleFunction};

fn extensions(c: &mut Criterion) {
    let mut group = c.benchmark_group("extension_pair");
    for n in [8, 32, 128] {
        let psi = partial_map(7, n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &psi, |b, psi| {
            b.iter(|| extension_pair(black_box(psi)).unwrap())
        });
    }
    group.finish();
}

fn completion(c: &mut Criterion) {
    let mut group = c.benchmark_group("completion");
    for n in [4, 8, 12] {
        let o = poset(11, n);
        group.bench_with_input(BenchmarkId::new("darboux", n), &o, |b, o| {
            b.iter(|| darboux_completion(black_box(o), DEFAULT_SET_LIMIT).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("macneille", n), &o, |b, o| {
            b.iter(|| macneille_cuts(black_box(o), DEFAULT_SET_LIMIT).unwrap())
        });
    }
    group.finish();
}

fn cut_refine(c: &mut Criterion) {
    let budget = CutBudget::default();
    let x = parse_expression("sqrt(2)*sqrt(3) + sqrt(5)/7 - 1/3", budget).unwrap();
    let mut group = c.benchmark_group("cut_refine");
    for k in [10u32, 30, 60] {
        let eps = rat(1, 1) / rat(2, 1).pow(k as i32);
        group.bench_with_input(BenchmarkId::from_parameter(format!("2^-{k}")), &eps, |b, eps| {
            b.iter(|| x.refine(black_box(eps), budget).unwrap())
        });
    }
    group.finish();
}

fn integration(c: &mut Criterion) {
    let sqrt = OracleFunction::sqrt(rat(0, 1), rat(1, 1)).unwrap();
    let mut group = c.benchmark_group("integrate_sqrt");
    group.sample_size(10);
    for strategy in [Strategy::Uniform, Strategy::Adaptive] {
        let opts = IntegrateOptions {
            eps: rat(1, 1000),
            max_refine: 16,
            strategy,
        };
        group.bench_with_input(BenchmarkId::from_parameter(format!("{strategy:?}")), &opts, |b, opts| {
            b.iter(|| integrate(black_box(&sqrt), opts).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, extensions, completion, cut_refine, integration);
criterion_main!(benches);
