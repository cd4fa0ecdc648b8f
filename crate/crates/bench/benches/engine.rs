use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use kontsevich_bench::{arguments, grade_three_graphs, raw_associator, structures};
use kontsevich_core::{evaluate_graph, evaluate_series, star_oh3, verify_claim, PolyDiffOperator};

fn canonical_forms(c: &mut Criterion) {
    let graphs = grade_three_graphs();
    c.bench_function("canonical_form/218 raw ħ³ graphs", |b| {
        b.iter(|| graphs.iter().map(|g| black_box(g).canonical_form().sign as i64).sum::<i64>())
    });
}

fn associator_pipeline(c: &mut Criterion) {
    let star = star_oh3();
    c.bench_function("associator/raw", |b| b.iter(|| kontsevich_core::associator(black_box(&star)).unwrap()));
    let raw = raw_associator();
    c.bench_function("associator/reduce_skew", |b| b.iter(|| black_box(&raw).reduce_skew()));
    let a3 = raw.reduce_skew().grade_part(3);
    let mut group = c.benchmark_group("claim");
    group.sample_size(10);
    group.bench_function("verify_claim", |b| b.iter(|| verify_claim(black_box(&a3))));
    group.finish();
}

fn evaluation(c: &mut Criterion) {
    let raw = raw_associator();
    let mut group = c.benchmark_group("evaluate");
    group.sample_size(10);
    for (name, p) in structures() {
        let args = arguments(p.dim(), 7);
        group.bench_with_input(BenchmarkId::new("associator_series", name), &p, |b, p| {
            b.iter(|| evaluate_series(&raw, p, &args, 3).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("operator_grade3", name), &p, |b, p| {
            b.iter(|| PolyDiffOperator::from_series(&raw.grade_part(3), p))
        });
        let star = star_oh3();
        let eye = star.grade(2).last().unwrap().graph.clone();
        group.bench_with_input(BenchmarkId::new("single_graph", name), &p, |b, p| {
            b.iter(|| evaluate_graph(&eye, p, &args[..2]).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, canonical_forms, associator_pipeline, evaluation);
criterion_main!(benches);
