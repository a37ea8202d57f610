use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use poincare_core::{
    condition_grid, embedded_closed_form, expand, oracle_series, CoefficientBox, Exec, Polynomial, ValuationSystem,
};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn example_one() -> (ValuationSystem, Polynomial) {
    let sys = ValuationSystem::from_rows(&[&[2, 3], &[4, 3]]).unwrap();
    let h = Polynomial::from_int_terms(2, &[(&[6, 2], 1), (&[0, 8], 1)]).unwrap();
    (sys, h)
}

fn oracle(c: &mut Criterion) {
    let (sys, h) = example_one();
    let b = CoefficientBox::new(vec![20, 28]);
    let mut group = c.benchmark_group("oracle_series_20x28");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |bench, &exec| {
            bench.iter(|| oracle_series(black_box(&sys), black_box(&h), &b, exec).unwrap())
        });
    }
    group.finish();
}

fn expansion(c: &mut Criterion) {
    let (sys, h) = example_one();
    let f = embedded_closed_form(&sys, &h).unwrap();
    let b = CoefficientBox::new(vec![80, 80]);
    let mut group = c.benchmark_group("expand_80x80");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |bench, &exec| {
            bench.iter(|| expand(black_box(&f), &b, exec).unwrap())
        });
    }
    group.finish();
}

fn conditions(c: &mut Criterion) {
    let sys = ValuationSystem::from_rows(&[&[1, 1], &[1, 2]]).unwrap();
    let h = Polynomial::from_int_terms(2, &[(&[4, 0], 1), (&[2, 1], 1), (&[0, 3], 1)]).unwrap();
    let mut group = c.benchmark_group("condition_grid_4");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |bench, &exec| {
            bench.iter(|| condition_grid(black_box(&sys), black_box(&h), 4, true, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, oracle, expansion, conditions);
criterion_main!(benches);
