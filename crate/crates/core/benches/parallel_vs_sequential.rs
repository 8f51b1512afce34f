use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use planeaut::ff::{diagonal_count, scan, FpForm, Reducer};
use planeaut::parse::parse_form;
use planeaut::specialgroups::{hessian, invariant_forms, HessianSubgroup};
use planeaut::Execution;

const MODES: [(&str, Execution); 2] = [
    ("parallel", Execution::Auto),
    ("sequential", Execution::Sequential),
];

fn ff_scan(c: &mut Criterion) {
    let f = parse_form("X^5 + Y^4*Z + X*Z^4 + X^3*Z^2").unwrap();
    let mut group = c.benchmark_group("ff_scan");
    for p in [41u64, 113] {
        let fp = FpForm::reduce(&f, &Reducer::new(p).unwrap()).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, p), &fp, |b, fp| {
                b.iter(|| scan(black_box(fp), exec))
            });
        }
    }
    group.finish();
}

fn diag_count(c: &mut Criterion) {
    let support = [[5, 1, 0], [0, 5, 1], [1, 0, 5], [2, 1, 3]];
    let mut group = c.benchmark_group("diagonal_count");
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| diagonal_count(black_box(&support), 211, exec))
        });
    }
    group.finish();
}

fn hessian_invariants(c: &mut Criterion) {
    let g = hessian(HessianSubgroup::H36);
    let gens: Vec<_> = g.generators.iter().map(|(_, m)| m.clone()).collect();
    let mut group = c.benchmark_group("invariant_forms");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| invariant_forms(black_box(&gens), 6, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, ff_scan, diag_count, hessian_invariants);
criterion_main!(benches);
