use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use pie_bench::{chain, expanded, formula};
use pie_core::elimination::{eliminate, EliminationOptions};
use pie_core::interpolation::{interpolate, InterpolationOptions, InterpolationTask};
use pie_core::preprocess::Stage;
use pie_core::prover::{validate, ProverConfig};

fn elimination(c: &mut Criterion) {
    let simple = formula("ex2(p, (all(x, (q(x) -> p(x))), all(x, (p(x) -> r(x)))))");
    let circ = expanded("circ(wet, kb1)");
    let opts = EliminationOptions {
        simp_result: vec![Stage::C6],
        ..EliminationOptions::default()
    };
    c.bench_function("eliminate/two implications", |b| {
        b.iter(|| eliminate(black_box(&simple), &EliminationOptions::default()))
    });
    c.bench_function("eliminate/circumscription", |b| {
        b.iter(|| eliminate(black_box(&circ), &opts))
    });
}

fn validity(c: &mut Criterion) {
    let cfg = ProverConfig::default();
    let mut group = c.benchmark_group("validate/chain");
    for n in [2, 4, 8] {
        let g = chain(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| validate(g, &cfg))
        });
    }
    group.finish();
}

fn interpolation(c: &mut Criterion) {
    let g = formula("(all(x, p(a, x)), q) -> (ex(x, p(x, b)) ; r)");
    let task = InterpolationTask::from_implication(&g, InterpolationOptions::default()).unwrap();
    c.bench_function("interpolate/first-order", |b| {
        b.iter(|| interpolate(black_box(&task)))
    });
}

criterion_group!(benches, elimination, validity, interpolation);
criterion_main!(benches);
