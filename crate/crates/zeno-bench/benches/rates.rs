use criterion::{black_box, criterion_group, criterion_main, Criterion};

use zeno_bench::reference;
use zeno_core::{
    effective_rate_pulsed, find_pole, find_transition_pulsed, survival_probability, sweep,
    SchemeFamily,
};

fn bench_closed_forms(c: &mut Criterion) {
    let p = reference();
    c.bench_function("find_pole", |b| {
        b.iter(|| find_pole(black_box(&p)).unwrap())
    });
    c.bench_function("survival_probability_t10", |b| {
        b.iter(|| survival_probability(black_box(&p), black_box(10.0)).unwrap())
    });
    c.bench_function("effective_rate_pulsed", |b| {
        b.iter(|| effective_rate_pulsed(black_box(&p), black_box(0.2)).unwrap())
    });
    c.bench_function("find_transition_pulsed", |b| {
        b.iter(|| find_transition_pulsed(black_box(&p)).unwrap())
    });
}

fn bench_sweep(c: &mut Criterion) {
    let p = reference();
    let grid: Vec<f64> = (0..200)
        .map(|i| (1e-3_f64.ln() + (1e3_f64.ln() - 1e-3_f64.ln()) * i as f64 / 199.0).exp())
        .collect();
    c.bench_function("sweep_pulsed_200pts", |b| {
        b.iter(|| sweep(black_box(&p), SchemeFamily::Pulsed, black_box(&grid)).unwrap())
    });
}

criterion_group!(benches, bench_closed_forms, bench_sweep);
criterion_main!(benches);
