use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use zeno_bench::reference;
use zeno_core::{
    build_hamiltonian, discretize, empirical_gamma_eff, evolve_survival, MeasurementScheme,
    OracleKind,
};

fn bench_discretize(c: &mut Criterion) {
    let p = reference();
    let mut group = c.benchmark_group("discretize");
    for n in [256usize, 1024] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| discretize(black_box(&p.form_factor), n).unwrap())
        });
    }
    group.finish();
}

fn bench_evolution(c: &mut Criterion) {
    let p = reference();
    let bath = discretize(&p.form_factor, 512).unwrap();
    let h = build_hamiltonian(&p, OracleKind::Bare, &bath).unwrap();
    let times: Vec<f64> = (1..=32).map(|i| i as f64 * 2.0).collect();
    c.bench_function("evolve_bare_512_modes_32_times", |b| {
        b.iter(|| evolve_survival(black_box(&h), black_box(&times)).unwrap())
    });

    let mut group = c.benchmark_group("empirical_gamma_eff_512");
    group.sample_size(20);
    group.bench_function("continuous_gamma2", |b| {
        b.iter(|| {
            empirical_gamma_eff(
                black_box(&p),
                black_box(&bath),
                MeasurementScheme::Continuous { big_gamma: 2.0 },
            )
            .unwrap()
        })
    });
    group.bench_function("rabi_k3", |b| {
        b.iter(|| {
            empirical_gamma_eff(
                black_box(&p),
                black_box(&bath),
                MeasurementScheme::Rabi { k: 3.0 },
            )
            .unwrap()
        })
    });
    group.finish();
}

criterion_group!(benches, bench_discretize, bench_evolution);
criterion_main!(benches);
