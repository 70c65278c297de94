use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use qgamow_core::numkernel::{hyp2f1, upper_incomplete_gamma};
use qgamow_core::qgamow::{q_norm_sq_closed, q_norm_sq_quadrature, Method, QSpectrum, QState};
use qgamow_core::{Complex64, Resonance};

fn state(q: f64) -> QState {
    QState::new(Resonance::unit(Complex64::new(1.0, -0.1)).unwrap(), q).unwrap()
}

fn special_functions(c: &mut Criterion) {
    let z = Complex64::new(-3.5, 0.0);
    c.bench_function("hyp2f1 z=-3.5", |b| {
        b.iter(|| hyp2f1(black_box(0.75), 2.0, 3.5, black_box(z), 1e-12).unwrap())
    });
    let z = Complex64::new(0.3, -1.2);
    c.bench_function("incgamma a=-2.3", |b| {
        b.iter(|| upper_incomplete_gamma(black_box(-2.3), black_box(z), 1e-14).unwrap())
    });
}

fn norm(c: &mut Criterion) {
    let s = state(1.15);
    c.bench_function("norm closed q=1.15", |b| {
        b.iter(|| q_norm_sq_closed(black_box(&s)).unwrap())
    });
    c.bench_function("norm quadrature q=1.15", |b| {
        b.iter(|| q_norm_sq_quadrature(black_box(&s), 1e-10).unwrap())
    });
}

fn overlap(c: &mut Criterion) {
    let spec = QSpectrum::new(state(1.15), 1e-10).unwrap();
    c.bench_function("overlap closed k=1", |b| {
        b.iter(|| spec.overlap_closed(black_box(1.0)).unwrap())
    });
    c.bench_function("overlap quadrature k=1", |b| {
        b.iter(|| spec.overlap_quadrature(black_box(1.0)).unwrap())
    });
    let ks: Vec<f64> = (0..300).map(|i| 3.0 * i as f64 / 299.0).collect();
    let mut group = c.benchmark_group("curve");
    group.sample_size(10);
    group.bench_function("300 points quadrature", |b| {
        b.iter(|| {
            ks.iter()
                .map(|&k| spec.density(k, Method::Quadrature).unwrap().value)
                .sum::<f64>()
        })
    });
    group.finish();
}

criterion_group!(benches, special_functions, norm, overlap);
criterion_main!(benches);
