use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use tops_bench::{cue_fixture, tops_fixture};
use tops_core::coupled_tops::{floquet_spectrum, full_floquet, lambda_for_spins};
use tops_core::entanglement::{eigenstate_schmidt_spectra, predicted_lambda12};
use tops_core::linalg::eig_unitary;
use tops_core::numerics::{bessel_k0, sine_integral};
use tops_core::rmt::sample_coe;
use tops_core::spectral_stats::PerturbativeSpacing;
use tops_core::{LambdaMethod, MatrixElementLaw, RngStream};

fn special_functions(c: &mut Criterion) {
    c.bench_function("bessel_k0", |b| b.iter(|| bessel_k0(black_box(3.7))));
    c.bench_function("sine_integral", |b| b.iter(|| sine_integral(black_box(17.3))));
}

fn eigensolver(c: &mut Criterion) {
    let mut g = c.benchmark_group("eig_unitary");
    g.sample_size(10);
    for n in [64, 256, 512] {
        let u = cue_fixture(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &u, |b, u| b.iter(|| eig_unitary(u).unwrap()));
    }
    g.finish();
}

fn sampling(c: &mut Criterion) {
    let mut g = c.benchmark_group("sample_coe");
    g.sample_size(20);
    for n in [32, 128] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| sample_coe(n, RngStream::new(2, 0)).unwrap())
        });
    }
    g.finish();
}

fn coupled_tops(c: &mut Criterion) {
    let p = tops_fixture(10, 0.2);
    let mut g = c.benchmark_group("coupled_tops_j10");
    g.sample_size(10);
    g.bench_function("full_floquet", |b| b.iter(|| full_floquet(&p).unwrap()));
    g.bench_function("floquet_spectrum", |b| b.iter(|| floquet_spectrum(&p).unwrap()));
    let d = floquet_spectrum(&p).unwrap();
    g.bench_function("schmidt_spectra", |b| b.iter(|| eigenstate_schmidt_spectra(&d, 21, 21).unwrap()));
    g.finish();
    c.bench_function("lambda_exact_j50", |b| {
        b.iter(|| lambda_for_spins(50, 50, black_box(0.01), LambdaMethod::ExactSum))
    });
}

fn predictions(c: &mut Criterion) {
    let mut g = c.benchmark_group("predictions");
    g.sample_size(10);
    g.bench_function("perturbative_spacing_pdf", |b| {
        let p = PerturbativeSpacing::new(0.02, MatrixElementLaw::BesselCoe).unwrap();
        b.iter(|| p.pdf(black_box(0.8)).unwrap())
    });
    g.bench_function("predicted_lambda12", |b| {
        b.iter(|| predicted_lambda12(black_box(0.01), MatrixElementLaw::BesselCoe).unwrap())
    });
    g.finish();
}

criterion_group!(benches, special_functions, eigensolver, sampling, coupled_tops, predictions);
criterion_main!(benches);
