//! Benchmarks for the stages of the one-bit MUSIC pipeline on the default
//! 10-element ULA scenario, plus one end-to-end Monte-Carlo trial.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use onebit_doa::{
    eigendecompose, estimate_doas_on, generate_snapshots, grid_with_step, music_spectrum_on,
    noise_subspace, quantize::quantize_snapshots, run_trial, sample_covariance, ArrayGeometry,
    EstimatorVariant, SourceScenario, SteeringGrid,
};

fn scenario() -> (ArrayGeometry, SourceScenario) {
    (
        ArrayGeometry::half_wavelength_ula(10).unwrap(),
        SourceScenario::equal_power(vec![-10.0, 3.5], 0.0).unwrap(),
    )
}

fn bench_snapshot_generation(c: &mut Criterion) {
    let (geometry, source) = scenario();
    let mut group = c.benchmark_group("generate_snapshots");
    for n in [100usize, 1000] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| generate_snapshots(&geometry, &source, n, black_box(7)).unwrap());
        });
    }
    group.finish();
}

fn bench_quantize(c: &mut Criterion) {
    let (geometry, source) = scenario();
    let x = generate_snapshots(&geometry, &source, 1000, 7).unwrap();
    c.bench_function("quantize_snapshots/1000", |b| {
        b.iter(|| quantize_snapshots(black_box(&x)).unwrap());
    });
}

fn bench_sample_covariance(c: &mut Criterion) {
    let (geometry, source) = scenario();
    let x = generate_snapshots(&geometry, &source, 1000, 7).unwrap();
    let y = quantize_snapshots(&x).unwrap();
    let mut group = c.benchmark_group("sample_covariance");
    group.bench_function("unquantized/1000", |b| {
        b.iter(|| sample_covariance(black_box(&x)));
    });
    group.bench_function("one_bit/1000", |b| {
        b.iter(|| sample_covariance(black_box(&y)));
    });
    group.finish();
}

fn bench_eigendecompose(c: &mut Criterion) {
    let (geometry, source) = scenario();
    let x = generate_snapshots(&geometry, &source, 1000, 7).unwrap();
    let r = sample_covariance(&quantize_snapshots(&x).unwrap());
    c.bench_function("eigendecompose/10x10", |b| {
        b.iter(|| eigendecompose(black_box(&r)).unwrap());
    });
}

fn bench_spectrum(c: &mut Criterion) {
    let (geometry, source) = scenario();
    let x = generate_snapshots(&geometry, &source, 1000, 7).unwrap();
    let r = sample_covariance(&quantize_snapshots(&x).unwrap());
    let subspace = noise_subspace(&eigendecompose(&r).unwrap(), 2).unwrap();
    let steering = SteeringGrid::new(&geometry, &grid_with_step(0.05).unwrap()).unwrap();
    c.bench_function("music_spectrum/3601pts", |b| {
        b.iter(|| music_spectrum_on(black_box(&subspace), &steering).unwrap());
    });
    c.bench_function("estimate_doas/3601pts", |b| {
        b.iter(|| estimate_doas_on(black_box(&r), 2, &steering).unwrap());
    });
}

fn bench_full_trial(c: &mut Criterion) {
    let (geometry, source) = scenario();
    let grid = grid_with_step(0.05).unwrap();
    c.bench_function("run_trial/one_bit_music/N=1000", |b| {
        b.iter(|| {
            run_trial(
                &geometry,
                &source,
                1000,
                EstimatorVariant::OneBitMusic,
                &grid,
                black_box(7),
            )
            .unwrap()
        });
    });
}

criterion_group!(
    benches,
    bench_snapshot_generation,
    bench_quantize,
    bench_sample_covariance,
    bench_eigendecompose,
    bench_spectrum,
    bench_full_trial,
);
criterion_main!(benches);
