use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use graphcalc_bench::matrix_algebra;
use graphcalc_core::enumerate::{graphs_with_profile, ValenceProfile};
use graphcalc_core::evaluate::evaluate_closed;
use graphcalc_core::expansion::{
    partition_function, partition_function_oracle, ExpansionMode, ExpansionRequest,
};
use graphcalc_core::graph::{named, Mode};
use graphcalc_core::kontsevich::{euler_series, z_gamma_coloring, KontsevichSpectrum};
use graphcalc_core::scalar::int;

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("graphs_with_profile");
    for counts in [vec![0, 0, 4], vec![0, 1, 2, 1], vec![0, 0, 0, 0, 2]] {
        let p = ValenceProfile::from_counts(&counts);
        group.bench_with_input(BenchmarkId::from_parameter(&p), &p, |b, p| {
            b.iter(|| graphs_with_profile(black_box(p), Mode::Ribbon))
        });
    }
    group.finish();
}

fn evaluation(c: &mut Criterion) {
    let alg = matrix_algebra(4);
    let g = named::crossed_petals();
    c.bench_function("evaluate_closed crossed petals, N=2", |b| {
        b.iter(|| evaluate_closed(black_box(&g), &alg, Mode::Ribbon).unwrap())
    });
    let spectrum = KontsevichSpectrum::new(vec![int(1), int(2), int(3)]).unwrap();
    let theta = named::twisted_theta();
    c.bench_function("z_gamma_coloring twisted theta, N=3", |b| {
        b.iter(|| z_gamma_coloring(black_box(&theta), &spectrum).unwrap())
    });
}

fn expansion(c: &mut Criterion) {
    let req = ExpansionRequest::new(matrix_algebra(4), ExpansionMode::Ribbon, 6);
    let mut group = c.benchmark_group("partition function, N=2, order 6");
    group.sample_size(10);
    group.bench_function("graph sum", |b| {
        b.iter(|| partition_function(black_box(&req)).unwrap())
    });
    group.bench_function("Taylor-Wick", |b| {
        b.iter(|| partition_function_oracle(black_box(&req)).unwrap())
    });
    group.finish();
    let mut group = c.benchmark_group("euler series");
    group.sample_size(10);
    group.bench_function("order 2", |b| {
        b.iter(|| euler_series(black_box(2)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, enumeration, evaluation, expansion);
criterion_main!(benches);
