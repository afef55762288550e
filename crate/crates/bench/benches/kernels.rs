use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use semispec_bench::bench_matrix;
use semispec_core::cauchy::{build_b, build_f, CauchyMethod};
use semispec_core::linalg::{eig_decompose, expm, svd, Cx, DEFAULT_CLUSTER_TOL};
use semispec_core::local_spectral::resolvent_chain;

fn bench_expm(c: &mut Criterion) {
    let mut group = c.benchmark_group("expm");
    for n in [4usize, 8, 16, 32] {
        let a = bench_matrix(n, 1);
        group.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| {
            b.iter(|| expm(a).unwrap())
        });
    }
    group.finish();
}

fn bench_eig(c: &mut Criterion) {
    let mut group = c.benchmark_group("eig_decompose");
    for n in [4usize, 8, 16] {
        let a = bench_matrix(n, 2);
        group.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| {
            b.iter(|| eig_decompose(a, DEFAULT_CLUSTER_TOL).unwrap())
        });
    }
    group.finish();
}

fn bench_svd(c: &mut Criterion) {
    let mut group = c.benchmark_group("jacobi_svd");
    for n in [8usize, 16, 32] {
        let a = bench_matrix(n, 3);
        group.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| {
            b.iter(|| svd(a.array()).unwrap())
        });
    }
    group.finish();
}

fn bench_cauchy_routes(c: &mut Criterion) {
    let a = bench_matrix(6, 4);
    let lambda = Cx::new(1.0, 0.5);
    let t = 0.8;
    let mut group = c.benchmark_group("cauchy_operators");
    group.bench_function("B blockExp", |b| {
        b.iter(|| build_b(&a, lambda, t, CauchyMethod::BlockExp).unwrap())
    });
    group.bench_function("B resolvent", |b| {
        b.iter(|| build_b(&a, lambda, t, CauchyMethod::ResolventForm).unwrap())
    });
    group.bench_function("B quadrature", |b| {
        b.iter(|| build_b(&a, lambda, t, CauchyMethod::Quadrature).unwrap())
    });
    group.bench_function("F blockExp", |b| {
        b.iter(|| build_f(&a, lambda, t, CauchyMethod::BlockExp).unwrap())
    });
    group.finish();
}

fn bench_resolvent_chain(c: &mut Criterion) {
    let a = bench_matrix(8, 5);
    let x = ndarray::Array1::from_shape_fn(8, |i| Cx::new(1.0 - 0.1 * i as f64, 0.2));
    c.bench_function("resolvent_chain depth 40", |b| {
        b.iter(|| resolvent_chain(&a, Cx::new(2.5, 1.0), &x, 40, 1e-10).unwrap())
    });
}

criterion_group!(
    benches,
    bench_expm,
    bench_eig,
    bench_svd,
    bench_cauchy_routes,
    bench_resolvent_chain
);
criterion_main!(benches);
