use criterion::{criterion_group, criterion_main, Criterion};
use polaron_bench::{grid, initial, model};
use polaron_core::oracle::{bangbang_scan, PulseTiming, TruncatedBathConfig};
use polaron_core::{build_kernel_table, build_rate_table, evolve_closed_form, evolve_ode, QuadratureSpec};
use std::hint::black_box;

fn kernels(c: &mut Criterion) {
    let (m, g, spec) = (model(), grid(10.0), QuadratureSpec::default());
    c.bench_function("kernel_table_t10", |b| {
        b.iter(|| build_kernel_table(black_box(&m), &g, &spec).unwrap())
    });
}

fn rates(c: &mut Criterion) {
    let (m, g, spec) = (model(), grid(10.0), QuadratureSpec::default());
    c.bench_function("rate_table_t10", |b| {
        b.iter(|| build_rate_table(black_box(&m), 1.0, &g, &spec).unwrap())
    });
}

fn evolvers(c: &mut Criterion) {
    let table = build_rate_table(&model(), 1.0, &grid(50.0), &QuadratureSpec::default()).unwrap();
    let rho0 = initial();
    c.bench_function("evolve_ode_t50", |b| {
        b.iter(|| evolve_ode(black_box(rho0), &table).unwrap())
    });
    c.bench_function("evolve_closed_form_t50", |b| {
        b.iter(|| evolve_closed_form(black_box(rho0), &table).unwrap())
    });
}

fn oracle(c: &mut Criterion) {
    let cfg = TruncatedBathConfig::discretized(1.0, 1.0, 2, 4.0, 4, 0.1, 0.0).unwrap();
    let rho0 = initial();
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    group.bench_function("bangbang_scan_2modes", |b| {
        b.iter(|| bangbang_scan(black_box(&cfg), &rho0, 2.0, &[4, 8, 16], PulseTiming::Symmetric).unwrap())
    });
    group.finish();
}

criterion_group!(benches, kernels, rates, evolvers, oracle);
criterion_main!(benches);
