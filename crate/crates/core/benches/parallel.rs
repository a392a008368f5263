//! Single-thread pool vs the default rayon pool on the data-parallel paths.
//! `cargo bench --no-default-features` times the sequential build instead.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use psdmult::engine::{apply_multiplier, GridField, GridSpec};
use psdmult::harness::config::{BochnerSuiteParams, SchurSuiteParams};
use psdmult::harness::{run, Config, Scenario};
use psdmult::{MatrixSymbol, ScalarSymbol, C64};

fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    vec![
        ("1-thread", rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap()),
        ("default", rayon::ThreadPoolBuilder::new().build().unwrap()),
    ]
}

fn multiplier(c: &mut Criterion) {
    let spec = GridSpec::new(2, 256, 20.0).unwrap();
    let f = GridField::from_fn(spec, 2, |x| {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        vec![C64::new((-r2).exp(), 0.0), C64::new((-0.5 * r2).exp(), 0.0)]
    })
    .unwrap();
    let g = MatrixSymbol::diagonal(vec![ScalarSymbol::gaussian(2, 1.0), ScalarSymbol::cosine(vec![1.0, 0.5])]);
    let mut group = c.benchmark_group("apply_multiplier_2d_256");
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            pool.install(|| b.iter(|| apply_multiplier(&g, &f).unwrap()))
        });
    }
    group.finish();
}

fn suites(c: &mut Criterion) {
    let schur = Config::new(Scenario::SchurSuite(SchurSuiteParams { count: 200, ..Default::default() }), 1);
    let bochner = Config::new(Scenario::BochnerSuite(BochnerSuiteParams { count: 20, ..Default::default() }), 1);
    let mut group = c.benchmark_group("suites");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::new("schur", name), |b| pool.install(|| b.iter(|| run(&schur).unwrap())));
        group.bench_function(BenchmarkId::new("bochner", name), |b| pool.install(|| b.iter(|| run(&bochner).unwrap())));
    }
    group.finish();
}

criterion_group!(benches, multiplier, suites);
criterion_main!(benches);
