use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ultrashift_bench::{block_engine, diamond_engine};
use ultrashift_core::{
    apply_forward, verify_diamond_identities, DiamondSuite, ProductEngine, SpaceSpec, SparseVector, WeightSequence,
};

fn engine_build(c: &mut Criterion) {
    let mut g = c.benchmark_group("engine_build");
    for h in [10_000usize, 100_000, 1_000_000] {
        g.bench_with_input(BenchmarkId::new("diamond", h), &h, |b, &h| {
            b.iter(|| ProductEngine::new(&mut WeightSequence::diamond(), black_box(h)).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("block", h), &h, |b, &h| {
            b.iter(|| ProductEngine::new(&mut WeightSequence::block(), black_box(h)).unwrap())
        });
    }
    g.finish();
}

fn min_scans(c: &mut Criterion) {
    let d = diamond_engine(200_000);
    let b = block_engine(200_000);
    let mut g = c.benchmark_group("min_scan");
    g.bench_function("diamond_single_n", |bch| bch.iter(|| d.min_product_over_i(black_box(1365), 10_000).unwrap()));
    g.bench_function("diamond_all_n_4096", |bch| bch.iter(|| d.min_products(black_box(4096), 1024).unwrap()));
    g.bench_function("block_all_n_4096", |bch| bch.iter(|| b.min_products(black_box(4096), 1024).unwrap()));
    g.bench_function("block_scan_m1", |bch| bch.iter(|| b.scan_m1(black_box(150_000)).unwrap()));
    g.finish();
}

fn forward_shift(c: &mut Criterion) {
    let d = diamond_engine(100_000);
    let x = SparseVector::from_entries(SpaceSpec::Lp(2.0), (0..64).map(|k| (k, 1.0 / (k + 1) as f64))).unwrap();
    c.bench_function("forward_shift_a8", |b| b.iter(|| apply_forward(&d, black_box(&x), 21_845).unwrap()));
}

fn diamond_suite(c: &mut Criterion) {
    let suite = DiamondSuite::default();
    let d = diamond_engine(suite.required_horizon().unwrap());
    let mut g = c.benchmark_group("suites");
    g.sample_size(10);
    g.bench_function("diamond_default", |b| b.iter(|| verify_diamond_identities(&d, black_box(&suite)).unwrap()));
    g.finish();
}

criterion_group!(benches, engine_build, min_scans, forward_shift, diamond_suite);
criterion_main!(benches);
