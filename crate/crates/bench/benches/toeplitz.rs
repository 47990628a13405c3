use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fuzzyloop_bench::dense_symbol;
use fuzzyloop_core::quantize::{op_norm, toeplitz};
use fuzzyloop_core::{ExactOperator, FloatOperator};

fn exact(c: &mut Criterion) {
    let f = dense_symbol(4);
    let mut group = c.benchmark_group("toeplitz_exact");
    for k in [4u32, 8, 12] {
        group.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| {
            b.iter(|| -> ExactOperator { toeplitz(k, &f).unwrap() })
        });
    }
    group.finish();
}

fn float(c: &mut Criterion) {
    let f = dense_symbol(4);
    let mut group = c.benchmark_group("toeplitz_float");
    for k in [32u32, 128, 512] {
        group.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| {
            b.iter(|| -> FloatOperator { toeplitz(k, &f).unwrap() })
        });
    }
    group.finish();

    let mut group = c.benchmark_group("op_norm");
    group.sample_size(20);
    for k in [32u32, 128] {
        let t: FloatOperator = toeplitz(k, &f).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(k), &t, |b, t| b.iter(|| op_norm(t).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, exact, float);
criterion_main!(benches);
