use criterion::{criterion_group, criterion_main, Criterion};
use fuzzyloop_bench::cos_sin_pair;
use fuzzyloop_core::cocycles::{limit_sweep, SweepOptions};

fn sweep(c: &mut Criterion) {
    let (f, g) = cos_sin_pair(2);
    let mut group = c.benchmark_group("limit_sweep");
    group.sample_size(10);
    let float_only = SweepOptions {
        exact_k_max: 0,
        ..SweepOptions::default()
    };
    group.bench_function("float_k8_to_128", |b| {
        b.iter(|| limit_sweep(&f, &g, &[8, 16, 32, 64, 128], &float_only).unwrap())
    });
    group.bench_function("exact_k2_to_12", |b| {
        b.iter(|| limit_sweep(&f, &g, &[2, 4, 8, 12], &SweepOptions::default()).unwrap())
    });
    group.finish();
}

criterion_group!(benches, sweep);
criterion_main!(benches);
