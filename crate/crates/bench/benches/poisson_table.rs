use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fuzzyloop_core::PoissonTable;

fn build(c: &mut Criterion) {
    let mut group = c.benchmark_group("poisson_table");
    group.sample_size(10);
    for lmax in [2u32, 4, 6] {
        group.bench_with_input(BenchmarkId::from_parameter(lmax), &lmax, |b, &lmax| {
            b.iter(|| PoissonTable::build(lmax))
        });
    }
    group.finish();
}

criterion_group!(benches, build);
criterion_main!(benches);
