use std::hint::black_box;

use criterion::Criterion;
use intmeasure::potential::{capacity_leja, equilibrium_discretized};
use intmeasure::CompactSetSpec;

pub fn bench(c: &mut Criterion) {
    let interval = CompactSetSpec::interval(-2.0, 2.0, 10_000).unwrap();
    let lemniscate = CompactSetSpec::lemniscate("t^2-2".parse().unwrap(), 4.0, 10_000).unwrap();
    let mut group = c.benchmark_group("capacity_leja_256");
    group.sample_size(10);
    group.bench_function("interval", |b| b.iter(|| black_box(capacity_leja(&interval, 256).unwrap())));
    group.bench_function("lemniscate", |b| {
        b.iter(|| black_box(capacity_leja(&lemniscate, 256).unwrap()))
    });
    group.finish();
    c.bench_function("equilibrium/lemniscate_512", |b| {
        b.iter(|| black_box(equilibrium_discretized(&lemniscate, 512).unwrap()))
    });
}
