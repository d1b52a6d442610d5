use std::hint::black_box;

use criterion::{BenchmarkId, Criterion};
use intmeasure::potential::equilibrium_discretized;
use intmeasure::{w1_distance, CompactSetSpec};
use intmeasure_bench::{path_polynomial, root_measure};

pub fn bench(c: &mut Criterion) {
    let segment = CompactSetSpec::interval(-2.0, 2.0, 10_000).unwrap();
    let mut group = c.benchmark_group("w1/path_vs_arcsine");
    group.sample_size(10);
    for n in [64u32, 256] {
        let mu = root_measure(&path_polynomial(n));
        let nu = equilibrium_discretized(&segment, n as usize).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &(mu, nu), |b, (mu, nu)| {
            b.iter(|| black_box(w1_distance(mu, nu)))
        });
    }
    group.finish();
}
