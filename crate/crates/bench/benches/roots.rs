use std::hint::black_box;

use criterion::{BenchmarkId, Criterion};
use intmeasure::find_roots;
use intmeasure_bench::{cyclotomic_product, path_polynomial};

pub fn bench(c: &mut Criterion) {
    let mut group = c.benchmark_group("find_roots");
    group.sample_size(10);
    for n in [32u32, 128] {
        let unity = cyclotomic_product(n);
        group.bench_with_input(BenchmarkId::new("roots_of_unity", n), &unity, |b, p| {
            b.iter(|| black_box(find_roots(p, 1e-12).unwrap()))
        });
        let path = path_polynomial(n);
        group.bench_with_input(BenchmarkId::new("path", n), &path, |b, p| {
            b.iter(|| black_box(find_roots(p, 1e-12).unwrap()))
        });
    }
    group.finish();
}
