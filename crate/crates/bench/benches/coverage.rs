use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ropes_core::{closed_theta, coverage_report, generate_closed, sample_sphere, SphereSampling};

fn coverage(c: &mut Criterion) {
    let mut group = c.benchmark_group("coverage");
    group.sample_size(10);
    for n in [2u32, 5, 8] {
        let curve = generate_closed(n, 1).unwrap().sample_per_arc(500).unwrap();
        let theta = closed_theta(n);
        for size in [10_000usize, 100_000] {
            let grid = sample_sphere(size, SphereSampling::Fibonacci);
            group.bench_with_input(BenchmarkId::new(format!("closed_{n}_1"), size), &grid, |b, g| {
                b.iter(|| coverage_report(black_box(&curve), theta, g, 2e-3).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, coverage);
criterion_main!(benches);
