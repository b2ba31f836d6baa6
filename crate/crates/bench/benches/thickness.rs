use std::f64::consts::PI;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ropes_core::{generate_closed, thickness_accelerated, thickness_bruteforce, SampledCurve, Vec3};

fn wobble(m: usize) -> SampledCurve {
    SampledCurve::from_fn(m, true, |s| {
        let phi = 2.0 * PI * s;
        Vec3::new(phi.cos(), phi.sin(), 0.2 * (3.0 * phi).sin())
    })
    .unwrap()
}

fn engines(c: &mut Criterion) {
    let mut group = c.benchmark_group("thickness");
    group.sample_size(10);
    for m in [250usize, 500, 1000] {
        let curves = [
            ("wobble", wobble(m)),
            ("closed_5_2", generate_closed(5, 2).unwrap().sample(m).unwrap()),
        ];
        for (name, curve) in &curves {
            let id = format!("{name}/{m}");
            group.bench_with_input(BenchmarkId::new("brute", &id), curve, |b, c| {
                b.iter(|| thickness_bruteforce(black_box(c)).unwrap())
            });
            group.bench_with_input(BenchmarkId::new("accelerated", &id), curve, |b, c| {
                b.iter(|| thickness_accelerated(black_box(c)).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, engines);
criterion_main!(benches);
