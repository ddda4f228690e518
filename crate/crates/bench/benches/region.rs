use criterion::{criterion_group, criterion_main, Criterion};

use jball_core::ballgeom::{check_convexity, extract_region, topology_check, trace_boundary, ConvexityOptions};
use jball_core::{Domain, JBall, Point, Radius};

fn region(c: &mut Criterion) {
    let g = Domain::punctured(vec![Point::xy(0.0, 0.0), Point::xy(0.0, 2.0)]).unwrap();
    let x = Point::xy(1.0, 1.0);
    let m = Radius::new(1.0).unwrap();
    let mut group = c.benchmark_group("region");
    group.sample_size(10);
    group.bench_function("extract_1024", |b| b.iter(|| extract_region(&g, &x, m, None)));
    let grid = extract_region(&g, &x, m, None).unwrap();
    group.bench_function("topology_1024", |b| b.iter(|| topology_check(&grid)));
    group.bench_function("trace_1024", |b| b.iter(|| trace_boundary(&grid)));
    let ball = JBall::new(&g, &x, m).unwrap();
    let opts = ConvexityOptions { trials: 1000, ..ConvexityOptions::default() };
    group.bench_function("convexity_1000", |b| b.iter(|| check_convexity(&ball, &opts)));
    group.finish();
}

criterion_group!(benches, region);
criterion_main!(benches);
