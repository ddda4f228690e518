use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use jball_core::metric::qh::qh_distance;
use jball_core::{j_distance, Disk, Domain, Point, Vec2};

fn j(c: &mut Criterion) {
    let plane = Domain::punctured_plane();
    let many = Domain::punctured((0..64).map(|k| Point::xy(k as f64, (k * k % 7) as f64)).collect()).unwrap();
    let polygon = Domain::simple_polygon(
        (0..32)
            .map(|k| Vec2::polar(if k % 2 == 0 { 1.0 } else { 0.5 }, k as f64 * std::f64::consts::TAU / 32.0))
            .collect(),
    )
    .unwrap();
    let disks = Domain::ball_union(
        (0..8).map(|k| Disk { center: Vec2::new(k as f64, 0.0), radius: 0.8 }).collect(),
    )
    .unwrap();
    let (x, y) = (Point::xy(0.3, 0.1), Point::xy(0.2, -0.2));
    let mut group = c.benchmark_group("j_distance");
    for (name, g) in [("punctured_plane", &plane), ("64_punctures", &many), ("star_polygon", &polygon), ("8_disks", &disks)] {
        group.bench_function(name, |b| b.iter(|| j_distance(black_box(g), black_box(&x), black_box(&y))));
    }
    group.finish();
}

fn qh(c: &mut Criterion) {
    let g = Domain::punctured_plane();
    let (x, y) = (Point::xy(1.0, 0.0), Point::xy(-1.0, 0.0));
    let mut group = c.benchmark_group("qh_distance");
    group.sample_size(10);
    for h in [0.1, 0.05] {
        group.bench_function(format!("half_turn_h{h}"), |b| b.iter(|| qh_distance(&g, &x, &y, h)));
    }
    group.finish();
}

criterion_group!(benches, j, qh);
criterion_main!(benches);
