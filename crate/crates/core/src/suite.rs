//! Acceptance criteria, runnable from tests and from the command line.

use std::f64::consts::{LN_2, PI, TAU};
use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::ballgeom::{
    check_convexity, check_starlikeness, convexity_check, starlikeness_check, ConvexityOptions,
    MetricBall, Mode, PuncturedQhBall, StarlikenessOptions,
};
use crate::domain::{Disk, Domain};
use crate::gallery::{
    qh_nonintersection_demo, simply_connected_counterexample, sphere_vs_closure, sharpness_threshold,
    two_puncture_sharpness, ScenarioReport,
};
use crate::geodesics::{no_geodesic_pair, triangle_defect, SEGMENT_SAMPLES};
use crate::metric::qh::{default_spacing, qh_distance, qh_punctured_closed_form};
use crate::metric::{annulus_bounds, in_j_ball, j_distance, JBall, Radius};
use crate::point::{Point, Vec2};
use crate::punctured::{disk_decomposition, perpendicularity_residual, tangency_residual, thresholds};

/// Outcome of one acceptance criterion.
#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    /// Optional criteria are reported but never fail the suite.
    pub gated: bool,
    pub passed: bool,
    pub checks: Vec<CheckLine>,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckLine {
    pub label: String,
    pub ok: bool,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = match (self.passed, self.gated) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "FAIL (optional)",
        };
        write!(f, "{verdict} [{:>2}] {} ({:.1} s)", self.id, self.title, self.seconds)
    }
}

#[derive(Default)]
struct Checks(Vec<CheckLine>);

impl Checks {
    fn check(&mut self, ok: bool, label: impl Into<String>) {
        self.0.push(CheckLine { label: label.into(), ok });
    }

    fn scenario(&mut self, report: &ScenarioReport) {
        for e in &report.expectations {
            self.check(
                e.pass,
                format!("{}: {} -> {}", report.name, serde_json::to_string(&e.predicate).unwrap(), e.actual),
            );
        }
    }
}

pub const TITLES: [&str; 13] = [
    "punctured-plane convexity threshold",
    "strict starlikeness threshold",
    "disk decomposition exactness",
    "Euclidean sandwich",
    "finite-puncture intersection identity",
    "triangle equality and geodesics",
    "quasihyperbolic minorant and upper bound",
    "two-puncture sharpness",
    "connected ball with disconnected sphere",
    "disconnected ball in a simply connected domain",
    "quasihyperbolic non-intersection",
    "convex and starlike domains",
    "quasihyperbolic ball thresholds (optional)",
];

/// Runs criterion `id` (1-based).
pub fn run_criterion(id: u8) -> CriterionResult {
    let start = Instant::now();
    let mut c = Checks::default();
    match id {
        1 => criterion_1(&mut c),
        2 => criterion_2(&mut c),
        3 => criterion_3(&mut c),
        4 => criterion_4(&mut c),
        5 => criterion_5(&mut c),
        6 => criterion_6(&mut c),
        7 => criterion_7(&mut c),
        8 => criterion_8(&mut c),
        9 => criterion_9(&mut c),
        10 => criterion_10(&mut c),
        11 => criterion_11(&mut c),
        12 => criterion_12(&mut c),
        13 => criterion_13(&mut c),
        _ => panic!("no criterion {id}"),
    }
    CriterionResult {
        id,
        title: TITLES[id as usize - 1],
        gated: id != 13,
        passed: c.0.iter().all(|l| l.ok),
        checks: c.0,
        seconds: start.elapsed().as_secs_f64(),
    }
}

pub fn run_all() -> Vec<CriterionResult> {
    (1..=13).map(run_criterion).collect()
}

fn radius(m: f64) -> Radius {
    Radius::new(m).expect("positive radius")
}

fn e1() -> Point {
    Point::xy(1.0, 0.0)
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn criterion_1(c: &mut Checks) {
    let g = Domain::punctured_plane();
    let x = e1();
    for (m, trials) in [(0.3, 100_000), (0.5, 100_000), (LN_2, 100_000)] {
        let r = convexity_check(&g, &x, radius(m), Mode::Nonstrict, trials, 1e-9, 1).unwrap();
        c.check(r.passed, format!("convex at M = {m:.6} ({} chords)", r.samples_used));
    }
    for m in [LN_2 + 0.02, 0.8, 1.0] {
        let r = convexity_check(&g, &x, radius(m), Mode::Nonstrict, 20_000, 1e-9, 1).unwrap();
        let ball = JBall::new(&g, &x, radius(m)).unwrap();
        let verified = r.witness.as_ref().is_some_and(|w| w.verify(&ball, Mode::Nonstrict, 1e-9));
        c.check(!r.passed && verified, format!("not convex at M = {m:.6}, witness verified: {verified}"));
    }
    let r = convexity_check(&g, &x, radius(LN_2 - 0.01), Mode::Strict, 20_000, 1e-9, 1).unwrap();
    c.check(r.passed, "strictly convex at M = log 2 - 0.01");
    let r = convexity_check(&g, &x, radius(LN_2), Mode::Strict, 20_000, 1e-9, 1).unwrap();
    let flat = match &r.witness {
        Some(crate::ballgeom::Witness::FlatChord { midpoint, .. }) => (midpoint.x - 0.5).abs() < 1e-9,
        _ => false,
    };
    c.check(!r.passed && flat, "not strictly convex at M = log 2 (flat chord on Re z = 1/2)");
}

fn criterion_2(c: &mut Checks) {
    let g = Domain::punctured_plane();
    let x = e1();
    let s = thresholds().j_starlike;
    let r = starlikeness_check(&g, &x, radius(s), &x, Mode::Strict, 4096, 1e-10).unwrap();
    c.check(r.passed, format!("strictly starlike at M = log(1 + sqrt 2) ({} rays)", r.samples_used));
    let r = starlikeness_check(&g, &x, radius(s + 0.02), &x, Mode::Strict, 4096, 1e-10).unwrap();
    let reentry = matches!(r.witness, Some(crate::ballgeom::Witness::Ray { .. }));
    c.check(!r.passed && reentry, "re-entering ray at M = log(1 + sqrt 2) + 0.02");
    let t = tangency_residual(radius(s));
    c.check(t.abs() < 1e-12, format!("tangency residual {t:.3e}"));
    let p = perpendicularity_residual(radius(s)).unwrap();
    c.check(p.abs() < 1e-10, format!("|1 - c|^2 - r^2 - s^2 = {p:.3e}"));
}

fn criterion_3(c: &mut Checks) {
    let g = Domain::punctured_plane();
    let x = e1();
    let (lo, hi) = (0.05f64.ln(), 1.5f64.ln());
    let disagreements: usize = (0..30)
        .into_par_iter()
        .map(|k| {
            let m = (lo + (hi - lo) * k as f64 / 29.0).exp();
            let dec = disk_decomposition(radius(m));
            let reach = 1.2 * m.exp_m1();
            let mut rng = rng_for(3, k);
            let mut bad = 0;
            for _ in 0..10_000 {
                let y = Vec2::new(1.0 + rng.gen_range(-reach..reach), rng.gen_range(-reach..reach));
                let j = j_distance(&g, &x, &Point::from(y)).unwrap_or(f64::INFINITY);
                if (j - m).abs() < 1e-12 {
                    continue;
                }
                if dec.contains(y) != (j < m) {
                    bad += 1;
                }
            }
            bad
        })
        .sum();
    c.check(disagreements == 0, format!("{disagreements} disagreements over 30 radii x 10^4 points"));
}

/// Planar and spatial test domains.
pub fn sample_domains() -> Vec<(&'static str, Domain)> {
    let disk = |x: f64, r: f64| Disk { center: Vec2::new(x, 0.0), radius: r };
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    vec![
        ("punctured plane", Domain::punctured_plane()),
        ("two punctures", Domain::punctured(vec![Point::xy(0.0, 0.0), Point::xy(3.0, 1.0)]).unwrap()),
        (
            "punctured space",
            Domain::punctured(vec![Point::origin(3), Point::new(vec![1.0, 2.0, -1.0]).unwrap()]).unwrap(),
        ),
        ("half-plane", Domain::half_plane(Vec2::new(0.3, -1.0), 0.5).unwrap()),
        ("convex polygon", random_convex_polygon(&mut rng)),
        ("star polygon", random_star_polygon(&mut rng)),
        (
            "three disks",
            Domain::ball_union(vec![disk(0.0, 1.0), disk(1.0, 0.25), disk(2.0, 1.0)]).unwrap(),
        ),
    ]
}

/// Cyclic polygon with 5 to 9 vertices under a random linear stretch.
pub fn random_convex_polygon(rng: &mut ChaCha8Rng) -> Domain {
    loop {
        let n = rng.gen_range(5..10);
        let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..TAU)).collect();
        angles.sort_by(f64::total_cmp);
        let (a, b, shear) = (rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0), rng.gen_range(-0.5..0.5));
        let vertices = angles
            .iter()
            .map(|t| Vec2::new(a * t.cos() + shear * t.sin(), b * t.sin()))
            .collect();
        if let Ok(d) = Domain::convex_polygon(vertices) {
            if d.boundary_distance(&Point::xy(0.0, 0.0)).is_ok_and(|d| d > 0.05) {
                return d;
            }
        }
    }
}

/// Polygon starlike with respect to the origin: vertices at increasing
/// angles with random radii.
pub fn random_star_polygon(rng: &mut ChaCha8Rng) -> Domain {
    let n = rng.gen_range(6..13);
    let vertices = (0..n)
        .map(|k| {
            let t = TAU * (k as f64 + rng.gen_range(0.1..0.9)) / n as f64;
            Vec2::polar(rng.gen_range(0.3..1.5), t)
        })
        .collect();
    Domain::simple_polygon(vertices).expect("star polygon is simple")
}

/// Uniform point of the domain within `reach` of the origin region.
fn random_point(domain: &Domain, rng: &mut ChaCha8Rng) -> Point {
    let (lo, hi) = domain
        .bounding_box2()
        .filter(|_| domain.is_planar())
        .unwrap_or((Vec2::new(-3.0, -3.0), Vec2::new(3.0, 3.0)));
    loop {
        let p = if domain.dim() == 2 {
            Point::xy(rng.gen_range(lo.x..hi.x), rng.gen_range(lo.y..hi.y))
        } else {
            Point::new((0..domain.dim()).map(|_| rng.gen_range(-3.0..3.0)).collect()).unwrap()
        };
        if domain.depth(&p).unwrap().is_some_and(|d| d > 1e-6) {
            return p;
        }
    }
}

fn random_unit(dim: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if n > 0.1 && n <= 1.0 {
            return v.iter().map(|c| c / n).collect();
        }
    }
}

fn criterion_4(c: &mut Checks) {
    let domains = sample_domains();
    let violations: usize = (0..100_000u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng_for(4, t);
            let (_, g) = &domains[t as usize % domains.len()];
            let x = random_point(g, &mut rng);
            let m = rng.gen_range(0.01..3.0);
            let dx = g.boundary_distance(&x).unwrap();
            let b = annulus_bounds(dx, radius(m)).unwrap();
            let rho = rng.gen_range(0.0..1.2 * b.outer_radius);
            let u = random_unit(g.dim(), &mut rng);
            let y = Point::new(x.coords().iter().zip(&u).map(|(a, v)| a + rho * v).collect()).unwrap();
            let inside = in_j_ball(g, &x, radius(m), &y).unwrap();
            let slack = 1e-12 * (1.0 + dx);
            let mut bad = 0;
            if rho < b.inner_radius - slack && !inside {
                bad += 1;
            }
            if inside {
                let dy = g.boundary_distance(&y).unwrap();
                if rho >= b.outer_radius + slack || dy < b.depth_min - slack || dy > b.depth_max + slack {
                    bad += 1;
                }
            }
            bad
        })
        .sum();
    c.check(violations == 0, format!("{violations} violations in 10^5 samples"));
}

fn criterion_5(c: &mut Checks) {
    let mut total = 0;
    for k in 0..10u64 {
        let mut rng = rng_for(5, k);
        let dim = if k % 2 == 0 { 2 } else { 3 };
        let count = rng.gen_range(1..=6);
        let punctures: Vec<Point> = (0..count)
            .map(|_| Point::new((0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect()).unwrap())
            .collect();
        let g = Domain::punctured(punctures.clone()).unwrap();
        let singles: Vec<Domain> = punctures.iter().map(|p| Domain::punctured(vec![p.clone()]).unwrap()).collect();
        let mismatches: usize = (0..10_000u64)
            .into_par_iter()
            .map(|t| {
                let mut rng = rng_for(50 + k, t);
                let x = random_point(&g, &mut rng);
                let m = radius(rng.gen_range(0.05..2.5));
                let reach = 1.2 * m.get().exp_m1() * g.boundary_distance(&x).unwrap();
                let y = Point::new(x.coords().iter().map(|a| a + rng.gen_range(-reach..reach)).collect()).unwrap();
                if g.depth(&y).unwrap().is_none() {
                    return 0;
                }
                let whole = in_j_ball(&g, &x, m, &y).unwrap();
                let each = singles.iter().all(|s| in_j_ball(s, &x, m, &y).unwrap());
                usize::from(whole != each)
            })
            .sum();
        total += mismatches;
    }
    c.check(total == 0, format!("{total} mismatches over 10 domains x 10^4 samples"));
}

fn criterion_6(c: &mut Checks) {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst_equal: f64 = 0.0;
    let mut least_strict = f64::INFINITY;
    for _ in 0..50 {
        let dim = rng.gen_range(2..=3);
        let p = Point::new((0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
        let g = Domain::punctured(vec![p.clone()]).unwrap();
        let u = random_unit(dim, &mut rng);
        let (a, b) = (rng.gen_range(0.2..1.0), rng.gen_range(1.5..4.0));
        let at = |t: f64| Point::new(p.coords().iter().zip(&u).map(|(c, v)| c + t * v).collect()).unwrap();
        let (x, z) = (at(a), at(b));
        for k in 1..SEGMENT_SAMPLES - 1 {
            let t = k as f64 / (SEGMENT_SAMPLES - 1) as f64;
            let y = x.lerp(&z, t);
            worst_equal = worst_equal.max(triangle_defect(&g, &x, &y, &z).unwrap().abs());
            if (0.1..=0.9).contains(&t) && k % 8 == 0 {
                // Rotate y about x within a plane containing u.
                let side = orthogonal_to(&u);
                for theta in [1e-3f64, 1e-2, 1e-1] {
                    let r = x.dist(&y);
                    let q = Point::new(
                        x.coords()
                            .iter()
                            .zip(u.iter().zip(&side))
                            .map(|(c, (e, f))| c + r * (theta.cos() * e + theta.sin() * f))
                            .collect(),
                    )
                    .unwrap();
                    least_strict = least_strict.min(triangle_defect(&g, &x, &q, &z).unwrap());
                }
            }
        }
    }
    c.check(worst_equal < 1e-12, format!("collinear defect up to {worst_equal:.3e}"));
    c.check(least_strict > 1e-8, format!("perturbed defect at least {least_strict:.3e}"));
    for (name, g) in [
        ("punctured plane", Domain::punctured_plane()),
        ("two punctures", Domain::punctured(vec![Point::xy(0.0, 0.0), Point::xy(10.0, 0.0)]).unwrap()),
        ("upper half-plane", Domain::half_plane(Vec2::new(0.0, -1.0), 0.0).unwrap()),
    ] {
        match no_geodesic_pair(&g) {
            Ok(pair) => c.check(pair.min_defect > 0.0, format!("{name}: no geodesic between {} and {}, defect >= {:.3e}", pair.x, pair.y, pair.min_defect)),
            Err(e) => c.check(false, format!("{name}: {e}")),
        }
    }
}

fn orthogonal_to(u: &[f64]) -> Vec<f64> {
    let k = (0..u.len()).min_by(|&a, &b| u[a].abs().total_cmp(&u[b].abs())).unwrap();
    let mut e: Vec<f64> = (0..u.len()).map(|i| if i == k { 1.0 } else { 0.0 }).collect();
    let dot: f64 = e.iter().zip(u).map(|(a, b)| a * b).sum();
    e.iter_mut().zip(u).for_each(|(a, b)| *a -= dot * b);
    let n = e.iter().map(|c| c * c).sum::<f64>().sqrt();
    e.iter().map(|c| c / n).collect()
}

fn criterion_7(c: &mut Checks) {
    let g = Domain::punctured_plane();
    let pairs: Vec<(Point, Point)> = (0..1000u64)
        .map(|t| {
            let mut rng = rng_for(7, t);
            let x = Vec2::polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..TAU));
            let y = Vec2::polar(x.norm() * rng.gen_range(0.4..2.5), x.angle() + rng.gen_range(-PI..PI));
            (Point::from(x), Point::from(y))
        })
        .collect();
    let minorant_failures: usize = pairs
        .par_iter()
        .map(|(x, y)| {
            // Any lattice path bounds k from above, so a coarse grid keeps
            // the check honest and cheap.
            let h = (g.boundary_distance(x).unwrap().min(g.boundary_distance(y).unwrap()) / 4.0).max(x.dist(y) / 8.0);
            let k = qh_distance(&g, x, y, h).unwrap();
            usize::from(j_distance(&g, x, y).unwrap() > k + 1e-6)
        })
        .sum();
    c.check(minorant_failures == 0, format!("j <= k + 1e-6 on 10^3 pairs ({minorant_failures} failures)"));

    for s in [0.2, 0.5, 0.8] {
        let failures: usize = (0..100u64)
            .into_par_iter()
            .map(|t| {
                let mut rng = rng_for(70, t);
                let x = Point::from(Vec2::polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..TAU)));
                let dx = x.norm();
                let y = &x + &Point::from(Vec2::polar(rng.gen_range(0.01..s) * dx, rng.gen_range(0.0..TAU)));
                let k = qh_distance(&g, &x, &y, default_spacing(&g, &x, &y).unwrap()).unwrap();
                usize::from(k > j_distance(&g, &x, &y).unwrap() / (1.0 - s) + 0.01)
            })
            .sum();
        c.check(failures == 0, format!("k <= j/(1-s) + 0.01 for s = {s} ({failures} failures in 100)"));
    }

    let o = Point::xy(0.0, 0.0);
    for (x, y) in [
        (e1(), Point::xy(-1.0, 0.0)),
        (e1(), Point::xy(0.0, 2.0)),
        (e1(), Point::xy(3.0, 0.5)),
        (Point::xy(0.5, 0.5), Point::xy(-1.5, -0.2)),
    ] {
        let exact = qh_punctured_closed_form(&o, &x, &y).unwrap();
        let h = default_spacing(&g, &x, &y).unwrap();
        let e0 = (qh_distance(&g, &x, &y, h).unwrap() - exact).abs() / exact;
        let e1 = (qh_distance(&g, &x, &y, h / 2.0).unwrap() - exact).abs() / exact;
        c.check(e0 < 0.01 && e1 <= e0 + 1e-9, format!("k({x}, {y}): relative error {e0:.2e} at h, {e1:.2e} at h/2"));
    }
}

fn criterion_8(c: &mut Checks) {
    c.scenario(&two_puncture_sharpness(radius(sharpness_threshold() + 0.1)).unwrap().run());
    c.scenario(&two_puncture_sharpness(radius(sharpness_threshold())).unwrap().run());
}

fn criterion_9(c: &mut Checks) {
    c.scenario(&sphere_vs_closure().unwrap().run());
}

fn criterion_10(c: &mut Checks) {
    c.scenario(&simply_connected_counterexample(0.25).unwrap().run());
    c.scenario(&simply_connected_counterexample(0.5).unwrap().run());
}

fn criterion_11(c: &mut Checks) {
    let report = qh_nonintersection_demo(0.005).unwrap().run();
    c.scenario(&report);
    let pts = crate::gallery::qh_demo_points();
    // Three decimal places.
    c.check(format!("{:.3}", pts.y) == "0.632", format!("|y| = {:.6}", pts.y));
    c.check(format!("{:.3}", pts.z) == "0.724", format!("|z| = {:.6}", pts.z));
}

fn criterion_12(c: &mut Checks) {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut convex: Vec<(String, Domain, Point)> = vec![(
        "half-plane".into(),
        Domain::half_plane(Vec2::new(0.0, -1.0), 0.0).unwrap(),
        Point::xy(0.3, 1.0),
    )];
    for k in 0..5 {
        let g = random_convex_polygon(&mut rng);
        let x = random_point(&g, &mut rng);
        convex.push((format!("convex polygon {k}"), g, x));
    }
    for (name, g, x) in &convex {
        for m in [1.0, 2.0, 3.0] {
            let r = convexity_check(g, x, radius(m), Mode::Nonstrict, 10_000, 1e-9, 12).unwrap();
            c.check(r.passed, format!("{name}, M = {m}: convex"));
        }
    }
    for k in 0..3 {
        let g = random_star_polygon(&mut rng);
        let x = Point::xy(0.0, 0.0);
        for m in [1.0, 2.0, 3.0] {
            let r = starlikeness_check(&g, &x, radius(m), &x, Mode::Nonstrict, 10_000, 1e-9).unwrap();
            c.check(r.passed, format!("star polygon {k}, M = {m}: starlike about x"));
        }
    }
}

fn criterion_13(c: &mut Checks) {
    let g = Domain::punctured_plane();
    let ball = |m: f64| PuncturedQhBall {
        puncture: Vec2::new(0.0, 0.0),
        center: Vec2::new(1.0, 0.0),
        radius: m,
    };
    // The closed form agrees with the lattice distance on the spheres used.
    let mut worst: f64 = 0.0;
    for m in [1.0, 2.8] {
        for k in 0..12 {
            let t = TAU * k as f64 / 12.0 + 0.1;
            let b = ball(m);
            let lo = 0.0;
            let mut hi = b.extent();
            let mut l = lo;
            let dir = Vec2::polar(1.0, t);
            while b.contains(b.center + dir * hi) && hi < 1e3 {
                hi *= 2.0;
            }
            for _ in 0..60 {
                let mid = 0.5 * (l + hi);
                if b.contains(b.center + dir * mid) {
                    l = mid;
                } else {
                    hi = mid;
                }
            }
            let p = Point::from(b.center + dir * l);
            let k_num = qh_distance(&g, &e1(), &p, default_spacing(&g, &e1(), &p).unwrap()).unwrap();
            worst = worst.max((k_num - m).abs());
        }
    }
    c.check(worst < 5e-2, format!("lattice k on closed-form spheres within {worst:.2e} of M"));
    let opts = ConvexityOptions {
        trials: 10_000,
        seed: 13,
        ..ConvexityOptions::default()
    };
    c.check(check_convexity(&ball(1.0), &opts).passed, "convex at M = 1");
    c.check(!check_convexity(&ball(1.1), &opts).passed, "not convex at M = 1.1");
    let star = StarlikenessOptions::default();
    let center = Vec2::new(1.0, 0.0);
    c.check(check_starlikeness(&ball(2.8), center, &star).unwrap().passed, "strictly starlike at M = 2.8");
    c.check(!check_starlikeness(&ball(2.9), center, &star).unwrap().passed, "not strictly starlike at M = 2.9");
}
