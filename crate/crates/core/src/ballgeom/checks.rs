use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::MetricBall;
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::metric::{JBall, Radius};
use crate::point::{Point, Vec2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Strict,
    Nonstrict,
}

/// Evidence that a ball lacks a property. Every variant re-verifies through
/// direct distance evaluations, see [`Witness::verify`].
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `a` and `b` are in the ball, `point` on the chord is not.
    Chord { a: Vec2, b: Vec2, point: Vec2, excess: f64 },
    /// `a` and `b` are in the ball and well apart, yet their midpoint is
    /// within `tol` of the sphere.
    FlatChord { a: Vec2, b: Vec2, midpoint: Vec2, depth: f64 },
    /// Along the ray from `center`, `exit` lies (nearly) outside and the
    /// later point `reentry` lies inside.
    Ray { center: Vec2, angle: f64, exit: Vec2, reentry: Vec2 },
}

impl Witness {
    pub fn verify<B: MetricBall + ?Sized>(&self, ball: &B, mode: Mode, tol: f64) -> bool {
        match *self {
            Witness::Chord { a, b, point, .. } => {
                ball.contains(a) && ball.contains(b) && !ball.contains(point) && ball.excess(point) > tol
            }
            Witness::FlatChord { a, b, midpoint, .. } => {
                ball.contains(a) && ball.contains(b) && -ball.excess(midpoint) <= tol
            }
            Witness::Ray { center, exit, reentry, .. } => {
                let out = match mode {
                    Mode::Strict => ball.excess(exit) > -tol,
                    Mode::Nonstrict => ball.excess(exit) > tol && !ball.contains(exit),
                };
                ball.contains(center) && out && ball.contains(reentry) && ball.excess(reentry) < -tol
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub passed: bool,
    pub witness: Option<Witness>,
    pub samples_used: usize,
    pub tol: f64,
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;

/// Maximises `f` on `[lo, hi]` by golden-section search.
fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> (f64, f64) {
    let mut a = hi - GOLDEN * (hi - lo);
    let mut b = lo + GOLDEN * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    for _ in 0..iters {
        if fa >= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - GOLDEN * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + GOLDEN * (hi - lo);
            fb = f(b);
        }
    }
    if fa >= fb {
        (a, fa)
    } else {
        (b, fb)
    }
}

/// Last point inside the ball along the ray from its centre before the first
/// exit, located to about `1e-15` relative precision.
fn boundary_point<B: MetricBall + ?Sized>(ball: &B, dir: Vec2) -> Vec2 {
    let c = ball.center();
    let reach = ball.extent();
    let steps = 256;
    let mut inside = 0.0;
    let mut outside = reach;
    for k in 1..=steps {
        let t = reach * k as f64 / steps as f64;
        if ball.contains(c + dir * t) {
            inside = t;
        } else {
            outside = t;
            break;
        }
    }
    for _ in 0..64 {
        let mid = 0.5 * (inside + outside);
        if mid <= inside || mid >= outside {
            break;
        }
        if ball.contains(c + dir * mid) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    c + dir * inside
}

fn sample_inside<B: MetricBall + ?Sized>(ball: &B, rng: &mut ChaCha8Rng) -> Option<Vec2> {
    let (lo, hi) = ball.sample_box();
    (0..10_000).find_map(|_| {
        let p = Vec2::new(rng.gen_range(lo.x..hi.x), rng.gen_range(lo.y..hi.y));
        ball.contains(p).then_some(p)
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvexityOptions {
    pub mode: Mode,
    pub trials: usize,
    pub tol: f64,
    pub seed: u64,
    /// Interior points tested per chord before refinement.
    pub chord_points: usize,
}

impl Default for ConvexityOptions {
    fn default() -> Self {
        Self {
            mode: Mode::Nonstrict,
            trials: 10_000,
            tol: 1e-9,
            seed: 0,
            chord_points: 64,
        }
    }
}

fn chord_violation<B: MetricBall + ?Sized>(ball: &B, a: Vec2, b: Vec2, opts: &ConvexityOptions) -> Option<Witness> {
    let n = opts.chord_points;
    let f = |t: f64| ball.excess(a.lerp(b, t));
    let (mut best_t, mut best_f) = (0.0, f64::NEG_INFINITY);
    for k in 1..=n {
        let t = k as f64 / (n + 1) as f64;
        let v = f(t);
        if v > best_f {
            (best_t, best_f) = (t, v);
        }
    }
    if best_f <= opts.tol {
        let w = 1.0 / (n + 1) as f64;
        let (t, v) = golden_max(f, (best_t - w).max(0.0), (best_t + w).min(1.0), 60);
        if v > best_f {
            (best_t, best_f) = (t, v);
        }
    }
    (best_f > opts.tol).then(|| Witness::Chord {
        a,
        b,
        point: a.lerp(b, best_t),
        excess: best_f,
    })
}

/// Samples chords of the ball. Even trials join two uniform points of the
/// ball; odd trials join two points just inside the sphere in random
/// directions from the centre. Strict mode also requires the midpoint of
/// every such boundary pair at least `0.05 * extent` apart to lie deeper
/// than `tol`.
pub fn check_convexity<B: MetricBall + ?Sized>(ball: &B, opts: &ConvexityOptions) -> CheckReport {
    let min_sep = 0.05 * ball.extent();
    let results: Vec<(bool, Option<Witness>)> = (0..opts.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(t as u64);
            let pair = if t % 2 == 0 {
                sample_inside(ball, &mut rng).zip(sample_inside(ball, &mut rng))
            } else {
                let (u, v) = (rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU));
                Some((
                    boundary_point(ball, Vec2::polar(1.0, u)),
                    boundary_point(ball, Vec2::polar(1.0, v)),
                ))
            };
            let Some((a, b)) = pair else {
                return (false, None);
            };
            if let Some(w) = chord_violation(ball, a, b, opts) {
                return (true, Some(w));
            }
            if opts.mode == Mode::Strict && t % 2 == 1 && a.dist(b) >= min_sep {
                let midpoint = a.lerp(b, 0.5);
                let depth = -ball.excess(midpoint);
                if depth <= opts.tol {
                    return (true, Some(Witness::FlatChord { a, b, midpoint, depth }));
                }
            }
            (true, None)
        })
        .collect();
    let samples_used = results.iter().filter(|r| r.0).count();
    let witness = results
        .into_iter()
        .find_map(|(_, w)| w.filter(|w| w.verify(ball, opts.mode, opts.tol)));
    CheckReport {
        passed: witness.is_none(),
        witness,
        samples_used,
        tol: opts.tol,
    }
}

/// Convexity of `B_j(x, M)`.
pub fn convexity_check(
    domain: &Domain,
    x: &Point,
    m: Radius,
    mode: Mode,
    trials: usize,
    tol: f64,
    seed: u64,
) -> Result<CheckReport> {
    let ball = JBall::new(domain, x, m)?;
    Ok(check_convexity(
        &ball,
        &ConvexityOptions {
            mode,
            trials,
            tol,
            seed,
            ..ConvexityOptions::default()
        },
    ))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StarlikenessOptions {
    pub mode: Mode,
    pub rays: usize,
    pub tol: f64,
    pub samples_per_ray: usize,
    /// Rays closest to failing that get a finer angular scan.
    pub refine_rays: usize,
}

impl Default for StarlikenessOptions {
    fn default() -> Self {
        Self {
            mode: Mode::Strict,
            rays: 4096,
            tol: 1e-10,
            samples_per_ray: 1024,
            refine_rays: 16,
        }
    }
}

struct RayScan {
    angle: f64,
    /// Smallest excess after the first exit; infinite when there is none.
    margin: f64,
    witness: Option<Witness>,
}

fn scan_ray<B: MetricBall + ?Sized>(ball: &B, center: Vec2, angle: f64, reach: f64, opts: &StarlikenessOptions) -> RayScan {
    let dir = Vec2::polar(1.0, angle);
    let n = opts.samples_per_ray;
    let dt = reach / n as f64;
    let f = |t: f64| ball.excess(center + dir * t);
    let samples: Vec<f64> = (0..=n).map(|k| f(k as f64 * dt)).collect();

    // Samples in order along the ray, with golden-section refinements of
    // interior extrema inserted in place.
    let mut events: Vec<(f64, f64)> = Vec::with_capacity(n + 64);
    let mut refined = 0;
    for k in 0..=n {
        let t = k as f64 * dt;
        events.push((t, samples[k]));
        if k == 0 || k == n || refined >= 64 || !samples[k].is_finite() {
            continue;
        }
        let (prev, next) = (samples[k - 1], samples[k + 1]);
        let max = samples[k] > prev && samples[k] >= next;
        let min = samples[k] < prev && samples[k] <= next;
        if max || min {
            refined += 1;
            let sign = if max { 1.0 } else { -1.0 };
            let (tt, v) = golden_max(|s| sign * f(s), t - dt, t + dt, 40);
            let pos = if tt < t { events.len() - 1 } else { events.len() };
            events.insert(pos, (tt, sign * v));
        }
    }

    let out_threshold = match opts.mode {
        Mode::Strict => -opts.tol,
        Mode::Nonstrict => opts.tol,
    };
    let mut exit: Option<f64> = None;
    let mut margin = f64::INFINITY;
    for &(t, v) in &events {
        match exit {
            None if v > out_threshold => exit = Some(t),
            None => {}
            Some(te) => {
                margin = margin.min(v);
                if v < -opts.tol {
                    return RayScan {
                        angle,
                        margin,
                        witness: Some(Witness::Ray {
                            center,
                            angle,
                            exit: center + dir * te,
                            reentry: center + dir * t,
                        }),
                    };
                }
            }
        }
    }
    RayScan {
        angle,
        margin,
        witness: None,
    }
}

/// Scans rays from `center`: a ray fails when it leaves the ball and comes
/// back. In strict mode "leaves" means reaching within `tol` of the sphere,
/// so a ray that touches the sphere and continues inside also fails.
pub fn check_starlikeness<B: MetricBall + ?Sized>(
    ball: &B,
    center: Vec2,
    opts: &StarlikenessOptions,
) -> Result<CheckReport> {
    if !ball.contains(center) {
        return Err(Error::InvalidArgument("centre is not in the ball".into()));
    }
    let reach = ball.extent() + center.dist(ball.center());
    let step = TAU / opts.rays as f64;
    let mut scans: Vec<RayScan> = (0..opts.rays)
        .into_par_iter()
        .map(|k| scan_ray(ball, center, k as f64 * step, reach, opts))
        .collect();
    let mut samples_used = scans.len();

    if scans.iter().all(|s| s.witness.is_none()) && opts.refine_rays > 0 {
        let mut order: Vec<usize> = (0..scans.len()).filter(|&k| scans[k].margin.is_finite()).collect();
        order.sort_by(|&a, &b| scans[a].margin.total_cmp(&scans[b].margin).then(a.cmp(&b)));
        order.truncate(opts.refine_rays);
        let sub = 16;
        let extra: Vec<RayScan> = order
            .par_iter()
            .flat_map_iter(|&k| {
                let base = scans[k].angle;
                (1..sub).map(move |s| base + step * (s as f64 / sub as f64 - 0.5))
            })
            .map(|angle| scan_ray(ball, center, angle, reach, opts))
            .collect();
        samples_used += extra.len();
        scans.extend(extra);
    }

    let witness = scans
        .into_iter()
        .find_map(|s| s.witness.filter(|w| w.verify(ball, opts.mode, opts.tol)));
    Ok(CheckReport {
        passed: witness.is_none(),
        witness,
        samples_used,
        tol: opts.tol,
    })
}

/// Starlikeness of `B_j(x, M)` with respect to `center`.
pub fn starlikeness_check(
    domain: &Domain,
    x: &Point,
    m: Radius,
    center: &Point,
    mode: Mode,
    rays: usize,
    tol: f64,
) -> Result<CheckReport> {
    let ball = JBall::new(domain, x, m)?;
    center.check_dim(2)?;
    check_starlikeness(
        &ball,
        center.to_vec2(),
        &StarlikenessOptions {
            mode,
            rays,
            tol,
            ..StarlikenessOptions::default()
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_interior_max() {
        let (t, v) = golden_max(|t| -(t - 0.3) * (t - 0.3), 0.0, 1.0, 80);
        assert!((t - 0.3).abs() < 1e-7 && v.abs() < 1e-12);
    }

    #[test]
    fn small_punctured_ball_is_convex_and_starlike() {
        let g = Domain::punctured_plane();
        let x = Point::xy(1.0, 0.0);
        let m = Radius::new(0.4).unwrap();
        let r = convexity_check(&g, &x, m, Mode::Strict, 2000, 1e-9, 7).unwrap();
        assert!(r.passed, "{r:?}");
        let r = starlikeness_check(&g, &x, m, &x, Mode::Strict, 256, 1e-10).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn large_punctured_ball_fails_with_verified_witness() {
        let g = Domain::punctured_plane();
        let x = Point::xy(1.0, 0.0);
        let m = Radius::new(1.2).unwrap();
        let r = convexity_check(&g, &x, m, Mode::Nonstrict, 2000, 1e-9, 7).unwrap();
        assert!(!r.passed);
        let ball = JBall::new(&g, &x, m).unwrap();
        assert!(r.witness.unwrap().verify(&ball, Mode::Nonstrict, 1e-9));
    }

    #[test]
    fn centre_outside_ball_is_an_error() {
        let g = Domain::punctured_plane();
        let x = Point::xy(1.0, 0.0);
        let m = Radius::new(0.4).unwrap();
        assert!(starlikeness_check(&g, &x, m, &Point::xy(3.0, 0.0), Mode::Strict, 16, 1e-10).is_err());
    }
}
