//! Named example configurations with their expected outcomes.
//!
//! A [`Scenario`] fixes a domain, a centre and a radius, and lists
//! predicates together with the value each should produce. [`Scenario::run`]
//! evaluates them and returns a JSON-serialisable report.

use std::cell::RefCell;
use std::rc::Rc;
use std::collections::HashMap;
use std::f64::consts::{E, LN_2, SQRT_2};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::ballgeom::{
    convexity_check, extract_region, sphere_components_grid, starlikeness_check, topology_check,
    Mode, RegionGrid, SphereAnalysis,
};
use crate::domain::{Disk, Domain};
use crate::error::{Error, Result};
use crate::metric::qh::{qh_distance, qh_punctured_closed_form};
use crate::metric::{in_j_ball, j_distance, JBall, Radius};
use crate::point::{Point, Vec2};

/// Report format version.
pub const SCHEMA: u32 = 1;

/// Something measurable about a scenario.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Predicate {
    /// `j(x, y)`.
    JDistance { y: Point },
    /// `y` in `B_j(x, M)`.
    InBall { y: Point },
    /// `|a - b|`.
    EuclideanDistance { a: Point, b: Point },
    /// Region components on a grid with `resolution` cells across the bound.
    Components { resolution: usize },
    SimplyConnected { resolution: usize },
    /// Every ball cell lies in the open disk.
    BallWithinDisk { center: Point, radius: f64, resolution: usize },
    SphereComponents { resolution: usize, band: f64 },
    /// Distance, in cells, from `point` to the nearest isolated sphere point.
    IsolatedPointNear { point: Point, resolution: usize, band: f64 },
    ClosureEqualsClosedBall { resolution: usize, band: f64 },
    /// No point of the domain on the line `{first coordinate = x1}` is in the
    /// ball; checked on `samples` points of the line inside the domain.
    LineOutsideBall { x1: f64, samples: usize },
    Convexity { mode: Mode, trials: usize, tol: f64, seed: u64 },
    Starlikeness { center: Point, mode: Mode, rays: usize, tol: f64 },
    /// Lattice quasihyperbolic distance `k(x, y)` with spacing `h`.
    QhDistance { y: Point, h: f64 },
    /// Closed-form quasihyperbolic distance in the plane punctured at `puncture`.
    QhClosedForm { puncture: Point, a: Point, b: Point },
    /// For two punctures `p, q` mirror images in a line through `x`, the
    /// single-puncture `j` values agree at mirrored points. Reports the
    /// largest discrepancy.
    MirrorSymmetry { samples: usize, seed: u64 },
    /// Membership in the ball equals membership in every single-puncture
    /// ball. Reports the number of mismatches.
    IntersectionIdentity { samples: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Expected {
    Bool { value: bool },
    Count { value: usize },
    AtLeast { value: usize },
    Approx { value: f64, tol: f64 },
    Below { value: f64 },
    Above { value: f64 },
    /// Recorded without a pass/fail judgement.
    Report,
}

impl Expected {
    fn judge(&self, actual: &Value) -> bool {
        let num = actual.as_f64();
        match *self {
            Expected::Bool { value } => actual.as_bool() == Some(value),
            Expected::Count { value } => actual.as_u64() == Some(value as u64),
            Expected::AtLeast { value } => actual.as_u64().is_some_and(|a| a >= value as u64),
            Expected::Approx { value, tol } => num.is_some_and(|a| (a - value).abs() <= tol),
            Expected::Below { value } => num.is_some_and(|a| a < value),
            Expected::Above { value } => num.is_some_and(|a| a > value),
            Expected::Report => !actual.get("error").is_some(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Expectation {
    pub predicate: Predicate,
    pub expected: Expected,
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    /// What the scenario demonstrates.
    pub claim: String,
    pub domain: Domain,
    pub x: Point,
    pub m: Radius,
    pub expectations: Vec<Expectation>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpectationResult {
    pub predicate: Predicate,
    pub expected: Expected,
    pub actual: Value,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScenarioReport {
    pub schema: u32,
    pub name: String,
    pub claim: String,
    pub passed: bool,
    pub expectations: Vec<ExpectationResult>,
}

fn expect(predicate: Predicate, expected: Expected) -> Expectation {
    Expectation { predicate, expected }
}

fn approx(value: f64, tol: f64) -> Expected {
    Expected::Approx { value, tol }
}

fn radius(m: f64) -> Result<Radius> {
    Radius::new(m)
}

fn e1(t: f64) -> Point {
    Point::xy(t, 0.0)
}

struct Runner<'a> {
    scenario: &'a Scenario,
    grids: RefCell<HashMap<usize, Rc<RegionGrid>>>,
    spheres: RefCell<HashMap<(usize, u64), Rc<SphereAnalysis>>>,
}

impl<'a> Runner<'a> {
    fn grid(&self, resolution: usize) -> Result<Rc<RegionGrid>> {
        if let Some(g) = self.grids.borrow().get(&resolution) {
            return Ok(g.clone());
        }
        let s = self.scenario;
        let ball = JBall::new(&s.domain, &s.x, s.m)?;
        let h = 2.0 * ball.bounds().outer_radius / resolution as f64;
        let g = Rc::new(extract_region(&s.domain, &s.x, s.m, Some(h))?);
        self.grids.borrow_mut().insert(resolution, g.clone());
        Ok(g)
    }

    fn sphere(&self, resolution: usize, band: f64) -> Result<Rc<SphereAnalysis>> {
        let key = (resolution, band.to_bits());
        if let Some(a) = self.spheres.borrow().get(&key) {
            return Ok(a.clone());
        }
        let a = Rc::new(sphere_components_grid(&*self.grid(resolution)?, band));
        self.spheres.borrow_mut().insert(key, a.clone());
        Ok(a)
    }

    fn eval(&self, p: &Predicate) -> Result<Value> {
        let s = self.scenario;
        let (g, x, m) = (&s.domain, &s.x, s.m);
        Ok(match p {
            Predicate::JDistance { y } => json!(j_distance(g, x, y)?),
            Predicate::InBall { y } => json!(in_j_ball(g, x, m, y)?),
            Predicate::EuclideanDistance { a, b } => json!(a.dist(b)),
            Predicate::Components { resolution } => {
                json!(topology_check(&*self.grid(*resolution)?)?.components)
            }
            Predicate::SimplyConnected { resolution } => {
                json!(topology_check(&*self.grid(*resolution)?)?.simply_connected)
            }
            Predicate::BallWithinDisk { center, radius, resolution } => {
                let grid = self.grid(*resolution)?;
                let c = center.to_vec2();
                let n = grid.size();
                let inside = (0..n).all(|j| {
                    (0..n).all(|i| !grid.cell(i, j) || grid.cell_center(i, j).dist(c) < *radius)
                });
                json!(inside)
            }
            Predicate::SphereComponents { resolution, band } => {
                json!(self.sphere(*resolution, *band)?.components)
            }
            Predicate::IsolatedPointNear { point, resolution, band } => {
                let a = self.sphere(*resolution, *band)?;
                let p = point.to_vec2();
                let d = a
                    .isolated_points
                    .iter()
                    .map(|q| q.dist(p))
                    .fold(f64::INFINITY, f64::min);
                if d.is_finite() {
                    json!(d / a.spacing)
                } else {
                    json!({ "error": "no isolated point" })
                }
            }
            Predicate::ClosureEqualsClosedBall { resolution, band } => {
                json!(self.sphere(*resolution, *band)?.closure_equals_closed_ball)
            }
            Predicate::LineOutsideBall { x1, samples } => {
                let ball = JBall::new(g, x, m)?;
                let reach = ball.bounds().outer_radius;
                let mut checked = 0usize;
                let mut outside = true;
                for k in 0..=*samples {
                    let t = -reach + 2.0 * reach * k as f64 / *samples as f64;
                    let p = Vec2::new(*x1, t);
                    if g.contains2(p) {
                        checked += 1;
                        outside &= !ball.contains(p);
                    }
                }
                if checked == 0 {
                    json!({ "error": "line misses the domain" })
                } else {
                    json!(outside)
                }
            }
            Predicate::Convexity { mode, trials, tol, seed } => {
                json!(convexity_check(g, x, m, *mode, *trials, *tol, *seed)?.passed)
            }
            Predicate::Starlikeness { center, mode, rays, tol } => {
                json!(starlikeness_check(g, x, m, center, *mode, *rays, *tol)?.passed)
            }
            Predicate::QhDistance { y, h } => json!(qh_distance(g, x, y, *h)?),
            Predicate::QhClosedForm { puncture, a, b } => {
                json!(qh_punctured_closed_form(puncture, a, b)?)
            }
            Predicate::MirrorSymmetry { samples, seed } => json!(mirror_discrepancy(s, *samples, *seed)?),
            Predicate::IntersectionIdentity { samples, seed } => {
                json!(intersection_mismatches(g, x, m, *samples, *seed)?.mismatches)
            }
        })
    }
}

impl Scenario {
    pub fn run(&self) -> ScenarioReport {
        let runner = Runner {
            scenario: self,
            grids: RefCell::new(HashMap::new()),
            spheres: RefCell::new(HashMap::new()),
        };
        let expectations: Vec<ExpectationResult> = self
            .expectations
            .iter()
            .map(|e| {
                let actual = runner
                    .eval(&e.predicate)
                    .unwrap_or_else(|err| json!({ "error": err.to_string() }));
                ExpectationResult {
                    pass: e.expected.judge(&actual),
                    predicate: e.predicate.clone(),
                    expected: e.expected.clone(),
                    actual,
                }
            })
            .collect();
        ScenarioReport {
            schema: SCHEMA,
            name: self.name.clone(),
            claim: self.claim.clone(),
            passed: expectations.iter().all(|e| e.pass),
            expectations,
        }
    }
}

fn reflect(p: Vec2, on: Vec2, dir: Vec2) -> Vec2 {
    let v = p - on;
    on + dir * (2.0 * v.dot(dir)) - v
}

fn mirror_discrepancy(s: &Scenario, samples: usize, seed: u64) -> Result<f64> {
    let Domain::Punctured(space) = &s.domain else {
        return Err(Error::InvalidDomain("mirror check needs punctures".into()));
    };
    let [p, q] = space.punctures() else {
        return Err(Error::InvalidDomain("mirror check needs two punctures".into()));
    };
    let (p, q, x) = (p.to_vec2(), q.to_vec2(), s.x.to_vec2());
    // The mirror line passes through x and the midpoint of p and q.
    let dir = ((p + q) * 0.5 - x).normalized();
    let gp = Domain::punctured(vec![Point::from(p)])?;
    let gq = Domain::punctured(vec![Point::from(q)])?;
    let reach = JBall::new(&s.domain, &s.x, s.m)?.bounds().outer_radius;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = (reflect(p, x, dir).dist(q)).max(0.0);
    for _ in 0..samples {
        let y = x + Vec2::new(rng.gen_range(-reach..reach), rng.gen_range(-reach..reach));
        if y == p {
            continue;
        }
        let a = j_distance(&gp, &s.x, &Point::from(y))?;
        let b = j_distance(&gq, &s.x, &Point::from(reflect(y, x, dir)))?;
        worst = worst.max((a - b).abs());
    }
    Ok(worst)
}

/// Outcome of comparing a ball with the intersection of single-puncture balls.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntersectionReport {
    pub passed: bool,
    pub mismatches: usize,
    pub first_mismatch: Option<Point>,
    pub samples_used: usize,
}

fn intersection_mismatches(domain: &Domain, x: &Point, m: Radius, samples: usize, seed: u64) -> Result<IntersectionReport> {
    let Domain::Punctured(space) = domain else {
        return Err(Error::InvalidDomain("intersection identity needs a punctured space".into()));
    };
    let singles: Vec<Domain> = space
        .punctures()
        .iter()
        .map(|p| Domain::punctured(vec![p.clone()]))
        .collect::<Result<_>>()?;
    let dx = domain.boundary_distance(x)?;
    let reach = 1.25 * m.get().exp_m1() * dx;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = IntersectionReport {
        passed: true,
        mismatches: 0,
        first_mismatch: None,
        samples_used: 0,
    };
    for _ in 0..samples {
        let y = Point::new(x.coords().iter().map(|c| c + rng.gen_range(-reach..reach)).collect())?;
        if domain.depth(&y)?.is_none() {
            continue;
        }
        report.samples_used += 1;
        let whole = in_j_ball(domain, x, m, &y)?;
        let mut each = true;
        for g in &singles {
            each &= in_j_ball(g, x, m, &y)?;
        }
        if whole != each {
            report.mismatches += 1;
            report.first_mismatch.get_or_insert(y);
        }
    }
    report.passed = report.mismatches == 0;
    Ok(report)
}

/// Checks that `B_j(x, M)` in a punctured space equals the intersection of
/// the balls of the singly punctured spaces, on `samples` random points.
pub fn finite_puncture_intersection(
    punctures: Vec<Point>,
    x: &Point,
    m: Radius,
    samples: usize,
    seed: u64,
) -> Result<IntersectionReport> {
    let domain = Domain::punctured(punctures)?;
    intersection_mismatches(&domain, x, m, samples, seed)
}

/// `log(1 + sqrt 2)`.
pub fn sharpness_threshold() -> f64 {
    (1.0 + SQRT_2).ln()
}

/// Geometry of the two-puncture construction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TwoPunctureGeometry {
    /// Centre of the removed disk of the `0` puncture (on the real axis).
    pub c: f64,
    pub r1: f64,
    pub r2: f64,
    /// Tangency point of the line through `e_1`.
    pub y: Vec2,
    /// Second puncture, the mirror image of 0.
    pub z: Vec2,
    /// Unit direction of the tangent line.
    pub direction: Vec2,
}

pub fn two_puncture_geometry(m: Radius) -> Result<TwoPunctureGeometry> {
    let e = m.get().exp();
    let q = e * (e - 2.0);
    // q = 1 exactly at the threshold; allow rounding in log(1 + sqrt 2).
    if !(q >= 1.0 - 1e-12) {
        return Err(Error::InvalidArgument(format!(
            "radius must be at least log(1 + sqrt 2), got {}",
            m.get()
        )));
    }
    let c = 1.0 / (e * (2.0 - e));
    let r1 = e - 1.0;
    let r2 = (e - 1.0) / q;
    let p = Vec2::new(1.0, 0.0);
    let to_c = Vec2::new(c, 0.0) - p;
    let dist = to_c.norm();
    let alpha = (r2 / dist).min(1.0).asin();
    let direction = to_c.normalized().rotate(-alpha);
    let y = p + direction * (dist * dist - r2 * r2).max(0.0).sqrt();
    let z = reflect(Vec2::new(0.0, 0.0), p, direction);
    Ok(TwoPunctureGeometry { c, r1, r2, y, z, direction })
}

/// `R^2 \ {0, z}` with `z` chosen so that `B_j(e_1, M)` splits in two for
/// every `M > log(1 + sqrt 2)`.
pub fn two_puncture_sharpness(m: Radius) -> Result<Scenario> {
    let geo = two_puncture_geometry(m)?;
    let e = m.get().exp();
    let domain = Domain::punctured(vec![Point::xy(0.0, 0.0), Point::from(geo.z)])?;
    let pieces = if m.get() > sharpness_threshold() + 1e-9 { 2 } else { 1 };
    let mut expectations = Vec::new();
    for resolution in [1024, 2048] {
        expectations.push(expect(Predicate::Components { resolution }, Expected::Count { value: pieces }));
    }
    let tangent = (e - 1.0) / (e * (e - 2.0)).sqrt();
    let yd = Predicate::EuclideanDistance { a: Point::from(geo.y), b: e1(1.0) };
    expectations.push(expect(yd.clone(), approx(tangent, 1e-12)));
    if pieces == 2 {
        expectations.push(expect(yd, Expected::Below { value: geo.r1 }));
    }
    expectations.push(expect(
        Predicate::MirrorSymmetry { samples: 1000, seed: 1 },
        Expected::Below { value: 1e-12 },
    ));
    Ok(Scenario {
        name: "two_puncture_sharpness".into(),
        claim: "with a second puncture mirrored in the tangent line, the j-disk about e_1 is disconnected above log(1 + sqrt 2)".into(),
        domain,
        x: e1(1.0),
        m,
        expectations,
    })
}

fn three_disks(h: f64) -> Result<Domain> {
    let disk = |x: f64, r: f64| Disk { center: Vec2::new(x, 0.0), radius: r };
    Domain::ball_union(vec![disk(0.0, 1.0), disk(1.0, h), disk(2.0, 1.0)])
}

/// Default band width, in cells, for sphere analysis.
pub const SPHERE_BAND: f64 = 1.0;

/// Three disks joined by a thin neck: the j-ball of radius log 3 about 0 is
/// connected while its sphere has an extra isolated point at `2 e_1`.
pub fn sphere_vs_closure() -> Result<Scenario> {
    let m = radius(3f64.ln())?;
    let mut expectations = vec![
        expect(Predicate::JDistance { y: e1(1.0) }, approx(5f64.ln(), 1e-12)),
        expect(Predicate::JDistance { y: e1(2.0) }, approx(3f64.ln(), 1e-12)),
    ];
    for resolution in [1024, 2048] {
        let band = SPHERE_BAND;
        expectations.extend([
            expect(Predicate::Components { resolution }, Expected::Count { value: 1 }),
            expect(
                Predicate::BallWithinDisk { center: e1(0.0), radius: 1.0, resolution },
                Expected::Bool { value: true },
            ),
            expect(Predicate::SphereComponents { resolution, band }, Expected::Count { value: 2 }),
            expect(
                Predicate::IsolatedPointNear { point: e1(2.0), resolution, band },
                Expected::Below { value: 2.0 },
            ),
            expect(
                Predicate::ClosureEqualsClosedBall { resolution, band },
                Expected::Bool { value: false },
            ),
        ]);
    }
    Ok(Scenario {
        name: "sphere_vs_closure".into(),
        claim: "the j-ball is connected but the j-sphere is not, and the closure of the open ball differs from the closed ball".into(),
        domain: three_disks(0.25)?,
        x: e1(0.0),
        m,
        expectations,
    })
}

/// A simply connected domain whose j-ball of radius log 4 about 0 is
/// disconnected when the neck radius `h` is below 1/3.
pub fn simply_connected_counterexample(h: f64) -> Result<Scenario> {
    if !(h > 0.0 && h < 1.0) {
        return Err(Error::InvalidArgument(format!("neck radius must lie in (0, 1), got {h}")));
    }
    let m = radius(4f64.ln())?;
    let mut expectations = vec![
        expect(Predicate::JDistance { y: e1(2.0) }, approx(3f64.ln(), 1e-12)),
        expect(Predicate::InBall { y: e1(2.0) }, Expected::Bool { value: true }),
        expect(Predicate::JDistance { y: e1(1.0) }, approx((1.0 + 1.0 / h).ln(), 1e-12)),
    ];
    if h < 1.0 / 3.0 {
        expectations.push(expect(
            Predicate::LineOutsideBall { x1: 1.0, samples: 4001 },
            Expected::Bool { value: true },
        ));
    }
    for resolution in [1024, 2048] {
        let components = if h < 1.0 / 3.0 {
            Expected::AtLeast { value: 2 }
        } else if h >= 0.5 {
            Expected::Count { value: 1 }
        } else {
            Expected::Report
        };
        expectations.push(expect(Predicate::Components { resolution }, components));
        expectations.push(expect(Predicate::SimplyConnected { resolution }, Expected::Report));
    }
    Ok(Scenario {
        name: "simply_connected_counterexample".into(),
        claim: "j-balls of a simply connected domain need not be connected".into(),
        domain: three_disks(h)?,
        x: e1(0.0),
        m,
        expectations,
    })
}

/// Points of the quasihyperbolic demo in `R^2 \ {0, e_1}` with `x = e_1/4`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QhDemoPoints {
    /// `(1 - 1/e) e_1`, on the sphere of radius 1 about `x`.
    pub y: f64,
    /// `(1 - 3/(4e)) e_1`, on the sphere of the `e_1`-punctured plane.
    pub z: f64,
    /// `e/4`, where the `0`-punctured ball ends on the axis.
    pub zero_ball_end: f64,
    /// Midpoint of `y` and `zero_ball_end`: in both single-puncture balls,
    /// not in the ball of the doubly punctured plane.
    pub witness: f64,
}

pub fn qh_demo_points() -> QhDemoPoints {
    let y = 1.0 - 1.0 / E;
    let zero_ball_end = E / 4.0;
    QhDemoPoints {
        y,
        z: 1.0 - 3.0 / (4.0 * E),
        zero_ball_end,
        witness: 0.5 * (y + zero_ball_end),
    }
}

/// Quasihyperbolic balls of `R^2 \ {0, e_1}` are not the intersection of the
/// single-puncture balls. `h_grid` is the lattice spacing for `k_G`.
pub fn qh_nonintersection_demo(h_grid: f64) -> Result<Scenario> {
    let pts = qh_demo_points();
    let x = e1(0.25);
    let (p0, p1) = (e1(0.0), e1(1.0));
    let (y, z, w) = (e1(pts.y), e1(pts.z), e1(pts.witness));
    let expectations = vec![
        expect(Predicate::QhDistance { y: y.clone(), h: h_grid }, approx(1.0, 0.01)),
        expect(
            Predicate::QhClosedForm { puncture: p0.clone(), a: x.clone(), b: e1(0.5) },
            approx(LN_2, 1e-12),
        ),
        expect(
            Predicate::QhClosedForm { puncture: p1.clone(), a: e1(0.5), b: y.clone() },
            approx(1.0 - LN_2, 1e-12),
        ),
        expect(Predicate::EuclideanDistance { a: y.clone(), b: p0.clone() }, approx(0.632, 5e-4)),
        expect(Predicate::EuclideanDistance { a: z.clone(), b: p0.clone() }, approx(0.724, 5e-4)),
        expect(
            Predicate::QhClosedForm { puncture: p1.clone(), a: x.clone(), b: z.clone() },
            approx(1.0, 1e-12),
        ),
        expect(
            Predicate::QhClosedForm { puncture: p0.clone(), a: x.clone(), b: z },
            Expected::Report,
        ),
        expect(
            Predicate::QhClosedForm { puncture: p0, a: x.clone(), b: w.clone() },
            Expected::Below { value: 1.0 },
        ),
        expect(
            Predicate::QhClosedForm { puncture: p1, a: x.clone(), b: w.clone() },
            Expected::Below { value: 1.0 },
        ),
        expect(Predicate::QhDistance { y: w, h: h_grid }, Expected::Above { value: 1.0 }),
    ];
    Ok(Scenario {
        name: "qh_nonintersection_demo".into(),
        claim: "the quasihyperbolic ball of R^2 minus {0, e_1} is smaller than the intersection of the single-puncture balls".into(),
        domain: Domain::punctured(vec![e1(0.0), e1(1.0)])?,
        x,
        m: radius(1.0)?,
        expectations,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum End {
    Inner,
    Outer,
}

/// `log((3 + sqrt 5) / 2)`, the candidate bound for starlikeness about points
/// near the far end of the disk.
pub fn offcenter_bound() -> f64 {
    ((3.0 + 5f64.sqrt()) / 2.0).ln()
}

/// Starlikeness of `B_j(e_1, M)` in the punctured plane about a point near
/// one end of its axis. Near the inner end the ball is not starlike; near
/// the outer end the verdict is recorded only.
pub fn offcenter_starlikeness(m: Radius, eps: f64, end: End) -> Result<Scenario> {
    if !(m.get() > LN_2) {
        return Err(Error::InvalidArgument("radius must exceed log 2".into()));
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    let e = m.get().exp();
    let (center, expected, mode) = match end {
        End::Inner => (e1(1.0 / e + eps), Expected::Bool { value: false }, Mode::Nonstrict),
        End::Outer => (e1(e - eps), Expected::Report, Mode::Strict),
    };
    Ok(Scenario {
        name: "offcenter_starlikeness".into(),
        claim: "j-disks above log 2 are not starlike about points near the puncture side".into(),
        domain: Domain::punctured_plane(),
        x: e1(1.0),
        m,
        expectations: vec![expect(
            Predicate::Starlikeness { center, mode, rays: 4096, tol: 1e-10 },
            expected,
        )],
    })
}

/// Scenario form of [`finite_puncture_intersection`].
pub fn finite_puncture_scenario(punctures: Vec<Point>, x: Point, m: Radius, samples: usize, seed: u64) -> Result<Scenario> {
    Ok(Scenario {
        name: "finite_puncture_intersection".into(),
        claim: "a j-ball of a finitely punctured space is the intersection of the single-puncture balls".into(),
        domain: Domain::punctured(punctures)?,
        x,
        m,
        expectations: vec![expect(
            Predicate::IntersectionIdentity { samples, seed },
            Expected::Count { value: 0 },
        )],
    })
}

/// Scenario names accepted by [`by_name`].
pub const NAMES: [&str; 6] = [
    "two_puncture_sharpness",
    "sphere_vs_closure",
    "simply_connected_counterexample",
    "qh_nonintersection_demo",
    "offcenter_starlikeness",
    "finite_puncture_intersection",
];

/// A scenario with default parameters.
pub fn by_name(name: &str) -> Result<Scenario> {
    match name {
        "two_puncture_sharpness" => two_puncture_sharpness(radius(sharpness_threshold() + 0.1)?),
        "sphere_vs_closure" => sphere_vs_closure(),
        "simply_connected_counterexample" => simply_connected_counterexample(0.25),
        "qh_nonintersection_demo" => qh_nonintersection_demo(0.005),
        "offcenter_starlikeness" => offcenter_starlikeness(radius(0.8)?, 1e-3, End::Inner),
        "finite_puncture_intersection" => finite_puncture_scenario(
            vec![e1(0.0), e1(3.0)],
            e1(1.0),
            radius(0.6)?,
            10_000,
            1,
        ),
        _ => Err(Error::InvalidArgument(format!(
            "unknown scenario {name:?}; expected one of {}",
            NAMES.join(", ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tangency_length_at_one() {
        let g = two_puncture_geometry(radius(1.0).unwrap()).unwrap();
        let len = g.y.dist(Vec2::new(1.0, 0.0));
        // (e - 1) / sqrt(e (e - 2)) evaluated independently.
        assert!((len - 1.229_701_538_993_485).abs() < 1e-12, "{len}");
        assert!(len < E - 1.0);
    }

    #[test]
    fn tangency_point_is_on_the_circle_and_line_is_tangent() {
        let m = radius(sharpness_threshold() + 0.1).unwrap();
        let g = two_puncture_geometry(m).unwrap();
        let c = Vec2::new(g.c, 0.0);
        assert!((g.y.dist(c) - g.r2).abs() < 1e-12);
        assert!((g.y - c).dot(g.direction).abs() < 1e-12);
        // 0 and z are equidistant from the line.
        let n = g.direction.perp();
        let p = Vec2::new(1.0, 0.0);
        assert!(((Vec2::new(0.0, 0.0) - p).dot(n) + (g.z - p).dot(n)).abs() < 1e-12);
    }

    #[test]
    fn threshold_is_accepted_and_below_is_rejected() {
        assert!(two_puncture_geometry(radius(sharpness_threshold()).unwrap()).is_ok());
        assert!(two_puncture_geometry(radius(sharpness_threshold() - 1e-6).unwrap()).is_err());
    }

    #[test]
    fn qh_demo_constants() {
        let p = qh_demo_points();
        assert!((p.y - 0.632_120_558_828_557_7).abs() < 1e-15);
        assert!((p.z - 0.724_090_419_121_418_3).abs() < 1e-15);
        assert!(p.y < p.witness && p.witness < p.zero_ball_end && p.zero_ball_end < p.z);
    }

    #[test]
    fn small_intersection_scenario_passes() {
        let s = finite_puncture_scenario(
            vec![e1(0.0), e1(3.0)],
            e1(1.0),
            radius(0.6).unwrap(),
            2000,
            3,
        )
        .unwrap();
        let r = s.run();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn unknown_name_is_an_error() {
        assert!(by_name("nope").is_err());
        for name in NAMES {
            assert!(by_name(name).is_ok(), "{name}");
        }
    }
}
