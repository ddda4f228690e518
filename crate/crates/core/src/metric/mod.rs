//! The distance-ratio metric
//!
//! ```text
//! j(x, y) = log(1 + |x - y| / min(d(x), d(y)))
//! ```
//!
//! its open balls, the Euclidean annulus that sandwiches every ball, and the
//! exhaustion radius of bounded domains. The quasihyperbolic comparison lives
//! in [`qh`].

pub mod qh;

use serde::{Deserialize, Serialize};

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::point::{Point, Vec2};

/// Radius of a metric ball; positive and finite.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Radius(f64);

impl Radius {
    pub fn new(m: f64) -> Result<Self> {
        if m > 0.0 && m.is_finite() {
            Ok(Self(m))
        } else {
            Err(Error::InvalidArgument(format!(
                "ball radius must be positive and finite, got {m}"
            )))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Radius {
    type Error = Error;

    fn try_from(m: f64) -> Result<Self> {
        Radius::new(m)
    }
}

impl From<Radius> for f64 {
    fn from(r: Radius) -> f64 {
        r.0
    }
}

/// `log(1 + dist / min(dx, dy))` from precomputed boundary distances.
#[inline]
pub fn j_from_parts(dist: f64, dx: f64, dy: f64) -> f64 {
    (1.0 + dist / dx.min(dy)).ln()
}

pub fn j_distance(domain: &Domain, x: &Point, y: &Point) -> Result<f64> {
    let dx = domain.boundary_distance(x)?;
    let dy = domain.boundary_distance(y)?;
    Ok(j_from_parts(x.dist(y), dx, dy))
}

/// Strict membership `y in G and j(x, y) < M`.
pub fn in_j_ball(domain: &Domain, x: &Point, m: Radius, y: &Point) -> Result<bool> {
    let dx = domain.boundary_distance(x)?;
    Ok(match domain.depth(y)? {
        Some(dy) => j_from_parts(x.dist(y), dx, dy) < m.get(),
        None => false,
    })
}

/// A planar j-ball with its centre depth cached, for raster and ray work.
#[derive(Clone, Copy, Debug)]
pub struct JBall<'a> {
    domain: &'a Domain,
    center: Vec2,
    center_depth: f64,
    radius: f64,
}

impl<'a> JBall<'a> {
    pub fn new(domain: &'a Domain, x: &Point, m: Radius) -> Result<Self> {
        if !domain.is_planar() {
            return Err(Error::NotPlanar);
        }
        let center_depth = domain.boundary_distance(x)?;
        Ok(Self {
            domain,
            center: x.to_vec2(),
            center_depth,
            radius: m.get(),
        })
    }

    pub fn domain(&self) -> &'a Domain {
        self.domain
    }

    pub fn center(&self) -> Vec2 {
        self.center
    }

    pub fn center_depth(&self) -> f64 {
        self.center_depth
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// `j(x, p)`, or infinity when `p` is outside the domain.
    #[inline]
    pub fn j(&self, p: Vec2) -> f64 {
        match self.domain.depth2(p) {
            Some(dp) => j_from_parts(self.center.dist(p), self.center_depth, dp),
            None => f64::INFINITY,
        }
    }

    #[inline]
    pub fn contains(&self, p: Vec2) -> bool {
        self.j(p) < self.radius
    }

    pub fn bounds(&self) -> AnnulusBounds {
        annulus_bounds(self.center_depth, Radius(self.radius))
            .expect("centre depth is positive")
    }
}

/// Euclidean bounds of `B_j(x, M)`: the ball contains `B(x, inner)`, lies in
/// `B(x, outer)`, and its points have depth in `[depth_min, depth_max]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AnnulusBounds {
    pub inner_radius: f64,
    pub outer_radius: f64,
    pub depth_min: f64,
    pub depth_max: f64,
}

pub fn annulus_bounds(dx: f64, m: Radius) -> Result<AnnulusBounds> {
    if !(dx > 0.0) || !dx.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "boundary distance must be positive, got {dx}"
        )));
    }
    let m = m.get();
    Ok(AnnulusBounds {
        inner_radius: -(-m).exp_m1() * dx,
        outer_radius: m.exp_m1() * dx,
        depth_min: (-m).exp() * dx,
        depth_max: m.exp() * dx,
    })
}

/// Radius `log(1 + D/s)`, `D = sup |x - z|` over the boundary, such that every
/// `y` with `d(y) > s` lies in `B_j(x, M)`.
pub fn exhaustion_radius(domain: &Domain, x: &Point, s: f64) -> Result<Radius> {
    if !domain.is_bounded() {
        return Err(Error::Unbounded);
    }
    let dx = domain.boundary_distance(x)?;
    if !(s > 0.0 && s <= dx) {
        return Err(Error::InvalidArgument(format!(
            "depth threshold must lie in (0, {dx}], got {s}"
        )));
    }
    let far = domain.farthest_boundary_distance(x)?;
    Radius::new((1.0 + far / s).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Disk;

    fn p(x: f64, y: f64) -> Point {
        Point::xy(x, y)
    }

    fn three_disks(h: f64) -> Domain {
        Domain::ball_union(vec![
            Disk { center: Vec2::new(0.0, 0.0), radius: 1.0 },
            Disk { center: Vec2::new(1.0, 0.0), radius: h },
            Disk { center: Vec2::new(2.0, 0.0), radius: 1.0 },
        ])
        .unwrap()
    }

    #[test]
    fn punctured_plane_values() {
        let g = Domain::punctured_plane();
        let j = j_distance(&g, &p(1.0, 0.0), &p(3.0, 0.0)).unwrap();
        assert!((j - 3f64.ln()).abs() < 1e-15);
        assert_eq!(j_distance(&g, &p(1.0, 0.0), &p(1.0, 0.0)).unwrap(), 0.0);
        assert!(j_distance(&g, &p(0.0, 0.0), &p(1.0, 0.0)).is_err());
    }

    #[test]
    fn union_of_disks_values() {
        let g = three_disks(0.25);
        let j1 = j_distance(&g, &p(0.0, 0.0), &p(1.0, 0.0)).unwrap();
        assert!((j1 - 5f64.ln()).abs() < 1e-12);
        let j2 = j_distance(&g, &p(0.0, 0.0), &p(2.0, 0.0)).unwrap();
        assert!((j2 - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn ball_membership_is_strict() {
        let g = Domain::punctured_plane();
        let m = Radius::new(2f64.ln()).unwrap();
        assert!(in_j_ball(&g, &p(1.0, 0.0), m, &p(1.5, 0.0)).unwrap());
        assert!(!in_j_ball(&g, &p(1.0, 0.0), m, &p(2.0, 0.0)).unwrap());
        assert!(!in_j_ball(&g, &p(1.0, 0.0), m, &p(0.0, 0.0)).unwrap());

        let u = three_disks(0.25);
        let x = p(0.0, 0.0);
        let y = p(2.0, 0.0);
        assert!(!in_j_ball(&u, &x, Radius::new(3f64.ln()).unwrap(), &y).unwrap());
        assert!(in_j_ball(&u, &x, Radius::new(3f64.ln() + 0.01).unwrap(), &y).unwrap());
    }

    #[test]
    fn annulus_values() {
        let b = annulus_bounds(1.0, Radius::new(2f64.ln()).unwrap()).unwrap();
        assert!((b.inner_radius - 0.5).abs() < 1e-15);
        assert!((b.outer_radius - 1.0).abs() < 1e-15);
        assert!((b.depth_min - 0.5).abs() < 1e-15);
        assert!((b.depth_max - 2.0).abs() < 1e-15);
        let b = annulus_bounds(2.0, Radius::new(2f64.ln()).unwrap()).unwrap();
        assert!((b.inner_radius - 1.0).abs() < 1e-15);
        assert!((b.outer_radius - 2.0).abs() < 1e-15);
        let b = annulus_bounds(1.0, Radius::new(1.0).unwrap()).unwrap();
        assert!((b.inner_radius - (1.0 - (-1f64).exp())).abs() < 1e-15);
        assert!((b.outer_radius - (1f64.exp() - 1.0)).abs() < 1e-15);
        assert!(annulus_bounds(0.0, Radius::new(1.0).unwrap()).is_err());
    }

    #[test]
    fn radius_validation() {
        assert!(Radius::new(0.0).is_err());
        assert!(Radius::new(-1.0).is_err());
        assert!(Radius::new(f64::INFINITY).is_err());
    }

    #[test]
    fn exhaustion_examples() {
        let square = Domain::convex_polygon(vec![
            Vec2::new(-0.5, -0.5),
            Vec2::new(0.5, -0.5),
            Vec2::new(0.5, 0.5),
            Vec2::new(-0.5, 0.5),
        ])
        .unwrap();
        let m = exhaustion_radius(&square, &p(0.0, 0.0), 0.5).unwrap();
        assert!((m.get() - (1.0 + 2f64.sqrt()).ln()).abs() < 1e-12);

        let disk = Domain::ball_union(vec![Disk { center: Vec2::ZERO, radius: 1.0 }]).unwrap();
        let m = exhaustion_radius(&disk, &p(0.0, 0.0), 0.5).unwrap();
        assert!((m.get() - 3f64.ln()).abs() < 1e-15);
        let m = exhaustion_radius(&disk, &p(0.0, 0.0), 1.0).unwrap();
        assert!((m.get() - 2f64.ln()).abs() < 1e-15);
        // Every sampled point deeper than s is inside the ball.
        let m = exhaustion_radius(&disk, &p(0.0, 0.0), 0.5).unwrap();
        for k in 0..2000 {
            let r = 0.5 * k as f64 / 2000.0;
            let q = Point::from(Vec2::polar(r, 0.37 * k as f64));
            assert!(in_j_ball(&disk, &p(0.0, 0.0), m, &q).unwrap());
        }

        assert_eq!(
            exhaustion_radius(&Domain::punctured_plane(), &p(1.0, 0.0), 0.5),
            Err(Error::Unbounded)
        );
        assert!(exhaustion_radius(&disk, &p(0.0, 0.0), 1.5).is_err());
    }
}
