//! Exact geometry of j-disks in the punctured plane `R^2 \ {0}`.
//!
//! Every j-disk there is similar to `B_j(e_1, M)`, which is the outer disk
//! `|z - 1| < e^M - 1` cut by the Apollonius region `|z - 1| < (e^M - 1)|z|`.
//! The Apollonius boundary is a circle centred on the real axis at
//! `c = 1 / (e^M (2 - e^M))` with radius `s = (e^M - 1) / |e^M (2 - e^M)|`,
//! degenerating to the line `Re z = 1/2` at `M = log 2`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::Radius;
use crate::point::{Point, Similarity, Vec2};

/// `|e^M - 2|` below this routes to the half-plane branch.
pub const DEGENERACY_GUARD: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Circle {
    pub center: Vec2,
    pub radius: f64,
}

/// How the Apollonius region cuts the outer disk.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum InnerBoundary {
    /// `M < log 2`: intersect with the disk.
    Cap(Circle),
    /// `M = log 2`: keep `Re z > 1/2`.
    HalfPlaneCut,
    /// `M > log 2`: remove the closed disk.
    Hole(Circle),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DiskDecomposition {
    pub radius: f64,
    pub outer: Circle,
    pub inner: InnerBoundary,
}

impl DiskDecomposition {
    /// Signed real centre `c` of the inner circle, if there is one.
    pub fn inner_center(&self) -> Option<f64> {
        match self.inner {
            InnerBoundary::Cap(c) | InnerBoundary::Hole(c) => Some(c.center.x),
            InnerBoundary::HalfPlaneCut => None,
        }
    }

    pub fn inner_radius(&self) -> Option<f64> {
        match self.inner {
            InnerBoundary::Cap(c) | InnerBoundary::Hole(c) => Some(c.radius),
            InnerBoundary::HalfPlaneCut => None,
        }
    }

    /// Membership in `B_j(e_1, M)` through the circle description.
    pub fn contains(&self, z: Vec2) -> bool {
        if z.dist(self.outer.center) >= self.outer.radius {
            return false;
        }
        match self.inner {
            InnerBoundary::Cap(c) => z.dist(c.center) < c.radius,
            InnerBoundary::HalfPlaneCut => z.x > 0.5,
            InnerBoundary::Hole(c) => z.dist(c.center) > c.radius,
        }
    }

    /// Whether the hole lies inside the outer disk (closed containment,
    /// within `tol`). False for the other branches.
    pub fn hole_inside_outer(&self, tol: f64) -> bool {
        match self.inner {
            InnerBoundary::Hole(c) => {
                c.center.dist(self.outer.center) + c.radius <= self.outer.radius + tol
            }
            _ => false,
        }
    }
}

/// Circle decomposition of `B_j(e_1, M)` in `R^2 \ {0}`.
pub fn disk_decomposition(m: Radius) -> DiskDecomposition {
    let e = m.get().exp();
    let r = e - 1.0;
    let outer = Circle {
        center: Vec2::new(1.0, 0.0),
        radius: r,
    };
    let inner = if (e - 2.0).abs() < DEGENERACY_GUARD {
        InnerBoundary::HalfPlaneCut
    } else {
        let denom = e * (2.0 - e);
        let circle = Circle {
            center: Vec2::new(1.0 / denom, 0.0),
            radius: r / denom.abs(),
        };
        if e < 2.0 {
            InnerBoundary::Cap(circle)
        } else {
            InnerBoundary::Hole(circle)
        }
    };
    DiskDecomposition {
        radius: m.get(),
        outer,
        inner,
    }
}

/// Orientation-preserving similarity taking `puncture` to 0 and `x` to `e_1`.
/// Membership commutes: `y in B_j(x, M)` iff `T(y) in B_j(e_1, M)` in the
/// transported domain.
pub fn canonical_transport(puncture: &Point, x: &Point) -> Result<Similarity> {
    puncture.check_dim(2)?;
    x.check_dim(2)?;
    let v = x.to_vec2() - puncture.to_vec2();
    let len = v.norm();
    if len == 0.0 {
        return Err(Error::InvalidArgument(
            "centre coincides with the puncture".into(),
        ));
    }
    Ok(Similarity {
        anchor: puncture.to_vec2(),
        angle: -v.angle(),
        scale: 1.0 / len,
    })
}

/// Radius thresholds for balls in punctured space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Thresholds {
    /// j-balls are convex iff `M <= j_convex`.
    pub j_convex: f64,
    /// j-balls are strictly convex iff `M < j_strictly_convex_sup`.
    pub j_strictly_convex_sup: f64,
    /// j-balls are strictly starlike about the centre iff `M <= j_starlike`.
    pub j_starlike: f64,
    /// From this radius on the removed disk lies inside the outer disk.
    pub annulus_onset: f64,
    /// Quasihyperbolic balls are strictly convex iff `M <= qh_convex`.
    pub qh_convex: f64,
    /// Reference value for strict starlikeness of quasihyperbolic balls.
    pub qh_starlike: f64,
}

pub fn thresholds() -> Thresholds {
    Thresholds {
        j_convex: std::f64::consts::LN_2,
        j_strictly_convex_sup: std::f64::consts::LN_2,
        j_starlike: (1.0 + std::f64::consts::SQRT_2).ln(),
        annulus_onset: 3f64.ln(),
        qh_convex: 1.0,
        qh_starlike: 2.83297,
    }
}

/// `e^{2M} - 2 e^M - 1`, zero exactly at the strict-starlikeness threshold.
pub fn tangency_residual(m: Radius) -> f64 {
    let e = m.get().exp();
    e * e - 2.0 * e - 1.0
}

/// `|1 - c|^2 - r^2 - s^2`: zero when the outer and inner circles meet at a
/// right angle. `None` on the half-plane branch.
pub fn perpendicularity_residual(m: Radius) -> Option<f64> {
    let d = disk_decomposition(m);
    let c = d.inner_center()?;
    let s = d.inner_radius()?;
    let r = d.outer.radius;
    Some((1.0 - c).powi(2) - r * r - s * s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Domain;
    use crate::metric::in_j_ball;

    fn radius(m: f64) -> Radius {
        Radius::new(m).unwrap()
    }

    #[test]
    fn cap_at_half() {
        let d = disk_decomposition(radius(0.5));
        assert!((d.outer.radius - 0.648_721_270_700_128_2).abs() < 1e-15);
        let InnerBoundary::Cap(c) = d.inner else { panic!("expected a cap") };
        // Evaluated independently in extended precision.
        assert!((c.center.x - 1.726_636_454_537_114).abs() < 1e-12, "{}", c.center.x);
        assert!((c.radius - 1.120_105_794_824_481).abs() < 1e-12, "{}", c.radius);
        assert!((c.center.x - c.radius - 0.606_530_659_712_633).abs() < 1e-12);
        assert!((c.center.x + c.radius - 2.846_742_249_361_595).abs() < 1e-12);
        let e = 0.5f64.exp();
        assert!((c.center.x - c.radius - 1.0 / e).abs() < 1e-12);
        assert!((c.center.x + c.radius - 1.0 / (2.0 - e)).abs() < 1e-12);
    }

    #[test]
    fn half_plane_at_log2() {
        let d = disk_decomposition(radius(std::f64::consts::LN_2));
        assert_eq!(d.inner, InnerBoundary::HalfPlaneCut);
        assert!((d.outer.radius - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hole_at_log3() {
        let d = disk_decomposition(radius(3f64.ln()));
        let InnerBoundary::Hole(c) = d.inner else { panic!("expected a hole") };
        assert!((d.outer.radius - 2.0).abs() < 1e-14);
        assert!((c.center.x + 1.0 / 3.0).abs() < 1e-14);
        assert!((c.radius - 2.0 / 3.0).abs() < 1e-14);
        // Internally tangent at -1.
        assert!((c.center.x - c.radius + 1.0).abs() < 1e-14);
        assert!(d.hole_inside_outer(1e-12));
    }

    #[test]
    fn centre_sign_changes_at_log2() {
        for m in [0.1, 0.4, 0.69] {
            assert!(disk_decomposition(radius(m)).inner_center().unwrap() > 1.0);
        }
        for m in [0.7, 1.0, 2.0] {
            assert!(disk_decomposition(radius(m)).inner_center().unwrap() < 0.0);
        }
    }

    #[test]
    fn tangency_values() {
        let t = thresholds();
        assert!(tangency_residual(radius(t.j_starlike)).abs() < 1e-12);
        assert!((tangency_residual(radius(2f64.ln())) + 1.0).abs() < 1e-12);
        assert!((tangency_residual(radius(3f64.ln())) - 2.0).abs() < 1e-12);
        assert!(perpendicularity_residual(radius(t.j_starlike)).unwrap().abs() < 1e-10);
        assert!(perpendicularity_residual(radius(2f64.ln())).is_none());
    }

    #[test]
    #[allow(clippy::approx_constant)] // literal oracle
    fn threshold_values() {
        let t = thresholds();
        assert!((t.j_convex - 0.693_147_180_559_945_3).abs() < 1e-15);
        assert!((t.j_starlike - 0.881_373_587_019_543).abs() < 1e-15);
        assert_eq!(t.qh_starlike, 2.83297);
        assert_eq!(t.qh_convex, 1.0);
    }

    #[test]
    fn transport_examples() {
        let t = canonical_transport(&Point::xy(0.0, 0.0), &Point::xy(0.0, 2.0)).unwrap();
        assert!(t.apply(Vec2::new(0.0, 2.0)).dist(Vec2::new(1.0, 0.0)) < 1e-15);
        assert!((t.angle + std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert_eq!(t.scale, 0.5);

        let t = canonical_transport(&Point::xy(1.0, 0.0), &Point::xy(2.0, 0.0)).unwrap();
        assert_eq!((t.angle, t.scale), (0.0, 1.0));
        assert_eq!(t.apply(Vec2::new(2.0, 0.0)), Vec2::new(1.0, 0.0));

        assert!(canonical_transport(&Point::xy(1.0, 0.0), &Point::xy(1.0, 0.0)).is_err());
    }

    #[test]
    fn decomposition_matches_definition_on_a_lattice() {
        let g = Domain::punctured_plane();
        let e1 = Point::xy(1.0, 0.0);
        for m in [0.3, 0.6, 2f64.ln(), 0.8, 1.2] {
            let d = disk_decomposition(radius(m));
            for i in -40..=40 {
                for k in -40..=40 {
                    let z = Vec2::new(1.0 + 0.07 * i as f64 + 0.003, 0.07 * k as f64 + 0.001);
                    let def = in_j_ball(&g, &e1, radius(m), &Point::from(z)).unwrap();
                    assert_eq!(d.contains(z), def, "M={m} z={z:?}");
                }
            }
        }
    }
}
