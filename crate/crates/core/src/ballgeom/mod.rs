//! Raster and ray geometry of metric balls in planar domains.

mod checks;
mod contour;
mod grid;
mod svg;

pub use checks::{
    check_convexity, check_starlikeness, convexity_check, starlikeness_check, CheckReport,
    ConvexityOptions, Mode, StarlikenessOptions, Witness,
};
pub use contour::{trace_boundary, Polyline};
pub use grid::{
    default_spacing, extract_region, label_components, sphere_components, sphere_components_grid,
    topology_check, RegionGrid, SphereAnalysis, Topology, DEFAULT_RESOLUTION,
};
pub use svg::render_svg;

use crate::metric::qh::qh_punctured_closed_form_2d;
use crate::metric::JBall;
use crate::point::Vec2;

/// An open ball `{p : distance(p) < radius}` about a planar centre.
pub trait MetricBall: Sync {
    fn center(&self) -> Vec2;

    fn radius(&self) -> f64;

    /// Distance from the centre, or infinity outside the domain.
    fn distance(&self, p: Vec2) -> f64;

    /// The ball lies in the open Euclidean disk of this radius about the centre.
    fn extent(&self) -> f64;

    /// Rectangle containing the ball, used for rejection sampling.
    fn sample_box(&self) -> (Vec2, Vec2) {
        let c = self.center();
        let r = self.extent();
        (Vec2::new(c.x - r, c.y - r), Vec2::new(c.x + r, c.y + r))
    }

    fn excess(&self, p: Vec2) -> f64 {
        self.distance(p) - self.radius()
    }

    fn contains(&self, p: Vec2) -> bool {
        self.distance(p) < self.radius()
    }
}

impl MetricBall for JBall<'_> {
    fn center(&self) -> Vec2 {
        JBall::center(self)
    }

    fn radius(&self) -> f64 {
        JBall::radius(self)
    }

    fn distance(&self, p: Vec2) -> f64 {
        self.j(p)
    }

    fn extent(&self) -> f64 {
        self.bounds().outer_radius
    }

    fn sample_box(&self) -> (Vec2, Vec2) {
        let c = JBall::center(self);
        let r = MetricBall::extent(self);
        let (mut lo, mut hi) = (Vec2::new(c.x - r, c.y - r), Vec2::new(c.x + r, c.y + r));
        if let Some((dlo, dhi)) = self.domain().bounding_box2() {
            lo = Vec2::new(lo.x.max(dlo.x), lo.y.max(dlo.y));
            hi = Vec2::new(hi.x.min(dhi.x), hi.y.min(dhi.y));
        }
        (lo, hi)
    }
}

/// Quasihyperbolic ball of `R^2 \ {puncture}` evaluated in closed form.
#[derive(Clone, Copy, Debug)]
pub struct PuncturedQhBall {
    pub puncture: Vec2,
    pub center: Vec2,
    pub radius: f64,
}

impl MetricBall for PuncturedQhBall {
    fn center(&self) -> Vec2 {
        self.center
    }

    fn radius(&self) -> f64 {
        self.radius
    }

    fn distance(&self, p: Vec2) -> f64 {
        if p == self.puncture {
            return f64::INFINITY;
        }
        qh_punctured_closed_form_2d(self.puncture, self.center, p)
    }

    fn extent(&self) -> f64 {
        // |log(|y - p| / |x - p|)| <= k, so |y - p| < |x - p| e^M.
        self.center.dist(self.puncture) * (1.0 + self.radius.exp())
    }
}
