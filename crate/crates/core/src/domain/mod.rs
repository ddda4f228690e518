//! Proper subdomains of Euclidean space: membership, distance to the boundary
//! and the set of closest boundary points.
//!
//! All domains are open. Boundary points are never members.

mod ball_union;
mod polygon;
mod spec;

use crate::error::{Error, Result};
use crate::point::{Point, Similarity, Vec2};

pub use ball_union::{BallUnion, BoundaryArc, Disk};
pub use polygon::Polygon;
pub use spec::{DiskSpec, DomainSpec};

pub(crate) use polygon::segment_distance;

/// `R^n` with finitely many points removed.
#[derive(Clone, Debug, PartialEq)]
pub struct PuncturedSpace {
    dim: usize,
    punctures: Vec<Point>,
}

impl PuncturedSpace {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn punctures(&self) -> &[Point] {
        &self.punctures
    }

    fn distance(&self, p: &Point) -> f64 {
        self.punctures
            .iter()
            .map(|q| q.dist(p))
            .fold(f64::INFINITY, f64::min)
    }

    fn distance2(&self, p: Vec2) -> f64 {
        self.punctures
            .iter()
            .map(|q| q.to_vec2().dist(p))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Open half-plane `{ p : <normal, p> < offset }` with a unit normal.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfSpace {
    normal: Vec2,
    offset: f64,
}

impl HalfSpace {
    pub fn normal(&self) -> Vec2 {
        self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    fn signed_depth(&self, p: Vec2) -> f64 {
        self.offset - self.normal.dot(p)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Domain {
    Punctured(PuncturedSpace),
    HalfSpace(HalfSpace),
    ConvexPolygon(Polygon),
    SimplePolygon(Polygon),
    BallUnion(BallUnion),
}

/// Closest boundary points of a point and their common distance.
#[derive(Clone, Debug, PartialEq)]
pub struct NearestBoundarySet {
    pub points: Vec<Point>,
    pub distance: f64,
}

impl Domain {
    /// `R^n` minus the given distinct points (any n >= 2).
    pub fn punctured(points: Vec<Point>) -> Result<Self> {
        let first = points
            .first()
            .ok_or_else(|| Error::InvalidDomain("punctured space needs a puncture".into()))?;
        let dim = first.dim();
        for p in &points {
            p.check_dim(dim)?;
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if !(points[i].dist(&points[j]) > 0.0) {
                    return Err(Error::InvalidDomain(format!(
                        "punctures {i} and {j} coincide"
                    )));
                }
            }
        }
        Ok(Domain::Punctured(PuncturedSpace {
            dim,
            punctures: points,
        }))
    }

    /// The plane punctured at the origin.
    pub fn punctured_plane() -> Self {
        Self::punctured(vec![Point::origin(2)]).expect("single puncture is valid")
    }

    /// Half-plane `<normal, p> < offset`; the normal is rescaled to unit length.
    pub fn half_plane(normal: Vec2, offset: f64) -> Result<Self> {
        let len = normal.norm();
        if !(len > 0.0) || !len.is_finite() || !offset.is_finite() {
            return Err(Error::InvalidDomain(
                "half-plane needs a finite nonzero normal".into(),
            ));
        }
        Ok(Domain::HalfSpace(HalfSpace {
            normal: normal * (1.0 / len),
            offset: offset / len,
        }))
    }

    pub fn convex_polygon(vertices: Vec<Vec2>) -> Result<Self> {
        Ok(Domain::ConvexPolygon(Polygon::convex(vertices)?))
    }

    pub fn simple_polygon(vertices: Vec<Vec2>) -> Result<Self> {
        Ok(Domain::SimplePolygon(Polygon::simple(vertices)?))
    }

    pub fn ball_union(disks: Vec<Disk>) -> Result<Self> {
        Ok(Domain::BallUnion(BallUnion::new(disks)?))
    }

    pub fn dim(&self) -> usize {
        match self {
            Domain::Punctured(p) => p.dim,
            _ => 2,
        }
    }

    pub fn is_bounded(&self) -> bool {
        matches!(
            self,
            Domain::ConvexPolygon(_) | Domain::SimplePolygon(_) | Domain::BallUnion(_)
        )
    }

    pub fn is_planar(&self) -> bool {
        self.dim() == 2
    }

    pub fn contains(&self, x: &Point) -> Result<bool> {
        x.check_dim(self.dim())?;
        Ok(match self {
            Domain::Punctured(p) => p.distance(x) > 0.0,
            _ => self.contains2(x.to_vec2()),
        })
    }

    /// Planar membership. Only meaningful for planar domains.
    pub fn contains2(&self, p: Vec2) -> bool {
        match self {
            Domain::Punctured(s) => s.distance2(p) > 0.0,
            Domain::HalfSpace(h) => h.signed_depth(p) > 0.0,
            Domain::ConvexPolygon(poly) | Domain::SimplePolygon(poly) => poly.contains(p),
            Domain::BallUnion(u) => u.contains(p),
        }
    }

    /// Unsigned distance from any point of space to the boundary.
    pub fn distance_to_boundary(&self, x: &Point) -> Result<f64> {
        x.check_dim(self.dim())?;
        Ok(match self {
            Domain::Punctured(p) => p.distance(x),
            _ => self.distance_to_boundary2(x.to_vec2()),
        })
    }

    pub fn distance_to_boundary2(&self, p: Vec2) -> f64 {
        match self {
            Domain::Punctured(s) => s.distance2(p),
            Domain::HalfSpace(h) => h.signed_depth(p).abs(),
            Domain::ConvexPolygon(poly) | Domain::SimplePolygon(poly) => poly.boundary_distance(p),
            Domain::BallUnion(u) => u.boundary_distance(p),
        }
    }

    /// Axis-aligned bounding box `(min, max)` of a bounded planar domain.
    pub fn bounding_box2(&self) -> Option<(Vec2, Vec2)> {
        let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        let mut grow = |p: Vec2, r: f64| {
            lo = Vec2::new(lo.x.min(p.x - r), lo.y.min(p.y - r));
            hi = Vec2::new(hi.x.max(p.x + r), hi.y.max(p.y + r));
        };
        match self {
            Domain::ConvexPolygon(poly) | Domain::SimplePolygon(poly) => {
                poly.vertices().iter().for_each(|v| grow(*v, 0.0))
            }
            Domain::BallUnion(u) => u.disks().iter().for_each(|d| grow(d.center, d.radius)),
            _ => return None,
        }
        Some((lo, hi))
    }

    /// `d(p)` if `p` is in the domain, `None` otherwise (planar).
    pub fn depth2(&self, p: Vec2) -> Option<f64> {
        match self {
            Domain::Punctured(s) => Some(s.distance2(p)).filter(|d| *d > 0.0),
            Domain::HalfSpace(h) => Some(h.signed_depth(p)).filter(|d| *d > 0.0),
            _ => self
                .contains2(p)
                .then(|| self.distance_to_boundary2(p)),
        }
    }

    /// `d(x)` if `x` is in the domain, `None` otherwise.
    pub fn depth(&self, x: &Point) -> Result<Option<f64>> {
        x.check_dim(self.dim())?;
        Ok(match self {
            Domain::Punctured(p) => Some(p.distance(x)).filter(|d| *d > 0.0),
            _ => self.depth2(x.to_vec2()),
        })
    }

    /// Euclidean distance from `x` to the boundary; `x` must lie in the domain.
    pub fn boundary_distance(&self, x: &Point) -> Result<f64> {
        self.depth(x)?
            .ok_or_else(|| Error::OutsideDomain(x.to_string()))
    }

    /// Closest boundary points of `x`, within `tol` of the minimum distance.
    /// `tol = None` uses `1e-9 * d(x)`.
    pub fn nearest_boundary(&self, x: &Point, tol: Option<f64>) -> Result<NearestBoundarySet> {
        let d = self.boundary_distance(x)?;
        let tol = tol.unwrap_or(1e-9 * d);
        if !(tol > 0.0) {
            return Err(Error::InvalidArgument("tolerance must be positive".into()));
        }
        let points = match self {
            Domain::Punctured(s) => s
                .punctures
                .iter()
                .filter(|q| q.dist(x) - d <= tol)
                .cloned()
                .collect(),
            Domain::HalfSpace(h) => {
                let p = x.to_vec2();
                vec![Point::from(p + h.normal * d)]
            }
            Domain::ConvexPolygon(poly) | Domain::SimplePolygon(poly) => poly
                .nearest_points(x.to_vec2(), tol)
                .0
                .into_iter()
                .map(Point::from)
                .collect(),
            Domain::BallUnion(u) => u
                .nearest_points(x.to_vec2(), tol)
                .0
                .into_iter()
                .map(Point::from)
                .collect(),
        };
        Ok(NearestBoundarySet {
            points,
            distance: d,
        })
    }

    /// `sup { |x - z| : z in boundary }`; bounded domains only.
    pub fn farthest_boundary_distance(&self, x: &Point) -> Result<f64> {
        x.check_dim(self.dim())?;
        let p = x.to_vec2();
        match self {
            Domain::ConvexPolygon(poly) | Domain::SimplePolygon(poly) => {
                Ok(poly.farthest_vertex_distance(p))
            }
            Domain::BallUnion(u) => Ok(u.farthest_boundary_distance(p)),
            _ => Err(Error::Unbounded),
        }
    }

    /// Whether the closed planar segment `[a, b]` lies in the domain.
    pub fn segment_inside2(&self, a: Vec2, b: Vec2) -> bool {
        match self {
            Domain::Punctured(s) => s
                .punctures
                .iter()
                .all(|q| segment_distance(a, b, q.to_vec2()) > 0.0),
            Domain::HalfSpace(_) | Domain::ConvexPolygon(_) => {
                self.contains2(a) && self.contains2(b)
            }
            Domain::SimplePolygon(poly) => poly.segment_inside(a, b),
            Domain::BallUnion(u) => u.segment_inside(a, b),
        }
    }

    /// Deterministic boundary sample. Unbounded boundaries (half-plane) are
    /// sampled within `radius` of the foot point of `near`.
    pub fn boundary_samples(&self, count: usize, near: &Point, radius: f64) -> Vec<Point> {
        match self {
            Domain::Punctured(s) => s.punctures.clone(),
            Domain::HalfSpace(h) => {
                let p = near.to_vec2();
                let foot = p + h.normal * h.signed_depth(p);
                let along = h.normal.perp();
                (0..count)
                    .map(|k| {
                        let t = -radius + 2.0 * radius * k as f64 / (count.max(2) - 1) as f64;
                        Point::from(foot + along * t)
                    })
                    .collect()
            }
            Domain::ConvexPolygon(poly) | Domain::SimplePolygon(poly) => poly
                .boundary_samples(count)
                .into_iter()
                .map(Point::from)
                .collect(),
            Domain::BallUnion(u) => u
                .boundary_samples(count)
                .into_iter()
                .map(Point::from)
                .collect(),
        }
    }

    /// Image of a planar domain under an orientation-preserving similarity.
    pub fn transformed(&self, t: &Similarity) -> Result<Domain> {
        if !self.is_planar() {
            return Err(Error::NotPlanar);
        }
        Ok(match self {
            Domain::Punctured(s) => Domain::punctured(
                s.punctures
                    .iter()
                    .map(|q| Point::from(t.apply(q.to_vec2())))
                    .collect(),
            )?,
            Domain::HalfSpace(h) => {
                let normal = h.normal.rotate(t.angle);
                let offset = t.scale * (h.offset - h.normal.dot(t.anchor));
                Domain::HalfSpace(HalfSpace { normal, offset })
            }
            Domain::ConvexPolygon(poly) => Domain::ConvexPolygon(poly.map(|v| t.apply(v))),
            Domain::SimplePolygon(poly) => Domain::SimplePolygon(poly.map(|v| t.apply(v))),
            Domain::BallUnion(u) => Domain::BallUnion(u.map(|v| t.apply(v), t.scale)?),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::xy(x, y)
    }

    #[test]
    fn punctured_membership() {
        let g = Domain::punctured_plane();
        assert!(g.contains(&p(1.0, 0.0)).unwrap());
        assert!(!g.contains(&p(0.0, 0.0)).unwrap());
        assert_eq!(g.boundary_distance(&p(1.0, 0.0)).unwrap(), 1.0);
        assert!(matches!(
            g.boundary_distance(&p(0.0, 0.0)),
            Err(Error::OutsideDomain(_))
        ));
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let g = Domain::punctured_plane();
        let x3 = Point::new(vec![1.0, 0.0, 0.0]).unwrap();
        assert_eq!(
            g.contains(&x3),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 3
            })
        );
        assert!(Domain::punctured(vec![p(0.0, 0.0), x3]).is_err());
    }

    #[test]
    fn duplicate_punctures_are_rejected() {
        assert!(Domain::punctured(vec![p(1.0, 0.0), p(1.0, 0.0)]).is_err());
        assert!(Domain::punctured(vec![]).is_err());
    }

    #[test]
    fn nearest_puncture_sets() {
        let g = Domain::punctured(vec![p(0.0, 0.0), p(4.0, 0.0)]).unwrap();
        let r = g.nearest_boundary(&p(1.0, 0.0), None).unwrap();
        assert_eq!(r.points, vec![p(0.0, 0.0)]);
        assert_eq!(r.distance, 1.0);

        let g = Domain::punctured(vec![p(0.0, 0.0), p(2.0, 0.0)]).unwrap();
        let r = g.nearest_boundary(&p(1.0, 0.0), None).unwrap();
        assert_eq!(r.points, vec![p(0.0, 0.0), p(2.0, 0.0)]);
        assert_eq!(r.distance, 1.0);
    }

    #[test]
    fn upper_half_plane() {
        let g = Domain::half_plane(Vec2::new(0.0, -1.0), 0.0).unwrap();
        assert_eq!(g.boundary_distance(&p(0.0, 2.0)).unwrap(), 2.0);
        assert!(!g.contains(&p(3.0, 0.0)).unwrap());
        let r = g.nearest_boundary(&p(0.5, 2.0), None).unwrap();
        assert_eq!(r.points, vec![p(0.5, 0.0)]);
        // Non-unit normals are rescaled without changing the set.
        let h = Domain::half_plane(Vec2::new(0.0, -2.0), 2.0).unwrap();
        assert_eq!(h.boundary_distance(&p(0.0, 0.0)).unwrap(), 1.0);
    }

    #[test]
    fn three_disk_neck() {
        let g = Domain::ball_union(vec![
            Disk { center: Vec2::new(0.0, 0.0), radius: 1.0 },
            Disk { center: Vec2::new(1.0, 0.0), radius: 0.25 },
            Disk { center: Vec2::new(2.0, 0.0), radius: 1.0 },
        ])
        .unwrap();
        let d = g.boundary_distance(&p(1.0, 0.0)).unwrap();
        assert!((d - 0.25).abs() < 1e-15);
        assert_eq!(g.farthest_boundary_distance(&p(0.0, 0.0)).unwrap(), 3.0);
        assert_eq!(
            g.farthest_boundary_distance(&p(0.0, 0.0)),
            Ok(3.0),
        );
        assert_eq!(
            Domain::punctured_plane().farthest_boundary_distance(&p(1.0, 0.0)),
            Err(Error::Unbounded)
        );
    }

    #[test]
    fn similarity_transport_of_half_plane() {
        let g = Domain::half_plane(Vec2::new(0.0, -1.0), 0.0).unwrap();
        let t = Similarity {
            anchor: Vec2::new(1.0, 1.0),
            angle: 0.4,
            scale: 3.0,
        };
        let tg = g.transformed(&t).unwrap();
        let q = Vec2::new(0.3, 0.7);
        let d = g.distance_to_boundary2(q);
        let td = tg.distance_to_boundary2(t.apply(q));
        assert!((td - 3.0 * d).abs() < 1e-12);
        assert!(tg.contains2(t.apply(q)));
    }
}
