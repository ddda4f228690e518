use crate::error::{Error, Result};
use crate::point::Vec2;

/// Closest point of segment `[a, b]` to `p`.
pub(crate) fn closest_on_segment(a: Vec2, b: Vec2, p: Vec2) -> Vec2 {
    let ab = b - a;
    let len_sq = ab.norm_sq();
    if len_sq == 0.0 {
        return a;
    }
    let t = ((p - a).dot(ab) / len_sq).clamp(0.0, 1.0);
    a + ab * t
}

pub(crate) fn segment_distance(a: Vec2, b: Vec2, p: Vec2) -> f64 {
    closest_on_segment(a, b, p).dist(p)
}

fn orient(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    (b - a).cross(c - a)
}

fn on_segment(a: Vec2, b: Vec2, p: Vec2) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed-segment intersection test, touching included.
pub(crate) fn segments_intersect(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

/// Polygon with counterclockwise vertex order. `convex` selects the cheaper
/// half-plane membership test.
#[derive(Clone, Debug, PartialEq)]
pub struct Polygon {
    vertices: Vec<Vec2>,
    convex: bool,
}

fn signed_area(v: &[Vec2]) -> f64 {
    let n = v.len();
    (0..n).map(|i| v[i].cross(v[(i + 1) % n])).sum::<f64>() * 0.5
}

fn check_vertices(v: &[Vec2]) -> Result<()> {
    if v.len() < 3 {
        return Err(Error::InvalidDomain(format!(
            "polygon needs at least 3 vertices, got {}",
            v.len()
        )));
    }
    if v.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(())
}

impl Polygon {
    pub fn convex(vertices: Vec<Vec2>) -> Result<Self> {
        check_vertices(&vertices)?;
        let n = vertices.len();
        for i in 0..n {
            let turn = orient(vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]);
            if turn <= 0.0 {
                return Err(Error::InvalidDomain(format!(
                    "convex polygon must be strictly convex and counterclockwise (vertex {})",
                    (i + 1) % n
                )));
            }
        }
        // A star pentagon also turns left at every vertex; total turning rules it out.
        let mut turning = 0.0;
        for i in 0..n {
            let e0 = vertices[(i + 1) % n] - vertices[i];
            let e1 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
            turning += e0.cross(e1).atan2(e0.dot(e1));
        }
        if (turning - std::f64::consts::TAU).abs() > 1e-6 {
            return Err(Error::InvalidDomain(
                "convex polygon winds more than once".into(),
            ));
        }
        Ok(Self {
            vertices,
            convex: true,
        })
    }

    pub fn simple(mut vertices: Vec<Vec2>) -> Result<Self> {
        check_vertices(&vertices)?;
        let n = vertices.len();
        for i in 0..n {
            if vertices[i] == vertices[(i + 1) % n] {
                return Err(Error::InvalidDomain(format!("repeated vertex {i}")));
            }
        }
        for i in 0..n {
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            for j in i + 1..n {
                let (c, d) = (vertices[j], vertices[(j + 1) % n]);
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if adjacent {
                    // Consecutive edges may only share their common vertex.
                    let shared = if j == i + 1 { b } else { a };
                    let (other_a, other_b) = if j == i + 1 { (a, d) } else { (b, c) };
                    if orient(other_a, shared, other_b) == 0.0
                        && (other_b - shared).dot(other_a - shared) > 0.0
                    {
                        return Err(Error::InvalidDomain(format!(
                            "edges {i} and {j} overlap"
                        )));
                    }
                } else if segments_intersect(a, b, c, d) {
                    return Err(Error::InvalidDomain(format!(
                        "edges {i} and {j} intersect"
                    )));
                }
            }
        }
        let area = signed_area(&vertices);
        if area == 0.0 {
            return Err(Error::InvalidDomain("polygon has zero area".into()));
        }
        if area < 0.0 {
            vertices.reverse();
        }
        Ok(Self {
            vertices,
            convex: false,
        })
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn is_convex(&self) -> bool {
        self.convex
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vec2, Vec2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn contains(&self, p: Vec2) -> bool {
        if self.convex {
            return self.edges().all(|(a, b)| orient(a, b, p) > 0.0);
        }
        // Even-odd crossing count; boundary points are excluded separately.
        let mut inside = false;
        for (a, b) in self.edges() {
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if p.x < x {
                    inside = !inside;
                }
            }
        }
        inside && self.boundary_distance(p) > 0.0
    }

    pub fn boundary_distance(&self, p: Vec2) -> f64 {
        self.edges()
            .map(|(a, b)| segment_distance(a, b, p))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn farthest_vertex_distance(&self, p: Vec2) -> f64 {
        self.vertices
            .iter()
            .map(|v| v.dist(p))
            .fold(0.0, f64::max)
    }

    pub fn nearest_points(&self, p: Vec2, tol: f64) -> (Vec<Vec2>, f64) {
        let feet: Vec<(Vec2, f64)> = self
            .edges()
            .map(|(a, b)| {
                let q = closest_on_segment(a, b, p);
                (q, q.dist(p))
            })
            .collect();
        let best = feet.iter().map(|f| f.1).fold(f64::INFINITY, f64::min);
        let mut out: Vec<Vec2> = Vec::new();
        for (q, d) in feet {
            if d - best <= tol && !out.iter().any(|o| o.dist(q) <= tol) {
                out.push(q);
            }
        }
        (out, best)
    }

    /// Whether the closed segment stays inside the open polygon.
    pub fn segment_inside(&self, a: Vec2, b: Vec2) -> bool {
        if !self.contains(a) || !self.contains(b) {
            return false;
        }
        if self.convex {
            return true;
        }
        !self.edges().any(|(c, d)| segments_intersect(a, b, c, d))
    }

    /// Points spread along the boundary by arc length.
    pub fn boundary_samples(&self, count: usize) -> Vec<Vec2> {
        let perimeter: f64 = self.edges().map(|(a, b)| a.dist(b)).sum();
        let mut out = Vec::with_capacity(count);
        for k in 0..count {
            let mut s = perimeter * k as f64 / count as f64;
            for (a, b) in self.edges() {
                let len = a.dist(b);
                if s <= len {
                    out.push(a.lerp(b, s / len));
                    break;
                }
                s -= len;
            }
        }
        out
    }

    pub fn map(&self, f: impl Fn(Vec2) -> Vec2) -> Self {
        Self {
            vertices: self.vertices.iter().map(|&v| f(v)).collect(),
            convex: self.convex,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Vec<Vec2> {
        vec![
            Vec2::new(-0.5, -0.5),
            Vec2::new(0.5, -0.5),
            Vec2::new(0.5, 0.5),
            Vec2::new(-0.5, 0.5),
        ]
    }

    #[test]
    fn convex_validation() {
        assert!(Polygon::convex(square()).is_ok());
        let mut cw = square();
        cw.reverse();
        assert!(Polygon::convex(cw).is_err());
        let collinear = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(2.0, 0.0),
            Vec2::new(1.0, 1.0),
        ];
        assert!(Polygon::convex(collinear).is_err());
        let pentagram: Vec<Vec2> = (0..5)
            .map(|k| Vec2::polar(1.0, std::f64::consts::TAU * (2 * k) as f64 / 5.0))
            .collect();
        assert!(Polygon::convex(pentagram).is_err());
    }

    #[test]
    fn simple_validation_and_orientation() {
        let mut cw = square();
        cw.reverse();
        let p = Polygon::simple(cw).unwrap();
        assert!(signed_area(p.vertices()) > 0.0);
        let bowtie = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, 1.0),
        ];
        assert!(Polygon::simple(bowtie).is_err());
    }

    #[test]
    fn open_set_membership() {
        for poly in [Polygon::convex(square()).unwrap(), Polygon::simple(square()).unwrap()] {
            assert!(poly.contains(Vec2::ZERO));
            assert!(!poly.contains(Vec2::new(0.5, 0.0)));
            assert!(!poly.contains(Vec2::new(-0.5, -0.5)));
            assert!(!poly.contains(Vec2::new(0.7, 0.0)));
        }
    }

    #[test]
    fn centre_of_square_has_four_feet() {
        let poly = Polygon::convex(square()).unwrap();
        let (pts, d) = poly.nearest_points(Vec2::ZERO, 1e-9);
        assert_eq!(d, 0.5);
        assert_eq!(pts.len(), 4);
        // Brute force over a dense boundary sample agrees on the minimum.
        let brute = poly
            .boundary_samples(4000)
            .into_iter()
            .map(|q| q.norm())
            .fold(f64::INFINITY, f64::min);
        assert!((brute - 0.5).abs() < 1e-12);
    }

    #[test]
    fn nonconvex_segment_test() {
        // L-shaped room; the diagonal across the notch leaves the polygon.
        let l = Polygon::simple(vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(2.0, 0.0),
            Vec2::new(2.0, 1.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(1.0, 2.0),
            Vec2::new(0.0, 2.0),
        ])
        .unwrap();
        assert!(l.segment_inside(Vec2::new(0.5, 0.5), Vec2::new(1.5, 0.5)));
        assert!(!l.segment_inside(Vec2::new(1.8, 0.8), Vec2::new(0.8, 1.8)));
    }
}
