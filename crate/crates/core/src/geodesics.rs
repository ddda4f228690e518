//! Equality in the triangle inequality of `j` and existence of geodesic
//! segments.
//!
//! Equality `j(x, z) = j(x, y) + j(y, z)` with `d(x) <= d(z)` forces `y` onto
//! the segment `(x, z)`, a nearest boundary point `u` of `x` on the line
//! behind `x`, and `d(x) < d(y) < d(z)`. A geodesic is therefore a segment
//! sharing one nearest boundary point `u` along its whole length.

use serde::Serialize;

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::metric::j_distance;
use crate::point::{Point, Vec2};

/// Largest angle, in radians, still counted as collinear.
pub const COLLINEAR_TOL: f64 = 1e-9;

/// Interior samples per segment scan (including both endpoints).
pub const SEGMENT_SAMPLES: usize = 257;

/// `j(x, y) + j(y, z) - j(x, z)`.
pub fn triangle_defect(domain: &Domain, x: &Point, y: &Point, z: &Point) -> Result<f64> {
    Ok(j_distance(domain, x, y)? + j_distance(domain, y, z)? - j_distance(domain, x, z)?)
}

fn diff(a: &Point, b: &Point) -> Vec<f64> {
    a.coords().iter().zip(b.coords()).map(|(p, q)| p - q).collect()
}

fn unit(v: &[f64]) -> Option<Vec<f64>> {
    let n = v.iter().map(|c| c * c).sum::<f64>().sqrt();
    (n > 0.0).then(|| v.iter().map(|c| c / n).collect())
}

/// Angle between two vectors, accurate near 0 and pi.
pub fn angle_between(a: &[f64], b: &[f64]) -> f64 {
    let (Some(a), Some(b)) = (unit(a), unit(b)) else {
        return 0.0;
    };
    let sub: f64 = a.iter().zip(&b).map(|(p, q)| (p - q).powi(2)).sum::<f64>().sqrt();
    let add: f64 = a.iter().zip(&b).map(|(p, q)| (p + q).powi(2)).sum::<f64>().sqrt();
    2.0 * sub.atan2(add)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EqualityCertificate {
    /// Nearest boundary point of the shallower endpoint on the line behind it.
    pub collinear_with: Point,
    /// `y` lies strictly between the endpoints.
    pub segment_ok: bool,
    /// Depths increase strictly from the shallower endpoint through `y`.
    pub depth_ordering: bool,
    pub defect: f64,
}

/// Result of scanning the segment between two points for equality cases.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EqualityScan {
    pub witnesses: Vec<(Point, EqualityCertificate)>,
    /// Points with defect below `tol` for which no certificate could be built.
    pub uncertified: Vec<Point>,
    pub min_defect: f64,
}

fn behind(domain: &Domain, from: &Point, to: &Point) -> Result<Option<Point>> {
    let feet = domain.nearest_boundary(from, None)?;
    let dir = diff(to, from);
    Ok(feet
        .points
        .into_iter()
        .find(|u| angle_between(&dir, &diff(from, u)) <= COLLINEAR_TOL))
}

/// Scans `y` along `(x, z)` and certifies the samples where the triangle
/// inequality holds with equality up to `tol`.
pub fn equality_witnesses(domain: &Domain, x: &Point, z: &Point, tol: f64) -> Result<EqualityScan> {
    if x == z {
        return Err(Error::InvalidArgument("endpoints coincide".into()));
    }
    let (dx, dz) = (domain.boundary_distance(x)?, domain.boundary_distance(z)?);
    let (a, b, da, db) = if dx <= dz { (x, z, dx, dz) } else { (z, x, dz, dx) };
    let u = behind(domain, a, b)?;
    let mut scan = EqualityScan {
        witnesses: Vec::new(),
        uncertified: Vec::new(),
        min_defect: f64::INFINITY,
    };
    for k in 1..SEGMENT_SAMPLES - 1 {
        let t = k as f64 / (SEGMENT_SAMPLES - 1) as f64;
        let y = x.lerp(z, t);
        let Some(dy) = domain.depth(&y)? else {
            continue;
        };
        let defect = triangle_defect(domain, x, &y, z)?;
        scan.min_defect = scan.min_defect.min(defect);
        if defect >= tol {
            continue;
        }
        match &u {
            Some(u) if da < dy && dy < db => scan.witnesses.push((
                y,
                EqualityCertificate {
                    collinear_with: u.clone(),
                    segment_ok: true,
                    depth_ordering: true,
                    defect,
                },
            )),
            _ => scan.uncertified.push(y),
        }
    }
    Ok(scan)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeodesicVerdict {
    pub exists: bool,
    /// Common nearest boundary point, when the segment is a geodesic.
    pub u: Option<Point>,
    /// First sample where the candidate stops being a nearest boundary point,
    /// located by bisection.
    pub switch_at: Option<Point>,
}

fn is_nearest(domain: &Domain, s: &Point, u: &Point, tol: f64) -> Result<bool> {
    let d = domain.boundary_distance(s)?;
    Ok(s.dist(u) - d <= tol * d.max(1.0))
}

/// Whether the segment `[x, y]` is a geodesic: some nearest boundary point
/// of an endpoint lies on the line beyond the segment and stays a nearest
/// boundary point of every sampled `s` in `[x, y]`.
pub fn geodesic_exists(domain: &Domain, x: &Point, y: &Point, tol: f64) -> Result<GeodesicVerdict> {
    if x == y {
        return Err(Error::InvalidArgument("endpoints coincide".into()));
    }
    domain.boundary_distance(y)?;
    let mut candidates = Vec::new();
    candidates.extend(behind(domain, x, y)?);
    candidates.extend(behind(domain, y, x)?);
    let mut switch_at = None;
    for u in candidates {
        let mut last_ok = 0.0;
        let mut failed = None;
        for k in 0..SEGMENT_SAMPLES {
            let t = k as f64 / (SEGMENT_SAMPLES - 1) as f64;
            let s = x.lerp(y, t);
            if domain.depth(&s)?.is_none() || !is_nearest(domain, &s, &u, tol)? {
                failed = Some(t);
                break;
            }
            last_ok = t;
        }
        let Some(mut bad) = failed else {
            return Ok(GeodesicVerdict {
                exists: true,
                u: Some(u),
                switch_at: None,
            });
        };
        let mut good = last_ok;
        for _ in 0..60 {
            let mid = 0.5 * (good + bad);
            let s = x.lerp(y, mid);
            if domain.depth(&s)?.is_some() && is_nearest(domain, &s, &u, tol)? {
                good = mid;
            } else {
                bad = mid;
            }
        }
        switch_at.get_or_insert(x.lerp(y, bad));
    }
    Ok(GeodesicVerdict {
        exists: false,
        u: None,
        switch_at,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NoGeodesicPair {
    pub x: Point,
    pub y: Point,
    /// Smallest defect `j(x, y') + j(y', y) - j(x, y)` over sampled `y'`
    /// strictly inside the segment and next to it.
    pub min_defect: f64,
}

fn seed_point(domain: &Domain) -> Result<Point> {
    match domain {
        Domain::Punctured(s) => {
            let p = &s.punctures()[0];
            let gap = s
                .punctures()
                .iter()
                .skip(1)
                .map(|q| q.dist(p))
                .fold(f64::INFINITY, f64::min);
            let r = if gap.is_finite() { gap / 4.0 } else { 1.0 };
            Ok(p + &Point::axis(s.dim(), 0, r))
        }
        Domain::HalfSpace(h) => {
            let n = h.normal();
            let t = h.offset() - 1.0;
            Ok(Point::xy(n.x * t, n.y * t))
        }
        _ => {
            let (lo, hi) = domain.bounding_box2().ok_or(Error::Unbounded)?;
            let mut best = (0.0, None);
            for j in 0..=64 {
                for i in 0..=64 {
                    let p = lo + Vec2::new(
                        (hi.x - lo.x) * i as f64 / 64.0,
                        (hi.y - lo.y) * j as f64 / 64.0,
                    );
                    if let Some(d) = domain.depth2(p) {
                        if d > best.0 {
                            best = (d, Some(p));
                        }
                    }
                }
            }
            best.1
                .map(Point::from)
                .ok_or_else(|| Error::SearchFailed("no interior grid point".into()))
        }
    }
}

/// Unit vector orthogonal to `v`.
fn orthogonal(v: &[f64]) -> Vec<f64> {
    let k = (0..v.len())
        .min_by(|&a, &b| v[a].abs().total_cmp(&v[b].abs()))
        .unwrap_or(0);
    let v = unit(v).unwrap_or_else(|| vec![1.0; v.len()]);
    let mut e: Vec<f64> = (0..v.len()).map(|i| if i == k { 1.0 } else { 0.0 }).collect();
    let dot: f64 = e.iter().zip(&v).map(|(a, b)| a * b).sum();
    e.iter_mut().zip(&v).for_each(|(a, b)| *a -= dot * b);
    unit(&e).expect("dimension at least 2")
}

/// Finds `x, y` with no geodesic between them: `y` is placed sideways from
/// `x`, perpendicular to a nearest-boundary direction, so the segment is
/// collinear with no nearest boundary point of either end.
pub fn no_geodesic_pair(domain: &Domain) -> Result<NoGeodesicPair> {
    let x = seed_point(domain)?;
    let dx = domain.boundary_distance(&x)?;
    let feet = domain.nearest_boundary(&x, None)?;
    let radial = diff(&x, &feet.points[0]);
    let side = orthogonal(&radial);
    for scale in [0.5, 0.3, 0.7, 0.2, 0.9] {
        let offset = Point::new(side.iter().map(|c| c * scale * dx).collect())?;
        let y = &x + &offset;
        if domain.depth(&y)?.is_none() {
            continue;
        }
        let dir = diff(&y, &x);
        let mut ends = domain.nearest_boundary(&x, None)?.points;
        ends.extend(domain.nearest_boundary(&y, None)?.points);
        let noncollinear = ends.iter().all(|u| {
            let a = angle_between(&dir, &diff(&x, u));
            let b = angle_between(&dir, &diff(&y, u));
            a.min(std::f64::consts::PI - a) > 1e-6 && b.min(std::f64::consts::PI - b) > 1e-6
        });
        if !noncollinear || geodesic_exists(domain, &x, &y, 1e-9)?.exists {
            continue;
        }
        let normal = Point::new(unit(&radial).expect("x is off the boundary"))?;
        let len = x.dist(&y);
        let mut min_defect = f64::INFINITY;
        for k in 1..SEGMENT_SAMPLES - 1 {
            let t = k as f64 / (SEGMENT_SAMPLES - 1) as f64;
            min_defect = min_defect.min(triangle_defect(domain, &x, &x.lerp(&y, t), &y)?);
        }
        for k in 1..16 {
            for s in [-0.2, -0.1, -0.05, 0.05, 0.1, 0.2] {
                let p = &x.lerp(&y, k as f64 / 16.0) + &normal.scale(s * len);
                if domain.depth(&p)?.is_some() {
                    min_defect = min_defect.min(triangle_defect(domain, &x, &p, &y)?);
                }
            }
        }
        if min_defect > 0.0 {
            return Ok(NoGeodesicPair { x, y, min_defect });
        }
    }
    Err(Error::SearchFailed("no pair without a geodesic found".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::xy(x, y)
    }

    #[test]
    fn defect_examples() {
        let g = Domain::punctured_plane();
        assert!(triangle_defect(&g, &p(1.0, 0.0), &p(2.0, 0.0), &p(3.0, 0.0)).unwrap().abs() < 1e-15);
        assert!(triangle_defect(&g, &p(1.0, 0.0), &p(0.0, 1.0), &p(3.0, 0.0)).unwrap() > 0.1);
        assert_eq!(triangle_defect(&g, &p(1.0, 0.0), &p(1.0, 0.0), &p(3.0, 0.0)).unwrap(), 0.0);
    }

    #[test]
    fn angle_is_accurate_near_zero() {
        let a = angle_between(&[1.0, 0.0], &[1.0, 1e-12]);
        assert!((a - 1e-12).abs() < 1e-20);
        assert!((angle_between(&[1.0, 0.0], &[-1.0, 0.0]) - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn witness_examples() {
        let g = Domain::punctured_plane();
        let scan = equality_witnesses(&g, &p(1.0, 0.0), &p(3.0, 0.0), 1e-12).unwrap();
        assert_eq!(scan.witnesses.len(), SEGMENT_SAMPLES - 2);
        assert!(scan.uncertified.is_empty());
        assert_eq!(scan.witnesses[0].1.collinear_with, p(0.0, 0.0));

        let scan = equality_witnesses(&g, &p(1.0, 0.0), &p(1.0, 1.0), 1e-12).unwrap();
        assert!(scan.witnesses.is_empty() && scan.min_defect > 0.0);

        let g2 = Domain::punctured(vec![p(0.0, 0.0), p(4.0, 0.0)]).unwrap();
        let scan = equality_witnesses(&g2, &p(1.0, 0.0), &p(3.0, 0.0), 1e-12).unwrap();
        assert!(scan.witnesses.is_empty() && scan.min_defect > 0.0);
    }

    #[test]
    fn geodesic_examples() {
        let g = Domain::punctured_plane();
        let v = geodesic_exists(&g, &p(1.0, 0.0), &p(3.0, 0.0), 1e-9).unwrap();
        assert!(v.exists);
        assert_eq!(v.u, Some(p(0.0, 0.0)));
        assert!(!geodesic_exists(&g, &p(1.0, 0.0), &p(0.0, 1.0), 1e-9).unwrap().exists);

        let g2 = Domain::punctured(vec![p(0.0, 0.0), p(5.0, 0.0)]).unwrap();
        let v = geodesic_exists(&g2, &p(1.0, 0.0), &p(4.0, 0.0), 1e-9).unwrap();
        assert!(!v.exists);
        // d(s) switches from |s| to |s - 5| at s = 2.5.
        let s = v.switch_at.unwrap();
        assert!((s.coords()[0] - 2.5).abs() < 1e-8, "{s}");
    }

    #[test]
    fn pairs_without_geodesics() {
        let g = Domain::punctured_plane();
        assert!(no_geodesic_pair(&g).unwrap().min_defect > 0.0);
        let g = Domain::punctured(vec![p(0.0, 0.0), p(10.0, 0.0)]).unwrap();
        assert!(no_geodesic_pair(&g).unwrap().min_defect > 0.0);
        let g = Domain::half_plane(Vec2::new(0.0, -1.0), 0.0).unwrap();
        assert!(no_geodesic_pair(&g).unwrap().min_defect > 0.0);
        let g = Domain::punctured(vec![Point::origin(3)]).unwrap();
        assert!(no_geodesic_pair(&g).unwrap().min_defect > 0.0);
    }
}
