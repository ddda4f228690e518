use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::point::Vec2;

/// Open disk.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Disk {
    pub center: Vec2,
    pub radius: f64,
}

/// Closed arc of a circle, `start .. start + sweep` counterclockwise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryArc {
    pub disk: usize,
    pub start: f64,
    pub sweep: f64,
}

/// Union of open disks. The boundary is the set of circle arcs not covered by
/// any other open disk, computed once at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct BallUnion {
    disks: Vec<Disk>,
    arcs: Vec<BoundaryArc>,
}

fn wrap(angle: f64) -> f64 {
    angle.rem_euclid(TAU)
}

/// Open angular intervals of circle `i` covered by the other disks, as
/// `(start, end)` with `end > start`, possibly extending past `TAU`.
fn covered_intervals(disks: &[Disk], i: usize) -> Option<Vec<(f64, f64)>> {
    let Disk {
        center: ci,
        radius: ri,
    } = disks[i];
    let mut out = Vec::new();
    for (j, dj) in disks.iter().enumerate() {
        if j == i {
            continue;
        }
        let d = ci.dist(dj.center);
        if d >= ri + dj.radius || d + dj.radius <= ri {
            // Disjoint, or disk j sits inside disk i.
            continue;
        }
        if d + ri <= dj.radius {
            // Circle i lies inside disk j.
            return None;
        }
        let cos_half = ((ri * ri + d * d - dj.radius * dj.radius) / (2.0 * ri * d)).clamp(-1.0, 1.0);
        let half = cos_half.acos();
        let mid = wrap((dj.center - ci).angle());
        out.push((mid - half, mid + half));
    }
    Some(out)
}

fn uncovered_arcs(disks: &[Disk], i: usize) -> Vec<BoundaryArc> {
    let Some(mut covered) = covered_intervals(disks, i) else {
        return Vec::new();
    };
    if covered.is_empty() {
        return vec![BoundaryArc {
            disk: i,
            start: 0.0,
            sweep: TAU,
        }];
    }
    // Unroll onto [a, a + TAU) starting from the first interval and merge.
    for iv in covered.iter_mut() {
        let s = wrap(iv.0);
        *iv = (s, s + (iv.1 - iv.0));
    }
    covered.sort_by(|a, b| a.0.total_cmp(&b.0));
    let base = covered[0].0;
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (s, e) in covered {
        match merged.last_mut() {
            Some(last) if s < last.1 => last.1 = last.1.max(e),
            _ => merged.push((s, e)),
        }
    }
    let total_end = base + TAU;
    let mut arcs = Vec::new();
    for k in 0..merged.len() {
        let gap_start = merged[k].1;
        let gap_end = if k + 1 < merged.len() {
            merged[k + 1].0
        } else {
            total_end
        };
        if gap_end >= gap_start {
            // Zero-length gaps are tangency points, which belong to the boundary.
            arcs.push(BoundaryArc {
                disk: i,
                start: wrap(gap_start),
                sweep: gap_end - gap_start,
            });
        }
    }
    arcs
}

impl BallUnion {
    pub fn new(disks: Vec<Disk>) -> Result<Self> {
        if disks.is_empty() {
            return Err(Error::InvalidDomain("ball union needs at least one disk".into()));
        }
        for d in &disks {
            if !(d.radius > 0.0) || !d.radius.is_finite() {
                return Err(Error::InvalidDomain(format!(
                    "disk radius must be positive, got {}",
                    d.radius
                )));
            }
            if !d.center.x.is_finite() || !d.center.y.is_finite() {
                return Err(Error::NonFinite);
            }
        }
        // Open disks: the union is connected iff the overlap graph is.
        let n = disks.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if !seen[j] && disks[i].center.dist(disks[j].center) < disks[i].radius + disks[j].radius {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidDomain(
                "disk union is not connected (closures at most touch)".into(),
            ));
        }
        let arcs = (0..n).flat_map(|i| uncovered_arcs(&disks, i)).collect();
        Ok(Self { disks, arcs })
    }

    pub fn disks(&self) -> &[Disk] {
        &self.disks
    }

    pub fn arcs(&self) -> &[BoundaryArc] {
        &self.arcs
    }

    pub fn contains(&self, p: Vec2) -> bool {
        self.disks.iter().any(|d| p.dist(d.center) < d.radius)
    }

    fn in_arc(arc: &BoundaryArc, angle: f64) -> bool {
        wrap(angle - arc.start) <= arc.sweep
    }

    fn arc_point(&self, arc: &BoundaryArc, angle: f64) -> Vec2 {
        let d = self.disks[arc.disk];
        d.center + Vec2::polar(d.radius, angle)
    }

    fn arc_ends(&self, arc: &BoundaryArc) -> [Vec2; 2] {
        [
            self.arc_point(arc, arc.start),
            self.arc_point(arc, arc.start + arc.sweep),
        ]
    }

    /// Closest point of one arc to `p` and its distance. Ties at the circle
    /// centre resolve to the arc start.
    fn arc_nearest(&self, arc: &BoundaryArc, p: Vec2) -> (Vec2, f64) {
        let d = self.disks[arc.disk];
        let rel = p - d.center;
        let rho = rel.norm();
        if rho > 0.0 {
            let phi = rel.angle();
            if Self::in_arc(arc, phi) {
                return (d.center + rel * (d.radius / rho), (rho - d.radius).abs());
            }
        } else {
            return (self.arc_point(arc, arc.start), d.radius);
        }
        let [a, b] = self.arc_ends(arc);
        let (da, db) = (a.dist(p), b.dist(p));
        if da <= db {
            (a, da)
        } else {
            (b, db)
        }
    }

    fn arc_farthest(&self, arc: &BoundaryArc, p: Vec2) -> f64 {
        let d = self.disks[arc.disk];
        let rel = p - d.center;
        let rho = rel.norm();
        if rho == 0.0 {
            return d.radius;
        }
        if Self::in_arc(arc, rel.angle() + PI) {
            return rho + d.radius;
        }
        let [a, b] = self.arc_ends(arc);
        a.dist(p).max(b.dist(p))
    }

    /// Distance from any point of the plane to the boundary arc set.
    pub fn boundary_distance(&self, p: Vec2) -> f64 {
        self.arcs
            .iter()
            .map(|a| self.arc_nearest(a, p).1)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn farthest_boundary_distance(&self, p: Vec2) -> f64 {
        self.arcs
            .iter()
            .map(|a| self.arc_farthest(a, p))
            .fold(0.0, f64::max)
    }

    pub fn nearest_points(&self, p: Vec2, tol: f64) -> (Vec<Vec2>, f64) {
        let best = self.boundary_distance(p);
        let mut out: Vec<Vec2> = Vec::new();
        let push = |q: Vec2, out: &mut Vec<Vec2>| {
            if !out.iter().any(|o| o.dist(q) <= tol) {
                out.push(q);
            }
        };
        for arc in &self.arcs {
            let d = self.disks[arc.disk];
            if (p.dist(d.center) - 0.0).abs() <= tol && (d.radius - best).abs() <= tol {
                // Every point of the arc is a minimiser; report a finite sample.
                for k in 0..=16 {
                    let t = arc.start + arc.sweep * k as f64 / 16.0;
                    push(self.arc_point(arc, t), &mut out);
                }
                continue;
            }
            let (q, dist) = self.arc_nearest(arc, p);
            if dist - best <= tol {
                push(q, &mut out);
            }
        }
        (out, best)
    }

    /// Whether the segment stays in the union, checked on a fine sample with
    /// endpoint clearance. Used by path graphs only.
    pub fn segment_inside(&self, a: Vec2, b: Vec2) -> bool {
        const STEPS: usize = 8;
        (0..=STEPS).all(|k| self.contains(a.lerp(b, k as f64 / STEPS as f64)))
    }

    pub fn boundary_samples(&self, count: usize) -> Vec<Vec2> {
        let total: f64 = self
            .arcs
            .iter()
            .map(|a| a.sweep * self.disks[a.disk].radius)
            .sum();
        let mut out = Vec::with_capacity(count);
        for k in 0..count {
            let mut s = total * k as f64 / count as f64;
            for arc in &self.arcs {
                let len = arc.sweep * self.disks[arc.disk].radius;
                if s <= len {
                    let t = if len > 0.0 { s / len } else { 0.0 };
                    out.push(self.arc_point(arc, arc.start + t * arc.sweep));
                    break;
                }
                s -= len;
            }
        }
        out
    }

    /// Image under `p -> scale * R(angle) * (p - anchor)`.
    pub fn map(&self, f: impl Fn(Vec2) -> Vec2, scale: f64) -> Result<Self> {
        Self::new(
            self.disks
                .iter()
                .map(|d| Disk {
                    center: f(d.center),
                    radius: d.radius * scale,
                })
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disk(x: f64, y: f64, r: f64) -> Disk {
        Disk {
            center: Vec2::new(x, y),
            radius: r,
        }
    }

    fn neck(h: f64) -> BallUnion {
        BallUnion::new(vec![disk(0.0, 0.0, 1.0), disk(1.0, 0.0, h), disk(2.0, 0.0, 1.0)]).unwrap()
    }

    #[test]
    fn touching_disks_are_rejected() {
        assert!(BallUnion::new(vec![disk(0.0, 0.0, 1.0), disk(2.0, 0.0, 1.0)]).is_err());
        let g = BallUnion::new(vec![disk(0.0, 0.0, 1.0), disk(1.5, 0.0, 1.0)]).unwrap();
        assert!(g.contains(Vec2::new(0.75, 0.0)));
    }

    #[test]
    fn single_disk_is_a_full_circle() {
        let g = BallUnion::new(vec![disk(0.0, 0.0, 1.0)]).unwrap();
        assert_eq!(g.arcs().len(), 1);
        assert_eq!(g.boundary_distance(Vec2::new(0.25, 0.0)), 0.75);
        assert_eq!(g.boundary_distance(Vec2::ZERO), 1.0);
        assert_eq!(g.farthest_boundary_distance(Vec2::new(0.25, 0.0)), 1.25);
    }

    #[test]
    fn neck_distance_is_the_small_radius() {
        let g = neck(0.25);
        let d = g.boundary_distance(Vec2::new(1.0, 0.0));
        assert!((d - 0.25).abs() < 1e-15, "{d}");
        assert!((g.boundary_distance(Vec2::new(2.0, 0.0)) - 1.0).abs() < 1e-15);
        assert!((g.boundary_distance(Vec2::ZERO) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn covered_parts_are_not_boundary() {
        let g = neck(0.25);
        // (1, 0) is on the unit circle but inside the small disk.
        assert!(g.contains(Vec2::new(1.0, 0.0)));
        // Just inside the unit disk near the neck: the nearest boundary is the
        // junction with the small circle, not the covered point (1, 0).
        let p = Vec2::new(0.9, 0.0);
        let brute = g
            .boundary_samples(200_000)
            .into_iter()
            .map(|q| q.dist(p))
            .fold(f64::INFINITY, f64::min);
        assert!((g.boundary_distance(p) - brute).abs() < 1e-4);
        assert!(g.boundary_distance(p) > 0.1);
    }

    #[test]
    fn contained_disk_contributes_no_boundary() {
        let g = BallUnion::new(vec![disk(0.0, 0.0, 2.0), disk(0.5, 0.0, 0.5)]).unwrap();
        assert_eq!(g.arcs().len(), 1);
        assert_eq!(g.arcs()[0].disk, 0);
    }
}
