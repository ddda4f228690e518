use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;

use super::MetricBall;
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::metric::{JBall, Radius};
use crate::point::{Point, Vec2};

/// Cells across the outer-bound diameter when no spacing is given.
pub const DEFAULT_RESOLUTION: usize = 1024;

const MAX_CELLS: usize = 1 << 26;

/// Raster of a ball. Cell centres are `center + (i - k, j - k) h`, so the
/// centre of the ball is always a cell centre, and the two outermost rings of
/// cells lie outside the Euclidean outer bound.
#[derive(Clone, Debug)]
pub struct RegionGrid {
    origin: Vec2,
    spacing: f64,
    n: usize,
    center: Vec2,
    radius: f64,
    extent: f64,
    excess: Vec<f64>,
    cells: Vec<bool>,
}

/// Spacing giving [`DEFAULT_RESOLUTION`] cells across `2 * outer`.
pub fn default_spacing(outer: f64) -> f64 {
    2.0 * outer / DEFAULT_RESOLUTION as f64
}

impl RegionGrid {
    pub fn from_ball<B: MetricBall + ?Sized>(ball: &B, h: f64) -> Result<Self> {
        let extent = ball.extent();
        let max = extent / 64.0;
        if !(h > 0.0) || h > max {
            return Err(Error::ResolutionTooCoarse { spacing: h, max });
        }
        let k = (extent / h).ceil() as usize + 1;
        let n = 2 * k + 1;
        if n * n > MAX_CELLS {
            return Err(Error::InvalidArgument(format!(
                "grid of {n}x{n} cells is too large"
            )));
        }
        let center = ball.center();
        let origin = Vec2::new(center.x - k as f64 * h, center.y - k as f64 * h);
        let mut excess = vec![0.0; n * n];
        excess.par_chunks_mut(n).enumerate().for_each(|(j, row)| {
            let y = origin.y + j as f64 * h;
            for (i, v) in row.iter_mut().enumerate() {
                *v = ball.excess(Vec2::new(origin.x + i as f64 * h, y));
            }
        });
        let cells = excess.iter().map(|v| *v < 0.0).collect();
        Ok(Self {
            origin,
            spacing: h,
            n,
            center,
            radius: ball.radius(),
            extent,
            excess,
            cells,
        })
    }

    /// Centre of cell `(0, 0)`.
    pub fn origin(&self) -> Point {
        Point::from(self.origin)
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Cells per side.
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn center(&self) -> Vec2 {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Radius of the Euclidean disk containing the ball.
    pub fn extent(&self) -> f64 {
        self.extent
    }

    /// Square `center +- extent`, which contains the ball.
    pub fn bbox(&self) -> (Vec2, Vec2) {
        let (c, r) = (self.center, self.extent);
        (Vec2::new(c.x - r, c.y - r), Vec2::new(c.x + r, c.y + r))
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.n + i
    }

    #[inline]
    pub fn cell(&self, i: usize, j: usize) -> bool {
        self.cells[self.index(i, j)]
    }

    /// `distance - radius` at the cell centre; infinite outside the domain.
    #[inline]
    pub fn excess(&self, i: usize, j: usize) -> f64 {
        self.excess[self.index(i, j)]
    }

    pub fn cell_center(&self, i: usize, j: usize) -> Vec2 {
        Vec2::new(
            self.origin.x + i as f64 * self.spacing,
            self.origin.y + j as f64 * self.spacing,
        )
    }

    pub fn cells(&self) -> &[bool] {
        &self.cells
    }

    pub fn true_count(&self) -> usize {
        self.cells.iter().filter(|c| **c).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.cells.iter().any(|c| *c)
    }

    /// Cell count times cell area.
    pub fn area(&self) -> f64 {
        self.true_count() as f64 * self.spacing * self.spacing
    }
}

/// Raster of `B_j(x, M)`. `h = None` uses [`default_spacing`].
pub fn extract_region(domain: &Domain, x: &Point, m: Radius, h: Option<f64>) -> Result<RegionGrid> {
    let ball = JBall::new(domain, x, m)?;
    let h = h.unwrap_or_else(|| default_spacing(ball.extent()));
    RegionGrid::from_ball(&ball, h)
}

const N4: [(isize, isize); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];
const N8: [(isize, isize); 8] = [
    (1, 0),
    (-1, 0),
    (0, 1),
    (0, -1),
    (1, 1),
    (1, -1),
    (-1, 1),
    (-1, -1),
];

/// Labels the components of `mask` on an `n x n` grid; `u32::MAX` marks
/// cells outside the mask. Returns the labels and the component count.
fn flood(n: usize, mask: &[bool], nbrs: &[(isize, isize)]) -> (Vec<u32>, usize) {
    let mut labels = vec![u32::MAX; n * n];
    let mut count = 0u32;
    let mut queue = VecDeque::new();
    for start in 0..n * n {
        if !mask[start] || labels[start] != u32::MAX {
            continue;
        }
        labels[start] = count;
        queue.push_back(start);
        while let Some(c) = queue.pop_front() {
            let (i, j) = ((c % n) as isize, (c / n) as isize);
            for (di, dj) in nbrs {
                let (a, b) = (i + di, j + dj);
                if a < 0 || b < 0 || a >= n as isize || b >= n as isize {
                    continue;
                }
                let q = b as usize * n + a as usize;
                if mask[q] && labels[q] == u32::MAX {
                    labels[q] = count;
                    queue.push_back(q);
                }
            }
        }
        count += 1;
    }
    (labels, count as usize)
}

/// Labels of the 4-connected components of the true cells.
pub fn label_components(grid: &RegionGrid) -> (Vec<u32>, usize) {
    flood(grid.n, &grid.cells, &N4)
}

/// Components whose every cell touches the mask boundary are rasterisation
/// debris (cusp slivers at tangencies); a component counts when it holds a
/// cell whose 4 neighbours all lie in the same mask.
fn core_components(n: usize, mask: &[bool], labels: &[u32], count: usize) -> Vec<bool> {
    let mut has_core = vec![false; count];
    for j in 1..n - 1 {
        for i in 1..n - 1 {
            let c = j * n + i;
            if mask[c] && N4.iter().all(|(di, dj)| {
                mask[(j as isize + dj) as usize * n + (i as isize + di) as usize]
            }) {
                has_core[labels[c] as usize] = true;
            }
        }
    }
    has_core
}

/// Connectivity of a rasterised ball.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Topology {
    /// 4-connected components of true cells containing an interior cell.
    pub components: usize,
    /// All 4-connected components of true cells.
    pub raw_components: usize,
    /// 8-connected false components away from the frame, containing an
    /// interior cell.
    pub holes: usize,
    pub raw_holes: usize,
    /// The complement is one 8-connected piece reaching the frame.
    pub simply_connected: bool,
}

pub fn topology_check(grid: &RegionGrid) -> Result<Topology> {
    if grid.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let n = grid.n;
    let (labels, raw) = label_components(grid);
    let components = core_components(n, &grid.cells, &labels, raw)
        .iter()
        .filter(|c| **c)
        .count();

    let outside: Vec<bool> = grid.cells.iter().map(|c| !c).collect();
    let (olabels, ocount) = flood(n, &outside, &N8);
    // Cell (0, 0) is outside the ball, so its component is the one at the frame.
    let frame = olabels[0] as usize;
    let raw_holes = ocount - 1;
    let holes = core_components(n, &outside, &olabels, ocount)
        .iter()
        .enumerate()
        .filter(|(l, c)| **c && *l != frame)
        .count();
    Ok(Topology {
        components,
        raw_components: raw,
        holes,
        raw_holes,
        simply_connected: holes == 0,
    })
}

/// Level-set analysis of `{z : j(x, z) = M}` on a grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SphereAnalysis {
    /// 8-connected components of the band around the level set.
    pub components: usize,
    /// Centroids of components with diameter below `3h`.
    pub isolated_points: Vec<Vec2>,
    /// Centroids of components with no ball cell within two cells; such
    /// points belong to the closed ball but not to the closure of the open one.
    pub detached_points: Vec<Vec2>,
    pub closure_equals_closed_ball: bool,
    pub band_cells: usize,
    pub spacing: f64,
}

/// Band cells satisfy `|f| <= band * h * |grad f|`, `f = j - M`, with the
/// gradient from one-sided differences, so the band is about `band` cells
/// wide on each side of the level set wherever `f` is smooth. Isolated
/// minima with `f = 0` on a cell centre stay in the band.
pub fn sphere_components_grid(grid: &RegionGrid, band: f64) -> SphereAnalysis {
    let n = grid.n;
    let h = grid.spacing;
    let f = &grid.excess;
    // Smaller one-sided slope per axis: next to the domain boundary `f`
    // blows up on one side, which must not widen the band.
    let slope = |c: usize, a: Option<usize>, b: Option<usize>| -> Option<f64> {
        [a, b]
            .into_iter()
            .flatten()
            .map(|q| f[q])
            .filter(|v| v.is_finite())
            .map(|v| (v - f[c]).abs() / h)
            .min_by(f64::total_cmp)
    };
    let mask: Vec<bool> = (0..n * n)
        .into_par_iter()
        .map(|c| {
            if !f[c].is_finite() {
                return false;
            }
            let (i, j) = (c % n, c / n);
            let left = (i > 0).then(|| c - 1);
            let right = (i + 1 < n).then(|| c + 1);
            let down = (j > 0).then(|| c - n);
            let up = (j + 1 < n).then(|| c + n);
            match (slope(c, left, right), slope(c, down, up)) {
                (Some(gx), Some(gy)) => f[c].abs() <= band * h * gx.hypot(gy),
                _ => false,
            }
        })
        .collect();

    let (labels, count) = flood(n, &mask, &N8);
    let mut lo = vec![(usize::MAX, usize::MAX); count];
    let mut hi = vec![(0usize, 0usize); count];
    let mut sum = vec![(0.0f64, 0.0f64, 0usize); count];
    let mut near_ball = vec![false; count];
    for c in 0..n * n {
        if !mask[c] {
            continue;
        }
        let l = labels[c] as usize;
        let (i, j) = (c % n, c / n);
        lo[l] = (lo[l].0.min(i), lo[l].1.min(j));
        hi[l] = (hi[l].0.max(i), hi[l].1.max(j));
        let p = grid.cell_center(i, j);
        sum[l] = (sum[l].0 + p.x, sum[l].1 + p.y, sum[l].2 + 1);
        if !near_ball[l] {
            let (i0, j0) = (i.saturating_sub(2), j.saturating_sub(2));
            let (i1, j1) = ((i + 2).min(n - 1), (j + 2).min(n - 1));
            near_ball[l] = (j0..=j1).any(|b| (i0..=i1).any(|a| grid.cells[b * n + a]));
        }
    }
    let centroid = |l: usize| Vec2::new(sum[l].0 / sum[l].2 as f64, sum[l].1 / sum[l].2 as f64);
    let isolated_points = (0..count)
        .filter(|&l| {
            let w = (hi[l].0 - lo[l].0) as f64 * h;
            let t = (hi[l].1 - lo[l].1) as f64 * h;
            w.hypot(t) < 3.0 * h
        })
        .map(centroid)
        .collect();
    let detached_points: Vec<Vec2> = (0..count).filter(|&l| !near_ball[l]).map(centroid).collect();
    SphereAnalysis {
        components: count,
        isolated_points,
        closure_equals_closed_ball: detached_points.is_empty(),
        detached_points,
        band_cells: mask.iter().filter(|m| **m).count(),
        spacing: h,
    }
}

/// Sphere analysis of `B_j(x, M)`; `h = None` uses [`default_spacing`].
pub fn sphere_components(
    domain: &Domain,
    x: &Point,
    m: Radius,
    band: f64,
    h: Option<f64>,
) -> Result<SphereAnalysis> {
    if !(band > 0.0) {
        return Err(Error::InvalidArgument(format!("band must be positive, got {band}")));
    }
    let grid = extract_region(domain, x, m, h)?;
    Ok(sphere_components_grid(&grid, band))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(m: f64) -> Radius {
        Radius::new(m).unwrap()
    }

    #[test]
    fn centre_is_a_cell_and_frame_is_empty() {
        let g = Domain::punctured_plane();
        let grid = extract_region(&g, &Point::xy(1.0, 0.0), r(0.5), None).unwrap();
        let k = (grid.size() - 1) / 2;
        assert_eq!(grid.cell_center(k, k), Vec2::new(1.0, 0.0));
        assert!(grid.cell(k, k));
        let n = grid.size();
        for t in 0..n {
            for (i, j) in [(t, 0), (t, 1), (0, t), (1, t), (t, n - 1), (t, n - 2), (n - 1, t), (n - 2, t)] {
                assert!(!grid.cell(i, j));
            }
        }
    }

    #[test]
    fn coarse_spacing_is_rejected() {
        let g = Domain::punctured_plane();
        let err = extract_region(&g, &Point::xy(1.0, 0.0), r(0.5), Some(0.1)).unwrap_err();
        assert!(matches!(err, Error::ResolutionTooCoarse { .. }));
    }

    #[test]
    fn small_ball_is_one_simply_connected_piece() {
        let g = Domain::punctured_plane();
        let grid = extract_region(&g, &Point::xy(1.0, 0.0), r(0.01), None).unwrap();
        let t = topology_check(&grid).unwrap();
        assert_eq!((t.components, t.raw_components, t.simply_connected), (1, 1, true));
    }

    #[test]
    fn annulus_has_a_hole() {
        let g = Domain::punctured_plane();
        let grid = extract_region(&g, &Point::xy(1.0, 0.0), r(3f64.ln() + 0.2), None).unwrap();
        let t = topology_check(&grid).unwrap();
        assert_eq!((t.components, t.holes, t.simply_connected), (1, 1, false));
    }
}
