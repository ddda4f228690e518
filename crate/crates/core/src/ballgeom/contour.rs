use std::collections::HashMap;

use serde::Serialize;

use super::grid::{label_components, RegionGrid};
use crate::error::{Error, Result};
use crate::point::Vec2;

/// Closed polyline; the last vertex connects back to the first.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Polyline {
    pub points: Vec<Vec2>,
    /// Label of the region component on the inner side.
    pub component: usize,
}

impl Polyline {
    /// Shoelace area, positive for counterclockwise loops.
    pub fn signed_area(&self) -> f64 {
        let n = self.points.len();
        (0..n)
            .map(|k| self.points[k].cross(self.points[(k + 1) % n]))
            .sum::<f64>()
            / 2.0
    }

    pub fn length(&self) -> f64 {
        let n = self.points.len();
        (0..n).map(|k| self.points[k].dist(self.points[(k + 1) % n])).sum()
    }
}

/// Marching squares on the cell-centre lattice with linear interpolation of
/// `distance - radius`. Saddles separate the inside corners, matching
/// 4-connectivity of the region.
pub fn trace_boundary(grid: &RegionGrid) -> Result<Vec<Polyline>> {
    if grid.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let n = grid.size();
    let (labels, _) = label_components(grid);
    // Edge ids: 2 * node for the edge to the right, 2 * node + 1 for the edge up.
    let h_edge = |i: usize, j: usize| 2 * (j * n + i);
    let v_edge = |i: usize, j: usize| 2 * (j * n + i) + 1;
    let crossing = |e: usize| -> (Vec2, usize) {
        let node = e / 2;
        let (i, j) = (node % n, node / n);
        let (a, b) = if e.is_multiple_of(2) { ((i, j), (i + 1, j)) } else { ((i, j), (i, j + 1)) };
        let (fa, fb) = (grid.excess(a.0, a.1), grid.excess(b.0, b.1));
        let t = if fa.is_finite() && fb.is_finite() { fa / (fa - fb) } else { 0.5 };
        let inside = if fa < 0.0 { a } else { b };
        let p = grid.cell_center(a.0, a.1).lerp(grid.cell_center(b.0, b.1), t);
        (p, labels[grid.index(inside.0, inside.1)] as usize)
    };

    let mut segments: Vec<[usize; 2]> = Vec::new();
    for j in 0..n - 1 {
        for i in 0..n - 1 {
            let inside = [
                grid.cell(i, j),
                grid.cell(i + 1, j),
                grid.cell(i + 1, j + 1),
                grid.cell(i, j + 1),
            ];
            let edges = [h_edge(i, j), v_edge(i + 1, j), h_edge(i, j + 1), v_edge(i, j)];
            let crossed: Vec<usize> = (0..4).filter(|&k| inside[k] != inside[(k + 1) % 4]).collect();
            match crossed.len() {
                0 => {}
                2 => segments.push([edges[crossed[0]], edges[crossed[1]]]),
                _ => {
                    // Corner k lies between edges k - 1 and k.
                    for k in (0..4).filter(|&k| inside[k]) {
                        segments.push([edges[(k + 3) % 4], edges[k]]);
                    }
                }
            }
        }
    }

    let mut by_edge: HashMap<usize, Vec<usize>> = HashMap::with_capacity(segments.len());
    for (s, seg) in segments.iter().enumerate() {
        for e in seg {
            by_edge.entry(*e).or_default().push(s);
        }
    }
    let mut used = vec![false; segments.len()];
    let mut loops = Vec::new();
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let first = segments[start][0];
        let (p, component) = crossing(first);
        let mut points = vec![p];
        let mut seg = start;
        let mut edge = segments[start][1];
        while edge != first {
            points.push(crossing(edge).0);
            let next = by_edge[&edge]
                .iter()
                .copied()
                .find(|&s| s != seg && !used[s])
                .expect("every crossed edge borders two squares");
            used[next] = true;
            let [a, b] = segments[next];
            edge = if a == edge { b } else { a };
            seg = next;
        }
        loops.push(Polyline { points, component });
    }
    Ok(loops)
}
