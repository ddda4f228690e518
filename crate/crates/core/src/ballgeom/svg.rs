use std::fmt::Write;

use super::contour::Polyline;
use super::grid::RegionGrid;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

fn num(v: f64) -> String {
    // Avoid "-0.000000000000".
    let s = format!("{v:.12}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

/// SVG 1.1 drawing of traced boundaries in domain coordinates with the y-axis
/// pointing up. The view box is the grid's bounding square padded by 5%.
/// Loops are coloured by region component; `marks` are drawn as dots.
pub fn render_svg(grid: &RegionGrid, loops: &[Polyline], marks: &[crate::point::Vec2]) -> String {
    let (lo, hi) = grid.bbox();
    let pad = 0.05 * (hi.x - lo.x).max(hi.y - lo.y);
    let (x0, y0) = (lo.x - pad, -(hi.y + pad));
    let (w, h) = (hi.x - lo.x + 2.0 * pad, hi.y - lo.y + 2.0 * pad);
    let stroke = w / 400.0;

    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{} {} {} {}" width="800" height="800">"#,
        num(x0),
        num(y0),
        num(w),
        num(h)
    )
    .unwrap();
    for line in loops {
        let mut d = String::new();
        for (k, p) in line.points.iter().enumerate() {
            let cmd = if k == 0 { 'M' } else { 'L' };
            write!(d, "{cmd}{} {} ", num(p.x), num(-p.y)).unwrap();
        }
        d.push('Z');
        writeln!(
            out,
            r#"<path d="{d}" fill="none" stroke="{}" stroke-width="{}"/>"#,
            PALETTE[line.component % PALETTE.len()],
            num(stroke)
        )
        .unwrap();
    }
    for p in marks {
        writeln!(
            out,
            r#"<circle cx="{}" cy="{}" r="{}" fill="black"/>"#,
            num(p.x),
            num(-p.y),
            num(2.0 * stroke)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}
