//! Line drawings of a report's tree set.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::error::Result;
use crate::report::AnalysisReport;

/// Screen units per pixel.
const SCALE: usize = 20;

type Point = (usize, usize);

/// Unit segments of the pixel grid separating `side` from the rest.
fn boundary_segments(side: u32, width: usize, height: usize) -> Vec<(Point, Point)> {
    let inside = |r: usize, c: usize| (side >> (r * width + c)) & 1 == 1;
    let mut segs = Vec::new();
    for r in 0..height {
        for c in 0..width {
            if c + 1 < width && inside(r, c) != inside(r, c + 1) {
                segs.push(((c + 1, r), (c + 1, r + 1)));
            }
            if r + 1 < height && inside(r, c) != inside(r + 1, c) {
                segs.push(((c, r + 1), (c + 1, r + 1)));
            }
        }
    }
    segs.sort_unstable();
    segs
}

/// Chain segments into polylines, starting from loose ends.
fn polylines(segs: &[(Point, Point)]) -> Vec<Vec<Point>> {
    let mut at: BTreeMap<Point, Vec<usize>> = BTreeMap::new();
    for (i, &(a, b)) in segs.iter().enumerate() {
        at.entry(a).or_default().push(i);
        at.entry(b).or_default().push(i);
    }
    let mut used = vec![false; segs.len()];
    let odd: Vec<Point> = at
        .iter()
        .filter(|(_, v)| v.len() % 2 == 1)
        .map(|(&p, _)| p)
        .collect();
    let all: Vec<Point> = at.keys().copied().collect();
    let mut out = Vec::new();
    for start in odd.into_iter().chain(all) {
        while let Some(&first) = at[&start].iter().find(|&&i| !used[i]) {
            let mut line = vec![start];
            let mut here = start;
            let mut next = Some(first);
            while let Some(i) = next {
                used[i] = true;
                let (a, b) = segs[i];
                here = if a == here { b } else { a };
                line.push(here);
                next = at[&here].iter().copied().find(|&j| !used[j]);
            }
            out.push(line);
        }
    }
    out
}

/// SVG 1.1 drawing: one or more polylines per tree-set line, with lower
/// orders drawn thicker.
pub fn render_svg(report: &AnalysisReport) -> Result<String> {
    let (w, h) = (report.picture.width, report.picture.height);
    let max = report.tree_set.iter().map(|l| l.order).max().unwrap_or(0);
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {w} {h}">"#,
        w * SCALE,
        h * SCALE
    );
    let _ = writeln!(
        svg,
        r#"<rect x="0" y="0" width="{w}" height="{h}" fill="white" stroke="gray" stroke-width="0.02"/>"#
    );
    for line in &report.tree_set {
        let side = report.decode(&line.side)?;
        let width = 0.05 * (max + 1 - line.order) as f64;
        for poly in polylines(&boundary_segments(side.bits(), w, h)) {
            let pts: Vec<String> = poly.iter().map(|(x, y)| format!("{x},{y}")).collect();
            let _ = writeln!(
                svg,
                r#"<polyline points="{}" fill="none" stroke="black" stroke-width="{width:.2}" stroke-linecap="round"/>"#,
                pts.join(" ")
            );
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Plain gray map counting, per pixel, the tree-set lines whose boundary
/// touches it.
pub fn render_mask(report: &AnalysisReport) -> Result<String> {
    let (w, h) = (report.picture.width, report.picture.height);
    let mut counts = vec![0usize; w * h];
    for line in &report.tree_set {
        let side = report.decode(&line.side)?.bits();
        let inside = |p: usize| (side >> p) & 1 == 1;
        for (p, count) in counts.iter_mut().enumerate() {
            let (r, c) = (p / w, p % w);
            let neighbours = [
                (c > 0).then(|| p - 1),
                (c + 1 < w).then(|| p + 1),
                (r > 0).then(|| p - w),
                (r + 1 < h).then(|| p + w),
            ];
            if neighbours.into_iter().flatten().any(|q| inside(q) != inside(p)) {
                *count += 1;
            }
        }
    }
    let maxval = report.tree_set.len().max(1);
    let mut out = format!("P2\n# tree-set lines touching each pixel\n{w} {h}\n{maxval}\n");
    for row in counts.chunks(w) {
        let cells: Vec<String> = row.iter().map(usize::to_string).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    Ok(out)
}
