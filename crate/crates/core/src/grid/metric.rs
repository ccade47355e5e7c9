//! Distances between cell sets.

use super::{Cell, CellRect, Level, Mask};
use crate::error::{Error, Result};

/// Hausdorff distance between two cell sets, measured between cell centers.
pub fn hausdorff_distance(a: &[Cell], b: &[Cell], level: Level) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyInput(
            "hausdorff_distance needs two nonempty sets",
        ));
    }
    let d2 = directed_sq(a, b).max(directed_sq(b, a));
    Ok((d2 as f64).sqrt() * level.cell_size())
}

/// Largest squared center distance from a cell of `a` to its nearest cell of `b`,
/// in cell units.
fn directed_sq(a: &[Cell], b: &[Cell]) -> i64 {
    let frame = CellRect::bounding(b);
    let mask = Mask::from_cells(frame, b);
    a.iter().map(|&c| nearest_sq(&mask, c)).max().unwrap_or(0)
}

/// Squared distance from `c` to the nearest set cell of `mask` (nonempty).
fn nearest_sq(mask: &Mask, c: Cell) -> i64 {
    let f = mask.frame;
    // Distance from c to the frame bounds the first ring worth scanning.
    let dx = (f.i0 - c.i).max(c.i - (f.i1 - 1)).max(0);
    let dy = (f.j0 - c.j).max(c.j - (f.j1 - 1)).max(0);
    let mut r = dx.max(dy);
    let max_r = (c.i - f.i0)
        .abs()
        .max((c.i - f.i1).abs())
        .max((c.j - f.j0).abs())
        .max((c.j - f.j1).abs());
    let mut best = i64::MAX;
    while r <= max_r {
        // Any cell on ring r is at least r away; stop once that exceeds the best.
        if r * r > best {
            break;
        }
        for_ring(c, r, |p| {
            if mask.get(p) {
                let d = (p.i - c.i).pow(2) + (p.j - c.j).pow(2);
                best = best.min(d);
            }
        });
        r += 1;
    }
    best
}

fn for_ring(c: Cell, r: i64, mut f: impl FnMut(Cell)) {
    if r == 0 {
        f(c);
        return;
    }
    for i in -r..=r {
        f(Cell::new(c.i + i, c.j - r));
        f(Cell::new(c.i + i, c.j + r));
    }
    for j in (-r + 1)..r {
        f(Cell::new(c.i - r, c.j + j));
        f(Cell::new(c.i + r, c.j + j));
    }
}

/// True iff every cell of `a` has a cell of `b_mask` within `radius` cells
/// (center distance), i.e. the directed Hausdorff distance is at most `radius`.
pub fn directed_hausdorff_within(a: &[Cell], b_mask: &Mask, radius: f64) -> bool {
    let r = radius.floor() as i64;
    let r2 = radius * radius;
    a.iter().all(|&c| {
        if b_mask.get(c) {
            return true;
        }
        for dj in -r..=r {
            for di in -r..=r {
                if ((di * di + dj * dj) as f64) <= r2 && b_mask.get(Cell::new(c.i + di, c.j + dj)) {
                    return true;
                }
            }
        }
        false
    })
}

/// Euclidean distance between two closed cell boxes, in cell units.
pub fn box_distance_cells(a: Cell, b: Cell) -> f64 {
    let gx = ((a.i - b.i).abs() - 1).max(0) as f64;
    let gy = ((a.j - b.j).abs() - 1).max(0) as f64;
    (gx * gx + gy * gy).sqrt()
}

/// Diameter of the union of the cell boxes, in scene units.
pub fn diameter(a: &[Cell], level: Level) -> Result<f64> {
    if a.is_empty() {
        return Err(Error::EmptyInput("diameter needs a nonempty set"));
    }
    Ok(diameter_cells(a, level))
}

/// Like [`diameter`] but returns 0 for the empty set.
pub fn diameter_cells(a: &[Cell], level: Level) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    // Only the extreme cells of each row can contribute hull corners.
    let mut rows: std::collections::BTreeMap<i64, (i64, i64)> = Default::default();
    for c in a {
        let e = rows.entry(c.j).or_insert((c.i, c.i));
        e.0 = e.0.min(c.i);
        e.1 = e.1.max(c.i);
    }
    let mut pts: Vec<(i64, i64)> = Vec::with_capacity(rows.len() * 4);
    for (&j, &(lo, hi)) in &rows {
        pts.extend([(lo, j), (lo, j + 1), (hi + 1, j), (hi + 1, j + 1)]);
    }
    let hull = convex_hull(pts);
    let mut best = 0i64;
    for (k, p) in hull.iter().enumerate() {
        for q in &hull[k + 1..] {
            best = best.max((p.0 - q.0).pow(2) + (p.1 - q.1).pow(2));
        }
    }
    (best as f64).sqrt() * level.cell_size()
}

fn convex_hull(mut pts: Vec<(i64, i64)>) -> Vec<(i64, i64)> {
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    }
    let mut lower: Vec<(i64, i64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(i64, i64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}
