//! Separating loops from offset-row brick tilings.
//!
//! Bricks are `r x r` with every row shifted by `r / 2`. Working on the lattice
//! of half bricks (columns `r / 2` wide, rows `r` high), brick `(m, n)` covers
//! columns `2m + n` and `2m + n + 1` of row `n`. Two half bricks that share
//! only a corner always belong to bricks of different parity, so unions of
//! bricks have no pinch points and the boundary of the unbounded
//! complementary component is a single simple loop.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{
    label_components, label_mask, Cell, CellRect, Connectivity, GridCompactum, Level, Mask,
};

/// Closed polyline along grid lines, listed counterclockwise from its lowest,
/// leftmost corner. Only corners are kept.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparatingLoop {
    pub level: Level,
    /// Grid points in cell units.
    pub vertices: Vec<(i64, i64)>,
    /// Brick size actually used, in cells.
    pub brick_cells: i64,
}

impl SeparatingLoop {
    /// Vertices in scene units.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let h = self.level.cell_size();
        self.vertices
            .iter()
            .map(|&(x, y)| (x as f64 * h, y as f64 * h))
            .collect()
    }

    /// Unit grid steps walked by the loop, in order.
    pub fn unit_points(&self) -> Vec<(i64, i64)> {
        let n = self.vertices.len();
        let mut out = Vec::new();
        for k in 0..n {
            let (a, b) = (self.vertices[k], self.vertices[(k + 1) % n]);
            let (dx, dy) = ((b.0 - a.0).signum(), (b.1 - a.1).signum());
            let mut p = a;
            while p != b {
                out.push(p);
                p = (p.0 + dx, p.1 + dy);
            }
        }
        out
    }

    /// Closed, axis-parallel, and no grid point visited twice.
    pub fn is_simple_closed(&self) -> bool {
        let n = self.vertices.len();
        if n < 4 {
            return false;
        }
        for k in 0..n {
            let (a, b) = (self.vertices[k], self.vertices[(k + 1) % n]);
            if (a.0 != b.0) == (a.1 != b.1) {
                return false;
            }
        }
        let pts = self.unit_points();
        let set: BTreeSet<(i64, i64)> = pts.iter().copied().collect();
        set.len() == pts.len()
    }

    /// Winding number of the loop around the center of `c`.
    pub fn winding(&self, c: Cell) -> i32 {
        // Doubled coordinates keep the center off every edge.
        let (px, py) = (2 * c.i + 1, 2 * c.j + 1);
        let n = self.vertices.len();
        let mut w = 0;
        for k in 0..n {
            let (a, b) = (self.vertices[k], self.vertices[(k + 1) % n]);
            let (ax, ay, bx, by) = (2 * a.0, 2 * a.1, 2 * b.0, 2 * b.1);
            if ax != bx || ax <= px {
                continue;
            }
            // Vertical edge to the right of the point.
            if ay < py && by > py {
                w += 1;
            } else if ay > py && by < py {
                w -= 1;
            }
        }
        w
    }

    /// No grid point of the loop touches a closed cell of `k`.
    pub fn disjoint_from(&self, k: &GridCompactum) -> bool {
        self.unit_points().iter().all(|&(x, y)| {
            [(x - 1, y - 1), (x, y - 1), (x - 1, y), (x, y)]
                .iter()
                .all(|&(i, j)| !k.contains(Cell::new(i, j)))
        })
    }
}

/// Bricks whose closed box meets the closed box of `c`; `w` is half the
/// brick size in cells.
fn bricks_of(c: Cell, w: i64) -> impl Iterator<Item = (i64, i64)> {
    let r = 2 * w;
    let n0 = (c.j - r).div_euclid(r) + i64::from((c.j - r).rem_euclid(r) != 0);
    let n1 = (c.j + 1).div_euclid(r);
    (n0..=n1).flat_map(move |n| {
        // x-range of brick (m, n) is [2mw + nw, 2mw + nw + 2w].
        let lo = c.i - n * w - r;
        let hi = c.i + 1 - n * w;
        let m0 = lo.div_euclid(r) + i64::from(lo.rem_euclid(r) != 0);
        let m1 = hi.div_euclid(r);
        (m0..=m1).map(move |m| (m, n))
    })
}

/// Simple closed loop separating component `p` of `k` from component `q`,
/// traced along the outer boundary of the bricks meeting `p`'s component.
///
/// `r` is rounded down to an even number of cells (at least two); if the
/// thickened component closes off `q`, the brick size is halved until it
/// reaches two cells.
pub fn separating_curve(k: &GridCompactum, p: usize, q: usize, r: f64) -> Result<SeparatingLoop> {
    let lab = label_components(k, Connectivity::Eight);
    if p >= lab.len() || q >= lab.len() || p == q {
        return Err(Error::Precondition(format!(
            "need two distinct component ids below {}, got {p} and {q}",
            lab.len()
        )));
    }
    let h = k.level.cell_size();
    let mut w = ((r / h + 1e-9) / 2.0).floor() as i64;
    if w < 1 {
        return Err(Error::InvalidParams(format!(
            "brick size {r} is below two cells ({})",
            2.0 * h
        )));
    }
    let e = &lab.components[p].cells;
    let q_cells = &lab.components[q].cells;
    if !in_unbounded_complement(e, q_cells[0]) {
        return Err(Error::NotInUnboundedComponent);
    }
    loop {
        match trace(k, &lab, p, q_cells, w)? {
            Some(vertices) => {
                return Ok(SeparatingLoop {
                    level: k.level,
                    vertices,
                    brick_cells: 2 * w,
                })
            }
            None if w > 1 => w /= 2,
            None => {
                return Err(Error::Precondition(
                    "the thickened component encloses the second one at every brick size".into(),
                ))
            }
        }
    }
}

fn in_unbounded_complement(e: &[Cell], c: Cell) -> bool {
    let frame = CellRect::bounding(e).expand(1);
    if !frame.contains(c) {
        return true;
    }
    let mask = Mask::from_cells(frame, e).complement();
    let (labels, _) = label_mask(&mask, Connectivity::Four);
    // The frame corner is outside e and reaches infinity.
    labels[frame.index(c)] == labels[0]
}

/// Loop for half-brick width `w`, or `None` if `q` is enclosed.
fn trace(
    k: &GridCompactum,
    lab: &crate::grid::ComponentLabeling,
    p: usize,
    q_cells: &[Cell],
    w: i64,
) -> Result<Option<Vec<(i64, i64)>>> {
    let mut bricks: BTreeSet<(i64, i64)> = BTreeSet::new();
    for &c in &lab.components[p].cells {
        bricks.extend(bricks_of(c, w));
    }
    for c in k.cells() {
        if lab.label(c) == Some(p) {
            continue;
        }
        if bricks_of(c, w).any(|b| bricks.contains(&b)) {
            return Err(Error::BrickMeetsBothSides);
        }
    }
    // Half-brick raster: pixel (u, n) spans x in [u w, (u + 1) w], y in [2 n w, 2 (n + 1) w].
    let pixels: Vec<Cell> = bricks
        .iter()
        .flat_map(|&(m, n)| [Cell::new(2 * m + n, n), Cell::new(2 * m + n + 1, n)])
        .collect();
    let frame = CellRect::bounding(&pixels).expand(1);
    let filled = Mask::from_cells(frame, &pixels);
    let (labels, _) = label_mask(&filled.complement(), Connectivity::Four);
    let outside = labels[0];
    let is_out = |u: i64, n: i64| {
        let c = Cell::new(u, n);
        !frame.contains(c) || labels[frame.index(c)] == outside
    };
    for c in q_cells {
        // Pixel holding the cell center.
        let u = (2 * c.i + 1).div_euclid(2 * w);
        let n = (2 * c.j + 1).div_euclid(4 * w);
        if !is_out(u, n) {
            return Ok(None);
        }
    }
    // Directed boundary edges with the bricks on the left, in pixel corners.
    let mut next: HashMap<(i64, i64), (i64, i64)> = HashMap::new();
    for px in &pixels {
        let (u, n) = (px.i, px.j);
        if is_out(u, n - 1) {
            next.insert((u, n), (u + 1, n));
        }
        if is_out(u + 1, n) {
            next.insert((u + 1, n), (u + 1, n + 1));
        }
        if is_out(u, n + 1) {
            next.insert((u + 1, n + 1), (u, n + 1));
        }
        if is_out(u - 1, n) {
            next.insert((u, n + 1), (u, n));
        }
    }
    let start = pixels.iter().min().map(|c| (c.i, c.j)).unwrap();
    let mut corners = vec![start];
    let mut at = start;
    loop {
        let nx = next[&at];
        if nx == start {
            break;
        }
        corners.push(nx);
        at = nx;
        if corners.len() > next.len() {
            unreachable!("boundary walk did not close");
        }
    }
    let to_grid = |(u, n): (i64, i64)| (u * w, n * 2 * w);
    let len = corners.len();
    let vertices: Vec<(i64, i64)> = (0..len)
        .filter(|&t| {
            let a = corners[(t + len - 1) % len];
            let b = corners[t];
            let c = corners[(t + 1) % len];
            (b.0 - a.0, b.1 - a.1) != (c.0 - b.0, c.1 - b.1)
        })
        .map(|t| to_grid(corners[t]))
        .collect();
    Ok(Some(vertices))
}
