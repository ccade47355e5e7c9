//! Cut wires between two subsets and crossing paths through rectangles.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{label_mask, Cell, CellRect, Connectivity, Mask};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CutWire {
    /// An 8-connected component of `X` meeting both `A` and `B`.
    Connected(Vec<Cell>),
    /// `X = x1 ∪ x2` with no 8-adjacency between them, `A ⊆ x1`, `B ⊆ x2`.
    Separated { x1: Vec<Cell>, x2: Vec<Cell> },
}

fn sorted(cells: &[Cell]) -> Vec<Cell> {
    let mut v = cells.to_vec();
    v.sort();
    v.dedup();
    v
}

/// Either a component of `x` joining `a` to `b` (the first in scan order), or
/// the separation of `x` into the components meeting `a` and the rest.
pub fn cut_wire(x: &[Cell], a: &[Cell], b: &[Cell]) -> Result<CutWire> {
    let x = sorted(x);
    let frame = CellRect::bounding(&x);
    let mask = Mask::from_cells(frame, &x);
    for (name, s) in [("A", a), ("B", b)] {
        if let Some(c) = s.iter().find(|c| !mask.get(**c)) {
            return Err(Error::Precondition(format!(
                "{name} is not contained in X: ({}, {})",
                c.i, c.j
            )));
        }
    }
    let (labels, count) = label_mask(&mask, Connectivity::Eight);
    let label = |c: &Cell| (labels[frame.index(*c)] - 1) as usize;
    let mut meets_a = vec![false; count];
    let mut meets_b = vec![false; count];
    a.iter().for_each(|c| meets_a[label(c)] = true);
    b.iter().for_each(|c| meets_b[label(c)] = true);
    if let Some(l) = (0..count).find(|&l| meets_a[l] && meets_b[l]) {
        return Ok(CutWire::Connected(
            x.iter().copied().filter(|c| label(c) == l).collect(),
        ));
    }
    let (x1, x2) = x.iter().partition(|c| meets_a[label(c)]);
    Ok(CutWire::Separated { x1, x2 })
}

/// Shortest 4-connected path of cells of `rect` outside `a ∪ b` from the
/// bottom row to the top row, or `None` when `a ∪ b` blocks every such path.
pub fn crossing_path(rect: CellRect, a: &[Cell], b: &[Cell]) -> Result<Option<Vec<Cell>>> {
    if rect.is_empty() {
        return Err(Error::Precondition("empty rectangle".into()));
    }
    let ma = Mask::from_cells(rect, a);
    if a.iter().any(|c| !rect.contains(*c)) || b.iter().any(|c| !rect.contains(*c)) {
        return Err(Error::Precondition(
            "A and B must lie in the rectangle".into(),
        ));
    }
    if b.iter().any(|c| ma.get(*c)) {
        return Err(Error::Precondition("A and B must be disjoint".into()));
    }
    if a.iter().any(|c| c.i == rect.i1 - 1) {
        return Err(Error::Precondition("A meets the right edge column".into()));
    }
    if b.iter().any(|c| c.i == rect.i0) {
        return Err(Error::Precondition("B meets the left edge column".into()));
    }
    let mut blocked = ma;
    for c in b {
        blocked.set(*c, true);
    }
    let mut prev = vec![usize::MAX; rect.area()];
    let mut seen = vec![false; rect.area()];
    let mut queue = VecDeque::new();
    for i in rect.i0..rect.i1 {
        let c = Cell::new(i, rect.j0);
        if !blocked.get(c) {
            let k = rect.index(c);
            seen[k] = true;
            queue.push_back(k);
        }
    }
    while let Some(k) = queue.pop_front() {
        let c = rect.cell_at(k);
        if c.j == rect.j1 - 1 {
            let mut path = vec![c];
            let mut at = k;
            while prev[at] != usize::MAX {
                at = prev[at];
                path.push(rect.cell_at(at));
            }
            path.reverse();
            return Ok(Some(path));
        }
        for (di, dj) in [(0, 1), (-1, 0), (1, 0), (0, -1)] {
            let n = Cell::new(c.i + di, c.j + dj);
            if !rect.contains(n) || blocked.get(n) {
                continue;
            }
            let nk = rect.index(n);
            if !seen[nk] {
                seen[nk] = true;
                prev[nk] = k;
                queue.push_back(nk);
            }
        }
    }
    Ok(None)
}
