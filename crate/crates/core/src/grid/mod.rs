//! Multi-resolution rasters of planar sets.
//!
//! Scene coordinates are anchored at the origin: at a [`Level`] with cell size
//! `h`, cell `(i, j)` is the box `[i h, (i + 1) h] x [j h, (j + 1) h]`. Cells are
//! ordered row-major (by `j`, then `i`), which fixes every id assignment in the
//! crate.

mod label;
mod metric;

pub use label::{
    complement_components, label_components, label_mask, Component, ComponentLabeling,
    Connectivity, Mask, Touch,
};
pub use metric::{
    box_distance_cells, diameter, diameter_cells, directed_hausdorff_within, hausdorff_distance,
};

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the refinement depth.
pub const DEFAULT_MAX_DEPTH: u32 = 12;

/// Refinement depth `n` of a grid whose cells are `base^-n` wide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Level {
    pub n: u32,
    pub base: u32,
}

impl Level {
    pub fn new(n: u32, base: u32) -> Result<Level> {
        Level::with_max_depth(n, base, DEFAULT_MAX_DEPTH)
    }

    pub fn with_max_depth(n: u32, base: u32, max: u32) -> Result<Level> {
        if base != 2 && base != 3 {
            return Err(Error::UnsupportedBase(base));
        }
        if n > max {
            return Err(Error::DepthExceeded { requested: n, max });
        }
        Ok(Level { n, base })
    }

    pub fn cell_size(&self) -> f64 {
        (self.base as f64).powi(-(self.n as i32))
    }

    /// Number of cells per scene unit, `base^n`.
    pub fn cells_per_unit(&self) -> i64 {
        (self.base as i64).pow(self.n)
    }

    pub fn coarser(&self) -> Option<Level> {
        (self.n > 0).then(|| Level {
            n: self.n - 1,
            base: self.base,
        })
    }

    /// The level `k` steps finer. Depth limits are checked by the caller.
    pub fn finer(&self, k: u32) -> Level {
        Level {
            n: self.n + k,
            base: self.base,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^-{}", self.base, self.n)
    }
}

/// Lattice coordinates of a cell at some level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub i: i64,
    pub j: i64,
}

impl Cell {
    pub const fn new(i: i64, j: i64) -> Cell {
        Cell { i, j }
    }

    /// The cell containing this one `k` levels coarser.
    pub fn ancestor(&self, base: u32, k: u32) -> Cell {
        let f = (base as i64).pow(k);
        Cell::new(self.i.div_euclid(f), self.j.div_euclid(f))
    }

    /// Center in scene units.
    pub fn center(&self, level: Level) -> (f64, f64) {
        let h = level.cell_size();
        ((self.i as f64 + 0.5) * h, (self.j as f64 + 0.5) * h)
    }

    pub fn rect(&self, level: Level) -> Rect {
        let h = level.cell_size();
        Rect::new(
            self.i as f64 * h,
            self.j as f64 * h,
            (self.i + 1) as f64 * h,
            (self.j + 1) as f64 * h,
        )
    }

    pub fn is_8_adjacent(&self, other: &Cell) -> bool {
        self != other && (self.i - other.i).abs() <= 1 && (self.j - other.j).abs() <= 1
    }
}

impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.j, self.i).cmp(&(other.j, other.i))
    }
}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Closed axis-aligned box in scene units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Rect {
    pub const fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Rect {
        Rect { x0, y0, x1, y1 }
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    pub fn is_finite(&self) -> bool {
        [self.x0, self.y0, self.x1, self.y1]
            .iter()
            .all(|v| v.is_finite())
    }

    pub fn union(&self, other: &Rect) -> Rect {
        Rect::new(
            self.x0.min(other.x0),
            self.y0.min(other.y0),
            self.x1.max(other.x1),
            self.y1.max(other.y1),
        )
    }

    /// Smallest run of whole cells covering the box.
    pub fn snap_out(&self, level: Level) -> CellRect {
        let s = level.cells_per_unit() as f64;
        CellRect::new(
            snap_floor(self.x0 * s),
            snap_floor(self.y0 * s),
            snap_ceil(self.x1 * s),
            snap_ceil(self.y1 * s),
        )
    }

    /// Cell rectangle whose edges are the nearest grid lines to the box edges.
    pub fn snap_nearest(&self, level: Level) -> CellRect {
        let s = level.cells_per_unit() as f64;
        CellRect::new(
            (self.x0 * s).round() as i64,
            (self.y0 * s).round() as i64,
            (self.x1 * s).round() as i64,
            (self.y1 * s).round() as i64,
        )
    }
}

// Products like (1/3) * 27 land a few ulps off an integer; treat those as exact.
fn snap_floor(v: f64) -> i64 {
    let r = v.round();
    if (v - r).abs() < 1e-9 {
        r as i64
    } else {
        v.floor() as i64
    }
}

fn snap_ceil(v: f64) -> i64 {
    let r = v.round();
    if (v - r).abs() < 1e-9 {
        r as i64
    } else {
        v.ceil() as i64
    }
}

/// Half-open range of cells `[i0, i1) x [j0, j1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CellRect {
    pub i0: i64,
    pub j0: i64,
    pub i1: i64,
    pub j1: i64,
}

impl CellRect {
    pub const fn new(i0: i64, j0: i64, i1: i64, j1: i64) -> CellRect {
        CellRect { i0, j0, i1, j1 }
    }

    pub const EMPTY: CellRect = CellRect::new(0, 0, 0, 0);

    pub fn width(&self) -> i64 {
        (self.i1 - self.i0).max(0)
    }

    pub fn height(&self) -> i64 {
        (self.j1 - self.j0).max(0)
    }

    pub fn is_empty(&self) -> bool {
        self.width() == 0 || self.height() == 0
    }

    pub fn area(&self) -> usize {
        (self.width() * self.height()) as usize
    }

    pub fn contains(&self, c: Cell) -> bool {
        c.i >= self.i0 && c.i < self.i1 && c.j >= self.j0 && c.j < self.j1
    }

    pub fn contains_rect(&self, other: &CellRect) -> bool {
        other.is_empty()
            || (other.i0 >= self.i0
                && other.i1 <= self.i1
                && other.j0 >= self.j0
                && other.j1 <= self.j1)
    }

    pub fn intersect(&self, other: &CellRect) -> CellRect {
        let r = CellRect::new(
            self.i0.max(other.i0),
            self.j0.max(other.j0),
            self.i1.min(other.i1),
            self.j1.min(other.j1),
        );
        if r.is_empty() {
            CellRect::EMPTY
        } else {
            r
        }
    }

    /// The same region at a level `factor` times finer.
    pub fn scale(&self, factor: i64) -> CellRect {
        CellRect::new(
            self.i0 * factor,
            self.j0 * factor,
            self.i1 * factor,
            self.j1 * factor,
        )
    }

    pub fn expand(&self, by: i64) -> CellRect {
        CellRect::new(self.i0 - by, self.j0 - by, self.i1 + by, self.j1 + by)
    }

    /// Bounding rectangle of a set of cells; `EMPTY` for no cells.
    pub fn bounding<'a>(cells: impl IntoIterator<Item = &'a Cell>) -> CellRect {
        let mut it = cells.into_iter();
        let Some(first) = it.next() else {
            return CellRect::EMPTY;
        };
        let mut r = CellRect::new(first.i, first.j, first.i + 1, first.j + 1);
        for c in it {
            r.i0 = r.i0.min(c.i);
            r.j0 = r.j0.min(c.j);
            r.i1 = r.i1.max(c.i + 1);
            r.j1 = r.j1.max(c.j + 1);
        }
        r
    }

    /// Row-major linear index of a cell inside the rectangle.
    #[inline]
    pub fn index(&self, c: Cell) -> usize {
        ((c.j - self.j0) * self.width() + (c.i - self.i0)) as usize
    }

    #[inline]
    pub fn cell_at(&self, idx: usize) -> Cell {
        let w = self.width() as usize;
        Cell::new(self.i0 + (idx % w) as i64, self.j0 + (idx / w) as i64)
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (self.j0..self.j1).flat_map(move |j| (self.i0..self.i1).map(move |i| Cell::new(i, j)))
    }

    pub fn to_rect(&self, level: Level) -> Rect {
        let h = level.cell_size();
        Rect::new(
            self.i0 as f64 * h,
            self.j0 as f64 * h,
            self.i1 as f64 * h,
            self.j1 as f64 * h,
        )
    }
}

/// A cell together with its level: the box an oracle is asked about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellBox {
    pub level: Level,
    pub cell: Cell,
}

impl CellBox {
    pub fn rect(&self) -> Rect {
        self.cell.rect(self.level)
    }
}

/// Answer of a membership oracle for one cell box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Hit {
    Disjoint,
    Unknown,
    Intersects,
}

impl Hit {
    pub fn or(self, other: Hit) -> Hit {
        self.max(other)
    }

    pub fn included(self) -> bool {
        self != Hit::Disjoint
    }
}

/// Conservative box-membership predicate for a compact set.
///
/// `classify` answers whether the set meets the open interior of the cell box.
/// Segments lying exactly on a grid line belong to the cells on the inner side
/// of the set's bounding box. An oracle must never answer [`Hit::Disjoint`]
/// for a box the set meets; [`Hit::Unknown`] is treated as a hit.
pub trait Oracle: Send + Sync {
    fn classify(&self, cell: CellBox) -> Hit;
}

/// A named planar compactum given by its oracle and bounding box.
#[derive(Clone)]
pub struct SetSpec {
    pub name: String,
    /// `None` for the empty set.
    pub bbox: Option<Rect>,
    /// Subdivision base the oracle is exact for.
    pub base: u32,
    pub oracle: Arc<dyn Oracle>,
}

impl fmt::Debug for SetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SetSpec")
            .field("name", &self.name)
            .field("bbox", &self.bbox)
            .field("base", &self.base)
            .finish_non_exhaustive()
    }
}

impl SetSpec {
    pub fn new(
        name: impl Into<String>,
        bbox: Option<Rect>,
        base: u32,
        oracle: Arc<dyn Oracle>,
    ) -> SetSpec {
        SetSpec {
            name: name.into(),
            bbox,
            base,
            oracle,
        }
    }

    pub fn empty(name: impl Into<String>, base: u32) -> SetSpec {
        struct Nothing;
        impl Oracle for Nothing {
            fn classify(&self, _: CellBox) -> Hit {
                Hit::Disjoint
            }
        }
        SetSpec::new(name, None, base, Arc::new(Nothing))
    }

    pub fn classify(&self, level: Level, cell: Cell) -> Hit {
        self.oracle.classify(CellBox { level, cell })
    }
}

/// Outer-cover raster of a compactum at one level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridCompactum {
    pub level: Level,
    pub source: String,
    frame: CellRect,
    occ: Vec<bool>,
}

impl GridCompactum {
    pub fn empty(level: Level, source: impl Into<String>) -> GridCompactum {
        GridCompactum {
            level,
            source: source.into(),
            frame: CellRect::EMPTY,
            occ: Vec::new(),
        }
    }

    pub fn from_cells(
        level: Level,
        source: impl Into<String>,
        cells: impl IntoIterator<Item = Cell>,
    ) -> GridCompactum {
        let cells: Vec<Cell> = cells.into_iter().collect();
        let frame = CellRect::bounding(&cells);
        let mut occ = vec![false; frame.area()];
        for c in &cells {
            occ[frame.index(*c)] = true;
        }
        GridCompactum {
            level,
            source: source.into(),
            frame,
            occ,
        }
    }

    /// Tight bounding rectangle of the cells.
    pub fn frame(&self) -> CellRect {
        self.frame
    }

    pub fn bbox(&self) -> Option<Rect> {
        (!self.is_empty()).then(|| self.frame.to_rect(self.level))
    }

    pub fn contains(&self, c: Cell) -> bool {
        self.frame.contains(c) && self.occ[self.frame.index(c)]
    }

    pub fn is_empty(&self) -> bool {
        self.frame.is_empty()
    }

    pub fn len(&self) -> usize {
        self.occ.iter().filter(|&&b| b).count()
    }

    /// Cells in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.occ
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(k, _)| self.frame.cell_at(k))
    }

    /// Occupancy of `window` as a mask (cells outside the compactum are unset).
    pub fn mask(&self, window: CellRect) -> Mask {
        let mut m = Mask::new(window);
        for c in self.cells().filter(|c| window.contains(*c)) {
            m.set(c, true);
        }
        m
    }

    pub fn with_source(mut self, source: impl Into<String>) -> GridCompactum {
        self.source = source.into();
        self
    }
}

/// Outer cover of `spec` at `level`: a cell is kept iff the oracle does not
/// report it disjoint from the set.
pub fn rasterize(spec: &SetSpec, level: Level) -> Result<GridCompactum> {
    if spec.base != level.base {
        return Err(Error::BaseMismatch {
            name: spec.name.clone(),
            expected: spec.base,
            got: level.base,
        });
    }
    let Some(bbox) = spec.bbox else {
        return Ok(GridCompactum::empty(level, &spec.name));
    };
    if !bbox.is_finite() {
        return Err(Error::InvalidParams(format!(
            "bounding box of `{}` is not finite",
            spec.name
        )));
    }
    descend(spec, bbox, level, None)
}

/// Like [`rasterize`] but only the cells inside `window` are produced.
pub fn rasterize_window(spec: &SetSpec, level: Level, window: CellRect) -> Result<GridCompactum> {
    if spec.base != level.base {
        return Err(Error::BaseMismatch {
            name: spec.name.clone(),
            expected: spec.base,
            got: level.base,
        });
    }
    let Some(bbox) = spec.bbox else {
        return Ok(GridCompactum::empty(level, &spec.name));
    };
    if !bbox.is_finite() {
        return Err(Error::InvalidParams(format!(
            "bounding box of `{}` is not finite",
            spec.name
        )));
    }
    descend(spec, bbox, level, Some(window))
}

fn descend(
    spec: &SetSpec,
    bbox: Rect,
    level: Level,
    window: Option<CellRect>,
) -> Result<GridCompactum> {
    // Descend from level 0: a box disjoint from the set has no descendant
    // meeting it, so pruning never changes the result.
    let mut root = bbox.snap_out(Level {
        n: 0,
        base: level.base,
    });
    // Degenerate boxes (segments, points) still need one root cell per axis.
    root.i1 = root.i1.max(root.i0 + 1);
    root.j1 = root.j1.max(root.j0 + 1);
    let b = level.base as i64;
    let mut stack: Vec<(u32, Cell)> = root.cells().map(|c| (0, c)).collect();
    let mut cells = Vec::new();
    while let Some((d, c)) = stack.pop() {
        if let Some(w) = window {
            let s = b.pow(level.n - d);
            if c.i * s >= w.i1 || (c.i + 1) * s <= w.i0 || c.j * s >= w.j1 || (c.j + 1) * s <= w.j0
            {
                continue;
            }
        }
        let at = Level {
            n: d,
            base: level.base,
        };
        if !spec.classify(at, c).included() {
            continue;
        }
        if d == level.n {
            cells.push(c);
            continue;
        }
        for dj in 0..b {
            for di in 0..b {
                stack.push((d + 1, Cell::new(c.i * b + di, c.j * b + dj)));
            }
        }
    }
    Ok(GridCompactum::from_cells(level, &spec.name, cells))
}

/// Parent-level raster: a parent cell is kept iff one of its children is.
pub fn coarsen(k: &GridCompactum) -> Result<GridCompactum> {
    let parent = k.level.coarser().ok_or(Error::AlreadyCoarsest)?;
    let mut cells: Vec<Cell> = k.cells().map(|c| c.ancestor(k.level.base, 1)).collect();
    cells.sort();
    cells.dedup();
    Ok(GridCompactum::from_cells(parent, &k.source, cells))
}

#[cfg(test)]
mod tests {
    use super::*;

    struct UnitSquare;
    impl Oracle for UnitSquare {
        fn classify(&self, b: CellBox) -> Hit {
            let n = b.level.cells_per_unit();
            let c = b.cell;
            // Open box meets [0,1]^2.
            if c.i >= 0 && c.i < n && c.j >= 0 && c.j < n {
                Hit::Intersects
            } else {
                Hit::Disjoint
            }
        }
    }

    fn square() -> SetSpec {
        SetSpec::new(
            "unit_square",
            Some(Rect::new(0.0, 0.0, 1.0, 1.0)),
            2,
            Arc::new(UnitSquare),
        )
    }

    #[test]
    fn level_cell_size() {
        assert_eq!(Level::new(3, 2).unwrap().cell_size(), 0.125);
        assert!((Level::new(2, 3).unwrap().cell_size() - 1.0 / 9.0).abs() < 1e-15);
        assert_eq!(
            Level::new(13, 2),
            Err(Error::DepthExceeded {
                requested: 13,
                max: 12
            })
        );
        assert_eq!(Level::new(1, 4), Err(Error::UnsupportedBase(4)));
    }

    #[test]
    fn row_major_order() {
        let mut v = vec![Cell::new(1, 0), Cell::new(0, 1), Cell::new(0, 0)];
        v.sort();
        assert_eq!(v, vec![Cell::new(0, 0), Cell::new(1, 0), Cell::new(0, 1)]);
    }

    #[test]
    fn unit_square_raster_is_full_grid() {
        let k = rasterize(&square(), Level::new(3, 2).unwrap()).unwrap();
        assert_eq!(k.len(), 64);
        assert_eq!(k.frame(), CellRect::new(0, 0, 8, 8));
    }

    #[test]
    fn empty_spec_rasterizes_empty() {
        let k = rasterize(&SetSpec::empty("nothing", 2), Level::new(5, 2).unwrap()).unwrap();
        assert!(k.is_empty());
        assert_eq!(k.len(), 0);
    }

    #[test]
    fn base_mismatch_rejected() {
        let err = rasterize(&square(), Level::new(2, 3).unwrap()).unwrap_err();
        assert!(matches!(err, Error::BaseMismatch { .. }));
    }

    #[test]
    fn coarsen_single_cell_and_empty() {
        let l = Level::new(3, 2).unwrap();
        let k = GridCompactum::from_cells(l, "one", [Cell::new(5, 3)]);
        let c = coarsen(&k).unwrap();
        assert_eq!(c.cells().collect::<Vec<_>>(), vec![Cell::new(2, 1)]);
        assert_eq!(c.level.n, 2);
        let e = coarsen(&GridCompactum::empty(l, "e")).unwrap();
        assert!(e.is_empty());
        let top = GridCompactum::empty(Level::new(0, 2).unwrap(), "e");
        assert_eq!(coarsen(&top), Err(Error::AlreadyCoarsest));
    }

    #[test]
    fn coarsen_matches_coarser_raster() {
        let l = Level::new(4, 2).unwrap();
        let fine = rasterize(&square(), l).unwrap();
        let coarse = rasterize(&square(), l.coarser().unwrap()).unwrap();
        assert_eq!(coarsen(&fine).unwrap(), coarse);
    }

    #[test]
    fn negative_ancestors_floor() {
        assert_eq!(Cell::new(-1, -4).ancestor(3, 1), Cell::new(-1, -2));
        assert_eq!(Cell::new(-3, 2).ancestor(3, 1), Cell::new(-1, 0));
    }
}
