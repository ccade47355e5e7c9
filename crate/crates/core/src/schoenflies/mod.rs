//! Crossing components of strips and rectangular annuli, the scans built on
//! them, and the constructive separation tools (cut wires, crossing paths,
//! brick-wall separating loops).

mod brick;
mod scan;
mod wire;

pub use brick::{separating_curve, SeparatingLoop};
pub use scan::{
    complement_diameter_scan, complement_scan_compacta, scan_compacta, schoenflies_scan,
    ComplementScan, LcVerdict, ScanReport, StripScan,
};
pub use wire::{crossing_path, cut_wire, CutWire};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{label_mask, Cell, CellRect, Connectivity, GridCompactum, Level, Mask, Rect};
use crate::unionfind::UnionFind;

/// Lateral margin, in cells, of automatically chosen strip windows.
pub const WINDOW_MARGIN: i64 = 2;

/// Default number of nearby members a cell needs to enter a cluster limit.
pub const DEFAULT_N_MIN: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StripAxis {
    /// Bounded by the lines `y = c1` and `y = c2`.
    Horizontal,
    /// Bounded by the lines `x = c1` and `x = c2`.
    Vertical,
}

/// The closed region between two parallel axis-aligned lines, clipped to a
/// window in the unbounded direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Strip {
    pub axis: StripAxis,
    pub c1: f64,
    pub c2: f64,
    /// Clipping box; `None` takes the compactum's extent plus a margin.
    pub window: Option<Rect>,
}

impl Strip {
    pub fn horizontal(c1: f64, c2: f64) -> Strip {
        Strip {
            axis: StripAxis::Horizontal,
            c1,
            c2,
            window: None,
        }
    }

    pub fn vertical(c1: f64, c2: f64) -> Strip {
        Strip {
            axis: StripAxis::Vertical,
            c1,
            c2,
            window: None,
        }
    }

    pub fn with_window(mut self, window: Rect) -> Strip {
        self.window = Some(window);
        self
    }
}

/// Region between two nested rectangles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RectAnnulus {
    pub outer: Rect,
    pub inner: Rect,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Region {
    Strip(Strip),
    Annulus(RectAnnulus),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CrossingMode {
    /// Components of `closure(U) ∩ K`, 8-connected.
    Intersection,
    /// Components of `closure(U) \ K`, 4-connected.
    Difference,
}

impl CrossingMode {
    fn connectivity(&self) -> Connectivity {
        match self {
            CrossingMode::Intersection => Connectivity::Eight,
            CrossingMode::Difference => Connectivity::Four,
        }
    }
}

/// A region snapped to the grid of one level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SnappedRegion {
    /// Lines at grid indices `lo < hi` across the axis; cells `[lat0, lat1)` along it.
    Strip {
        axis: StripAxis,
        lo: i64,
        hi: i64,
        lat0: i64,
        lat1: i64,
    },
    Annulus {
        outer: CellRect,
        inner: CellRect,
    },
}

impl SnappedRegion {
    pub fn frame(&self) -> CellRect {
        match *self {
            SnappedRegion::Strip {
                axis: StripAxis::Horizontal,
                lo,
                hi,
                lat0,
                lat1,
            } => CellRect::new(lat0, lo, lat1, hi),
            SnappedRegion::Strip {
                axis: StripAxis::Vertical,
                lo,
                hi,
                lat0,
                lat1,
            } => CellRect::new(lo, lat0, hi, lat1),
            SnappedRegion::Annulus { outer, .. } => outer,
        }
    }

    #[inline]
    pub fn contains(&self, c: Cell) -> bool {
        match self {
            SnappedRegion::Strip { .. } => self.frame().contains(c),
            SnappedRegion::Annulus { outer, inner } => outer.contains(c) && !inner.contains(c),
        }
    }

    /// Whether the closed box of `c` (a region cell) meets the first and the
    /// second boundary.
    #[inline]
    pub fn touches(&self, c: Cell) -> (bool, bool) {
        match *self {
            SnappedRegion::Strip { axis, lo, hi, .. } => {
                let v = match axis {
                    StripAxis::Horizontal => c.j,
                    StripAxis::Vertical => c.i,
                };
                (v == lo, v == hi - 1)
            }
            SnappedRegion::Annulus { outer, inner } => {
                let on_outer = c.i == outer.i0
                    || c.i == outer.i1 - 1
                    || c.j == outer.j0
                    || c.j == outer.j1 - 1;
                (on_outer, inner.expand(1).contains(c))
            }
        }
    }

    /// The same region at a grid `factor` times finer.
    pub fn scale(&self, factor: i64) -> SnappedRegion {
        match *self {
            SnappedRegion::Strip {
                axis,
                lo,
                hi,
                lat0,
                lat1,
            } => SnappedRegion::Strip {
                axis,
                lo: lo * factor,
                hi: hi * factor,
                lat0: lat0 * factor,
                lat1: lat1 * factor,
            },
            SnappedRegion::Annulus { outer, inner } => SnappedRegion::Annulus {
                outer: outer.scale(factor),
                inner: inner.scale(factor),
            },
        }
    }

    /// Number of region cells.
    pub fn area(&self) -> usize {
        match self {
            SnappedRegion::Strip { .. } => self.frame().area(),
            SnappedRegion::Annulus { outer, inner } => outer.area() - inner.area(),
        }
    }

    /// Boundary offsets in scene units (strips) or the rectangles (annuli).
    pub fn to_region(&self, level: Level) -> Region {
        let h = level.cell_size();
        match *self {
            SnappedRegion::Strip {
                axis,
                lo,
                hi,
                lat0,
                lat1,
            } => {
                let window = match axis {
                    StripAxis::Horizontal => Rect::new(
                        lat0 as f64 * h,
                        lo as f64 * h,
                        lat1 as f64 * h,
                        hi as f64 * h,
                    ),
                    StripAxis::Vertical => Rect::new(
                        lo as f64 * h,
                        lat0 as f64 * h,
                        hi as f64 * h,
                        lat1 as f64 * h,
                    ),
                };
                Region::Strip(Strip {
                    axis,
                    c1: lo as f64 * h,
                    c2: hi as f64 * h,
                    window: Some(window),
                })
            }
            SnappedRegion::Annulus { outer, inner } => Region::Annulus(RectAnnulus {
                outer: outer.to_rect(level),
                inner: inner.to_rect(level),
            }),
        }
    }
}

fn round_line(v: f64, level: Level) -> i64 {
    (v * level.cells_per_unit() as f64).round() as i64
}

/// Snaps `region` to the grid of `k`'s level and checks the window.
pub fn snap_region(k: &GridCompactum, region: &Region) -> Result<SnappedRegion> {
    let level = k.level;
    match region {
        Region::Strip(s) => {
            if !(s.c1 < s.c2) || !s.c1.is_finite() || !s.c2.is_finite() {
                return Err(Error::InvalidParams(format!(
                    "strip needs finite c1 < c2, got {} and {}",
                    s.c1, s.c2
                )));
            }
            let (lo, hi) = (round_line(s.c1, level), round_line(s.c2, level));
            if hi - lo < 1 {
                return Err(Error::MisalignedRegion(format!(
                    "strip [{}, {}] is thinner than one cell at level {}",
                    s.c1, s.c2, level
                )));
            }
            let (lat0, lat1) = match s.window {
                Some(w) => {
                    let r = w.snap_nearest(level);
                    match s.axis {
                        StripAxis::Horizontal => (r.i0, r.i1),
                        StripAxis::Vertical => (r.j0, r.j1),
                    }
                }
                None => {
                    let f = k.frame();
                    if f.is_empty() {
                        (-WINDOW_MARGIN, WINDOW_MARGIN)
                    } else {
                        match s.axis {
                            StripAxis::Horizontal => (f.i0 - WINDOW_MARGIN, f.i1 + WINDOW_MARGIN),
                            StripAxis::Vertical => (f.j0 - WINDOW_MARGIN, f.j1 + WINDOW_MARGIN),
                        }
                    }
                }
            };
            let snapped = SnappedRegion::Strip {
                axis: s.axis,
                lo,
                hi,
                lat0,
                lat1,
            };
            check_strip_window(k, &snapped)?;
            Ok(snapped)
        }
        Region::Annulus(a) => {
            let outer = a.outer.snap_nearest(level);
            let inner = a.inner.snap_nearest(level);
            if inner.is_empty() || !outer.contains_rect(&inner.expand(1)) {
                return Err(Error::MisalignedRegion(format!(
                    "annulus needs a nonempty inner box nested at least one cell deep, got {outer:?} / {inner:?}"
                )));
            }
            Ok(SnappedRegion::Annulus { outer, inner })
        }
    }
}

/// K must stay off the first and last lateral cell of the strip.
fn check_strip_window(k: &GridCompactum, s: &SnappedRegion) -> Result<()> {
    let SnappedRegion::Strip {
        axis,
        lo,
        hi,
        lat0,
        lat1,
    } = *s
    else {
        return Ok(());
    };
    if lat1 - lat0 < 3 {
        return Err(Error::WindowViolation(format!(
            "strip window [{lat0}, {lat1}) leaves no interior"
        )));
    }
    let f = k.frame();
    let band = match axis {
        StripAxis::Horizontal => CellRect::new(f.i0, lo, f.i1, hi),
        StripAxis::Vertical => CellRect::new(lo, f.j0, hi, f.j1),
    }
    .intersect(&f);
    for c in band.cells() {
        if !k.contains(c) {
            continue;
        }
        let v = match axis {
            StripAxis::Horizontal => c.i,
            StripAxis::Vertical => c.j,
        };
        if v <= lat0 || v >= lat1 - 1 {
            return Err(Error::WindowViolation(format!(
                "cell ({}, {}) is not strictly inside the strip window",
                c.i, c.j
            )));
        }
    }
    Ok(())
}

/// Components of one region that meet both boundaries, in label order.
#[derive(Debug, Clone)]
pub(crate) struct RawCrossings {
    pub total: usize,
    pub ids: Vec<usize>,
    pub cells: Vec<Vec<Cell>>,
}

pub(crate) fn raw_crossings(
    k: &GridCompactum,
    region: &SnappedRegion,
    mode: CrossingMode,
) -> RawCrossings {
    let frame = region.frame();
    let mut mask = Mask::new(frame);
    match mode {
        CrossingMode::Intersection => {
            let inside = frame.intersect(&k.frame());
            for c in inside.cells() {
                if k.contains(c) && region.contains(c) {
                    mask.set(c, true);
                }
            }
        }
        CrossingMode::Difference => {
            for c in frame.cells() {
                if region.contains(c) && !k.contains(c) {
                    mask.set(c, true);
                }
            }
        }
    }
    let (labels, total) = label_mask(&mask, mode.connectivity());
    let mut touch = vec![(false, false); total];
    for (idx, &l) in labels.iter().enumerate() {
        if l == 0 {
            continue;
        }
        let t = region.touches(frame.cell_at(idx));
        let e = &mut touch[(l - 1) as usize];
        e.0 |= t.0;
        e.1 |= t.1;
    }
    let ids: Vec<usize> = (0..total).filter(|&l| touch[l].0 && touch[l].1).collect();
    let mut slot = vec![usize::MAX; total];
    for (n, &id) in ids.iter().enumerate() {
        slot[id] = n;
    }
    let mut cells = vec![Vec::new(); ids.len()];
    for (idx, &l) in labels.iter().enumerate() {
        if l != 0 && slot[(l - 1) as usize] != usize::MAX {
            cells[slot[(l - 1) as usize]].push(frame.cell_at(idx));
        }
    }
    RawCrossings { total, ids, cells }
}

/// Group of crossing components under single linkage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    /// Indices into the report's crossing list.
    pub members: Vec<usize>,
    /// Approximate limit: region cells of K near enough members.
    pub limit: Vec<Cell>,
    /// Number of members near each limit cell.
    pub support: Vec<usize>,
}

/// How clusters and their limits are formed.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LinkRule {
    /// Linkage and limit radius, in cells of the coarse level.
    pub radius: f64,
    /// A cell enters the limit when this many members are within `radius`
    /// (capped by the cluster size).
    pub support: usize,
    /// Clusters with fewer members get no limit.
    pub min_members: usize,
}

/// Single-linkage clustering of `members` (cells at a level `factor` times
/// finer than the coarse grid) by the gap distance between their coarse
/// projections, plus each cluster's limit among the coarse `candidates`.
pub(crate) fn cluster_members(
    members: &[Vec<Cell>],
    base: u32,
    refine: u32,
    frame: CellRect,
    candidates: &dyn Fn(Cell) -> bool,
    rule: LinkRule,
) -> Vec<Cluster> {
    if members.is_empty() {
        return Vec::new();
    }
    let r = rule.radius.floor() as i64;
    let offsets: Vec<(i64, i64)> = (-r..=r)
        .flat_map(|dj| (-r..=r).map(move |di| (di, dj)))
        .filter(|&(di, dj)| ((di * di + dj * dj) as f64) <= rule.radius * rule.radius)
        .collect();
    let grid = frame.expand(r + 1);
    // Coarse cells occupied by each member.
    let projected: Vec<Vec<Cell>> = members
        .iter()
        .map(|m| {
            let mut p: Vec<Cell> = m.iter().map(|c| c.ancestor(base, refine)).collect();
            p.sort();
            p.dedup();
            p
        })
        .collect();
    let mut owners: Vec<Vec<u32>> = vec![Vec::new(); grid.area()];
    for (id, p) in projected.iter().enumerate() {
        for &c in p {
            owners[grid.index(c)].push(id as u32);
        }
    }
    let mut uf = UnionFind::new(members.len());
    for (id, p) in projected.iter().enumerate() {
        for &c in p {
            for &(di, dj) in &offsets {
                let n = Cell::new(c.i + di, c.j + dj);
                if !grid.contains(n) {
                    continue;
                }
                for &o in &owners[grid.index(n)] {
                    uf.union(id, o as usize);
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for id in 0..members.len() {
        groups.entry(uf.find(id)).or_default().push(id);
    }
    let mut clusters: Vec<Vec<usize>> = groups.into_values().collect();
    clusters.sort_by_key(|g| g[0]);
    let mut count = vec![0u32; grid.area()];
    let mut stamp = vec![u32::MAX; grid.area()];
    clusters
        .into_iter()
        .map(|members_of| {
            if members_of.len() < rule.min_members {
                return Cluster {
                    members: members_of,
                    limit: Vec::new(),
                    support: Vec::new(),
                };
            }
            let need = rule.support.min(members_of.len()) as u32;
            let mut touched = Vec::new();
            for &id in &members_of {
                for &c in &projected[id] {
                    for &(di, dj) in &offsets {
                        let n = Cell::new(c.i + di, c.j + dj);
                        if !grid.contains(n) {
                            continue;
                        }
                        let x = grid.index(n);
                        if stamp[x] != id as u32 {
                            stamp[x] = id as u32;
                            if count[x] == 0 {
                                touched.push(x);
                            }
                            count[x] += 1;
                        }
                    }
                }
            }
            let mut limit: Vec<(Cell, usize)> = touched
                .iter()
                .filter(|&&x| count[x] >= need)
                .map(|&x| (grid.cell_at(x), count[x] as usize))
                .filter(|&(c, _)| frame.contains(c) && candidates(c))
                .collect();
            limit.sort();
            for &x in &touched {
                count[x] = 0;
                stamp[x] = u32::MAX;
            }
            let (limit, support) = limit.into_iter().unzip();
            Cluster {
                members: members_of,
                support,
                limit,
            }
        })
        .collect()
}

/// Crossing components of one region at one level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossingReport {
    pub region: Region,
    pub snapped: SnappedRegion,
    pub mode: CrossingMode,
    pub level: Level,
    /// Components of the region (crossing or not).
    pub components: usize,
    /// Labels (in row-major scan order) of the crossing components.
    pub crossing_ids: Vec<usize>,
    /// Cells of each crossing component, parallel to `crossing_ids`.
    pub crossings: Vec<Vec<Cell>>,
    pub clusters: Vec<Cluster>,
}

impl CrossingReport {
    /// The crossing number `m`.
    pub fn count(&self) -> usize {
        self.crossing_ids.len()
    }
}

/// Components of the region meeting both of its boundaries. Clusters link
/// components whose cells come within `delta` (scene units) of each other; a
/// cluster's limit holds the region cells of K within `delta` of at least
/// `min(cluster size, n_min)` members.
pub fn crossing_components(
    k: &GridCompactum,
    region: &Region,
    mode: CrossingMode,
    delta: f64,
) -> Result<CrossingReport> {
    crossing_components_with(k, region, mode, delta, DEFAULT_N_MIN)
}

pub fn crossing_components_with(
    k: &GridCompactum,
    region: &Region,
    mode: CrossingMode,
    delta: f64,
    n_min: usize,
) -> Result<CrossingReport> {
    let h = k.level.cell_size();
    if !(delta >= h * (1.0 - 1e-9)) {
        return Err(Error::InvalidParams(format!(
            "delta {delta} is below the cell size {h}"
        )));
    }
    let snapped = snap_region(k, region)?;
    let raw = raw_crossings(k, &snapped, mode);
    let rule = LinkRule {
        radius: delta / h + 1e-9,
        support: n_min,
        min_members: 1,
    };
    let candidates = |c: Cell| k.contains(c) && snapped.contains(c);
    let clusters = cluster_members(
        &raw.cells,
        k.level.base,
        0,
        snapped.frame(),
        &candidates,
        rule,
    );
    Ok(CrossingReport {
        region: *region,
        snapped,
        mode,
        level: k.level,
        components: raw.total,
        crossing_ids: raw.ids,
        crossings: raw.cells,
        clusters,
    })
}
