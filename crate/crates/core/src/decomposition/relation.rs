//! Seeding the relation from accumulating crossing components.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{close_equivalence, Decomposition};
use crate::error::{Error, Result};
use crate::grid::{
    label_mask, rasterize, rasterize_window, Cell, CellRect, Connectivity, GridCompactum, Level,
    Mask, SetSpec,
};
use crate::schoenflies::{
    cluster_members, raw_crossings, CrossingMode, LinkRule, SnappedRegion, Strip, StripAxis,
    WINDOW_MARGIN,
};

/// Deepest absolute level the refined relation will rasterize at.
const MAX_FINE_DEPTH: u32 = 24;

/// Which regions the relation examines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnnulusFamily {
    /// Horizontal and vertical strips at every stride offset.
    Strips,
    /// Square annuli centered on a sampled lattice.
    Annuli,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelationParams {
    /// Members a cluster needs before its limit is merged.
    pub n_min: usize,
    /// Linkage and limit radius in cells of the working level.
    pub delta_cells: f64,
    pub family: AnnulusFamily,
    /// Offset step of strips, in cells; strips are twice this wide.
    pub stride: i64,
    /// Half-width of annulus inner squares and lattice step of their centers.
    pub annulus_stride: i64,
    /// Most extra levels a region is refined by before counting crossings.
    pub refine_depth: u32,
    /// Most fine cells one refined region may span.
    pub fine_budget: usize,
    /// Members within `delta_cells` a cell needs to enter a limit.
    pub support: usize,
}

impl Default for RelationParams {
    fn default() -> Self {
        RelationParams {
            n_min: 4,
            delta_cells: 2.5,
            family: AnnulusFamily::Strips,
            stride: 2,
            annulus_stride: 4,
            refine_depth: 5,
            fine_budget: 1 << 20,
            support: 3,
        }
    }
}

impl RelationParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParams(m.into()));
        if self.n_min < 3 {
            return bad("n_min must be at least 3");
        }
        if !(self.delta_cells >= 1.0) || !self.delta_cells.is_finite() {
            return bad("delta must be at least one cell");
        }
        if self.stride < 1 || self.annulus_stride < 1 {
            return bad("strides must be positive");
        }
        if self.support < 1 {
            return bad("support must be positive");
        }
        if self.fine_budget < 1 {
            return bad("fine budget must be positive");
        }
        Ok(())
    }
}

/// Cell sets to be identified, each an approximate limit continuum.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationSeed {
    pub merge_sets: Vec<Vec<Cell>>,
}

/// Horizontal and vertical strips of width `2·stride` at every multiple of
/// `stride` that meets K's frame, clipped to the frame across the axis and
/// windowed to the frame plus a margin along it.
pub fn strip_regions(k: &GridCompactum, stride: i64) -> Vec<SnappedRegion> {
    if k.is_empty() {
        return Vec::new();
    }
    let f = k.frame();
    let mut out = Vec::new();
    for (axis, lo, hi, lat0, lat1) in [
        (StripAxis::Horizontal, f.j0, f.j1, f.i0, f.i1),
        (StripAxis::Vertical, f.i0, f.i1, f.j0, f.j1),
    ] {
        let first = (lo - 2 * stride).div_euclid(stride) + 1;
        let mut m = first;
        while m * stride < hi {
            // Strips sticking out of the frame are clipped to it, so the
            // extreme rows and columns of K are still seen by some strip.
            let (a, b) = ((m * stride).max(lo), (m * stride + 2 * stride).min(hi));
            if b - a >= 2 {
                out.push(SnappedRegion::Strip {
                    axis,
                    lo: a,
                    hi: b,
                    lat0: lat0 - WINDOW_MARGIN,
                    lat1: lat1 + WINDOW_MARGIN,
                });
            }
            m += 1;
        }
    }
    out.dedup();
    out
}

/// Square annuli centered on multiples of `s` with inner half-width `s` and
/// outer half-width `2s`, kept when they see both K and its complement.
pub fn annulus_regions(k: &GridCompactum, s: i64) -> Vec<SnappedRegion> {
    if k.is_empty() {
        return Vec::new();
    }
    let f = k.frame();
    let mut out = Vec::new();
    let lo = |v: i64| (v - 2 * s).div_euclid(s);
    let hi = |v: i64| (v + 2 * s).div_euclid(s) + 1;
    for b in lo(f.j0)..=hi(f.j1) {
        for a in lo(f.i0)..=hi(f.i1) {
            let (ci, cj) = (a * s, b * s);
            let outer = CellRect::new(ci - 2 * s, cj - 2 * s, ci + 2 * s, cj + 2 * s);
            let inner = CellRect::new(ci - s, cj - s, ci + s, cj + s);
            let region = SnappedRegion::Annulus { outer, inner };
            let mut has_k = false;
            let mut has_gap = false;
            for c in outer.cells() {
                if inner.contains(c) {
                    continue;
                }
                if k.contains(c) {
                    has_k = true;
                } else {
                    has_gap = true;
                }
                if has_k && has_gap {
                    break;
                }
            }
            if has_k && has_gap {
                out.push(region);
            }
        }
    }
    out
}

/// The region family examined for `params.family`.
pub fn region_family(k: &GridCompactum, params: &RelationParams) -> Vec<SnappedRegion> {
    let mut out = Vec::new();
    if matches!(params.family, AnnulusFamily::Strips | AnnulusFamily::Both) {
        out.extend(strip_regions(k, params.stride));
    }
    if matches!(params.family, AnnulusFamily::Annuli | AnnulusFamily::Both) {
        out.extend(annulus_regions(k, params.annulus_stride));
    }
    out
}

/// The default strip family in scene coordinates, with explicit windows.
pub fn strip_family(k: &GridCompactum, params: &RelationParams) -> Vec<Strip> {
    strip_regions(k, params.stride)
        .into_iter()
        .map(|r| match r.to_region(k.level) {
            crate::schoenflies::Region::Strip(s) => s,
            crate::schoenflies::Region::Annulus(_) => unreachable!(),
        })
        .collect()
}

/// Depth a region is refined by so its fine raster stays within budget.
fn refine_for(region: &SnappedRegion, level: Level, params: &RelationParams) -> u32 {
    let area = region.area().max(1) as f64;
    let b2 = (level.base * level.base) as f64;
    let mut k = 0;
    while k < params.refine_depth
        && level.n + k < MAX_FINE_DEPTH
        && area * b2.powi(k as i32 + 1) <= params.fine_budget as f64
    {
        k += 1;
    }
    k
}

/// 8-components of a cluster limit that hold at least two cells and at
/// least one core cell, one with `core` or more members nearby.
fn limit_components(cells: &[Cell], support: &[usize], core: usize) -> Vec<Vec<(Cell, usize)>> {
    if cells.is_empty() {
        return Vec::new();
    }
    let frame = CellRect::bounding(cells);
    let mask = Mask::from_cells(frame, cells);
    let (labels, count) = label_mask(&mask, Connectivity::Eight);
    let mut out = vec![Vec::new(); count];
    let mut has_core = vec![false; count];
    for (&c, &s) in cells.iter().zip(support) {
        let l = (labels[frame.index(c)] - 1) as usize;
        out[l].push((c, s));
        has_core[l] |= s >= core;
    }
    out.into_iter()
        .zip(has_core)
        .filter(|(c, core)| *core && c.len() >= 2)
        .map(|(c, _)| c)
        .collect()
}

/// Merge sets found in one region. `fine` is K (or the spec's raster) at
/// `refine` levels below `k`, covering at least the region.
fn region_seeds(
    k: &GridCompactum,
    fine: &GridCompactum,
    region: &SnappedRegion,
    refine: u32,
    params: &RelationParams,
) -> Vec<Vec<Cell>> {
    let factor = (k.level.base as i64).pow(refine);
    let raw = raw_crossings(fine, &region.scale(factor), CrossingMode::Intersection);
    if raw.cells.len() < params.n_min {
        return Vec::new();
    }
    let rule = LinkRule {
        radius: params.delta_cells + 1e-9,
        support: params.support,
        min_members: params.n_min,
    };
    let candidates = |c: Cell| k.contains(c) && region.contains(c);
    cluster_members(
        &raw.cells,
        k.level.base,
        refine,
        region.frame(),
        &candidates,
        rule,
    )
    .into_iter()
    .flat_map(|cl| limit_components(&cl.limit, &cl.support, params.n_min))
    .map(|comp| close_across_lines(k, region, &comp, params.n_min))
    .collect()
}

/// A limit of strip crossings reaches both lines, so K cells just across a
/// line from a core limit cell on it meet the limit continuum and join it.
fn close_across_lines(
    k: &GridCompactum,
    region: &SnappedRegion,
    comp: &[(Cell, usize)],
    core: usize,
) -> Vec<Cell> {
    let mut cells: Vec<Cell> = comp.iter().map(|&(c, _)| c).collect();
    let SnappedRegion::Strip { axis, lo, hi, .. } = *region else {
        return cells;
    };
    let step = |c: Cell, d: i64| match axis {
        StripAxis::Horizontal => Cell::new(c.i, c.j + d),
        StripAxis::Vertical => Cell::new(c.i + d, c.j),
    };
    let across = |c: &Cell| match axis {
        StripAxis::Horizontal => c.j,
        StripAxis::Vertical => c.i,
    };
    let extra: Vec<Cell> = comp
        .iter()
        .filter(|&&(_, s)| s >= core)
        .filter_map(|(c, _)| match across(c) {
            v if v == lo => Some(step(*c, -1)),
            v if v == hi - 1 => Some(step(*c, 1)),
            _ => None,
        })
        .filter(|c| k.contains(*c))
        .collect();
    cells.extend(extra);
    cells
}

fn collect(per_region: Vec<Vec<Vec<Cell>>>) -> RelationSeed {
    RelationSeed {
        merge_sets: per_region.into_iter().flatten().collect(),
    }
}

/// Single-level relation: crossings are counted on `k` itself.
pub fn schoenflies_relation(k: &GridCompactum, params: &RelationParams) -> Result<RelationSeed> {
    params.validate()?;
    let regions = region_family(k, params);
    let per: Vec<Vec<Vec<Cell>>> = regions
        .par_iter()
        .map(|r| region_seeds(k, k, r, 0, params))
        .collect();
    Ok(collect(per))
}

/// Multi-level relation: each region is re-rasterized from `spec` as many
/// levels finer as the budget allows, so that accumulating crossings that
/// fuse at the working level are told apart, then the clusters are projected
/// back onto `k`.
pub fn schoenflies_relation_refined(
    spec: &SetSpec,
    k: &GridCompactum,
    params: &RelationParams,
) -> Result<RelationSeed> {
    params.validate()?;
    let regions = region_family(k, params);
    let per: Vec<Result<Vec<Vec<Cell>>>> = regions
        .par_iter()
        .map(|r| {
            let refine = refine_for(r, k.level, params);
            if refine == 0 {
                return Ok(region_seeds(k, k, r, 0, params));
            }
            let level = Level::with_max_depth(k.level.n + refine, k.level.base, MAX_FINE_DEPTH)?;
            let factor = (k.level.base as i64).pow(refine);
            let fine = rasterize_window(spec, level, r.scale(factor).frame())?;
            Ok(region_seeds(k, &fine, r, refine, params))
        })
        .collect();
    Ok(collect(per.into_iter().collect::<Result<_>>()?))
}

/// Rasterize, seed the refined relation, and close it.
pub fn decompose(spec: &SetSpec, level: Level, params: &RelationParams) -> Result<Decomposition> {
    let k = rasterize(spec, level)?;
    decompose_compactum(spec, &k, params)
}

/// As [`decompose`] for an already rasterized `k` of `spec`.
pub fn decompose_compactum(
    spec: &SetSpec,
    k: &GridCompactum,
    params: &RelationParams,
) -> Result<Decomposition> {
    let seed = schoenflies_relation_refined(spec, k, params)?;
    close_equivalence(k, &seed)
}
