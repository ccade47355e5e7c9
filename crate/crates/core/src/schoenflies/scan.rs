//! Multi-level crossing scans and complement-diameter histograms.

use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{raw_crossings, snap_region, CrossingMode, Region, SnappedRegion, Strip};
use crate::error::{Error, Result};
use crate::grid::{complement_components, rasterize, GridCompactum, Level, SetSpec};

/// Number of trailing levels over which strictly growing counts flag divergence.
pub const DIVERGENCE_RUN: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LcVerdict {
    NotLocallyConnected,
    ConsistentWithLocallyConnected,
}

/// Crossing counts of one strip across the scanned levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StripScan {
    pub strip: Strip,
    /// Boundary offsets after snapping, per level.
    pub snapped: Vec<(f64, f64)>,
    pub m_int: Vec<usize>,
    pub m_diff: Vec<usize>,
    pub divergent: bool,
}

/// Sorted hole diameters per level and the growth flag derived from them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplementScan {
    pub levels: Vec<u32>,
    /// Diameters of bounded complementary components, largest first.
    pub diameters: Vec<Vec<f64>>,
    pub rank: usize,
    /// The `rank`-th largest diameter at the first level with holes (or the
    /// smallest if there are fewer holes).
    pub threshold: Option<f64>,
    /// Holes of diameter at least `threshold`, per level.
    pub counts_above: Vec<usize>,
    /// Set when `counts_above` strictly increases across the scanned levels.
    pub flag: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub base: u32,
    pub levels: Vec<u32>,
    pub strips: Vec<StripScan>,
    /// Whether the compactum is connected at the finest level; the verdict is
    /// only meaningful for continua.
    pub continuum: bool,
    pub verdict: LcVerdict,
    pub complement: Option<ComplementScan>,
}

pub(crate) fn strictly_increasing_tail(counts: &[usize], run: usize) -> bool {
    counts.len() >= run && counts[counts.len() - run..].windows(2).all(|w| w[0] < w[1])
}

fn levels_of(spec: &SetSpec, levels: &RangeInclusive<u32>) -> Result<Vec<Level>> {
    if levels.is_empty() {
        return Err(Error::InvalidParams("empty level range".into()));
    }
    levels.clone().map(|n| Level::new(n, spec.base)).collect()
}

/// Crossing counts for every strip on every given raster (ordered by level).
pub fn scan_compacta(ks: &[GridCompactum], strips: &[Strip]) -> Result<ScanReport> {
    let Some(last) = ks.last() else {
        return Err(Error::EmptyInput("scan needs at least one level"));
    };
    let jobs: Vec<(usize, usize)> = (0..strips.len())
        .flat_map(|s| (0..ks.len()).map(move |l| (s, l)))
        .collect();
    let results: Vec<Result<((f64, f64), usize, usize)>> = jobs
        .par_iter()
        .map(|&(s, l)| {
            let k = &ks[l];
            let snapped = snap_region(k, &Region::Strip(strips[s]))?;
            let SnappedRegion::Strip { lo, hi, .. } = snapped else {
                unreachable!()
            };
            let h = k.level.cell_size();
            let m_int = raw_crossings(k, &snapped, CrossingMode::Intersection)
                .ids
                .len();
            let m_diff = raw_crossings(k, &snapped, CrossingMode::Difference)
                .ids
                .len();
            Ok(((lo as f64 * h, hi as f64 * h), m_int, m_diff))
        })
        .collect();
    let mut scans: Vec<StripScan> = strips
        .iter()
        .map(|s| StripScan {
            strip: *s,
            snapped: Vec::new(),
            m_int: Vec::new(),
            m_diff: Vec::new(),
            divergent: false,
        })
        .collect();
    for (&(s, _), r) in jobs.iter().zip(results) {
        let (snap, mi, md) = r?;
        scans[s].snapped.push(snap);
        scans[s].m_int.push(mi);
        scans[s].m_diff.push(md);
    }
    for s in &mut scans {
        s.divergent = strictly_increasing_tail(&s.m_int, DIVERGENCE_RUN);
    }
    let verdict = if scans.iter().any(|s| s.divergent) {
        LcVerdict::NotLocallyConnected
    } else {
        LcVerdict::ConsistentWithLocallyConnected
    };
    let continuum =
        crate::grid::label_components(last, crate::grid::Connectivity::Eight).len() == 1;
    Ok(ScanReport {
        base: last.level.base,
        levels: ks.iter().map(|k| k.level.n).collect(),
        strips: scans,
        continuum,
        verdict,
        complement: None,
    })
}

/// Rasterizes `spec` at each level and counts strip crossings in both modes.
pub fn schoenflies_scan(
    spec: &SetSpec,
    strips: &[Strip],
    levels: RangeInclusive<u32>,
) -> Result<ScanReport> {
    let ks = rasterize_levels(spec, &levels)?;
    scan_compacta(&ks, strips)
}

pub(crate) fn rasterize_levels(
    spec: &SetSpec,
    levels: &RangeInclusive<u32>,
) -> Result<Vec<GridCompactum>> {
    levels_of(spec, levels)?
        .into_par_iter()
        .map(|l| rasterize(spec, l))
        .collect()
}

/// Bounded complementary components per level; the flag fires when the number
/// of holes at least as large as the `rank`-th largest hole of the first
/// level with holes keeps growing.
pub fn complement_diameter_scan(
    spec: &SetSpec,
    levels: RangeInclusive<u32>,
    rank: usize,
) -> Result<ComplementScan> {
    let ks = rasterize_levels(spec, &levels)?;
    complement_scan_compacta(&ks, rank)
}

pub fn complement_scan_compacta(ks: &[GridCompactum], rank: usize) -> Result<ComplementScan> {
    if rank == 0 {
        return Err(Error::InvalidParams("rank must be at least 1".into()));
    }
    let diameters: Vec<Vec<f64>> = ks
        .par_iter()
        .map(|k| -> Result<Vec<f64>> {
            if k.is_empty() {
                return Ok(Vec::new());
            }
            let window = k.frame().expand(1).to_rect(k.level);
            let lab = complement_components(k, window)?;
            let mut d: Vec<f64> = lab
                .components
                .iter()
                .filter(|c| !c.unbounded)
                .map(|c| c.diameter)
                .collect();
            d.sort_by(|a, b| b.total_cmp(a));
            Ok(d)
        })
        .collect::<Result<_>>()?;
    let threshold = diameters
        .iter()
        .find(|d| !d.is_empty())
        .map(|d| d[(rank - 1).min(d.len() - 1)]);
    let counts_above: Vec<usize> = match threshold {
        Some(t) => diameters
            .iter()
            .map(|d| d.iter().filter(|&&x| x >= t * (1.0 - 1e-9)).count())
            .collect(),
        None => vec![0; diameters.len()],
    };
    let flag = counts_above.len() >= 2 && counts_above.windows(2).all(|w| w[0] < w[1]);
    Ok(ComplementScan {
        levels: ks.iter().map(|k| k.level.n).collect(),
        diameters,
        rank,
        threshold,
        counts_above,
        flag,
    })
}
