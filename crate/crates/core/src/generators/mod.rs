//! Built-in compacta: the classical examples plus random and bitmap sets.
//!
//! Cantor-type sets are exact on base-3 grids (ternary digit tests on the
//! lattice coordinates); the rest use base 2, where every grid coordinate is a
//! dyadic rational and the floating point box tests are exact.

mod curves;
mod pbm;
mod random;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use curves::{SpiralDisk, TopologistSine};
pub use pbm::{from_pbm, from_pbm_bytes, PbmSpec};
pub use random::{random_compactum, RandomParams};

use crate::error::{Error, Result};
use crate::grid::{CellBox, Hit, Oracle, Rect, SetSpec};

pub const GENERATOR_NAMES: [&str; 8] = [
    "cantor_comb",
    "topologist_sine",
    "spiral_disk",
    "sierpinski_carpet",
    "cantor_dust",
    "unit_square",
    "bars",
    "random_blobs",
];

/// Name plus the numeric knobs of a built-in generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorParams {
    pub name: String,
    /// Number of bars for `bars`.
    pub count: usize,
    /// Seed for `random_blobs`.
    pub seed: u64,
    /// Spiral parameter cut-off for `spiral_disk`.
    pub t_max: f64,
    /// Radial decay rate of the spiral, `1 + exp(-decay * t)`.
    pub decay: f64,
    pub random: RandomParams,
}

impl GeneratorParams {
    pub fn named(name: &str) -> GeneratorParams {
        GeneratorParams {
            name: name.to_string(),
            count: 3,
            seed: 42,
            t_max: 40.0,
            decay: 1.0,
            random: RandomParams::default(),
        }
    }
}

/// Subdivision base used by a generator.
pub fn native_base(name: &str) -> Result<u32> {
    match name {
        "cantor_comb" | "sierpinski_carpet" | "cantor_dust" => Ok(3),
        "topologist_sine" | "spiral_disk" | "unit_square" | "bars" | "random_blobs" => Ok(2),
        other => Err(Error::UnknownGenerator(other.to_string())),
    }
}

pub fn make_spec(params: &GeneratorParams) -> Result<SetSpec> {
    let unit = Some(Rect::new(0.0, 0.0, 1.0, 1.0));
    let spec = match params.name.as_str() {
        "cantor_comb" => SetSpec::new("cantor_comb", unit, 3, Arc::new(CantorComb)),
        "sierpinski_carpet" => SetSpec::new("sierpinski_carpet", unit, 3, Arc::new(Carpet)),
        "cantor_dust" => SetSpec::new("cantor_dust", unit, 3, Arc::new(CantorDust)),
        "unit_square" => SetSpec::new("unit_square", unit, 2, Arc::new(UnitSquare)),
        "topologist_sine" => SetSpec::new(
            "topologist_sine",
            Some(Rect::new(0.0, -1.0, 1.0, 1.0)),
            2,
            Arc::new(TopologistSine),
        ),
        "spiral_disk" => {
            if !(params.t_max > 0.0 && params.t_max <= 200.0) {
                return Err(Error::InvalidParams(format!(
                    "t_max must lie in (0, 200], got {}",
                    params.t_max
                )));
            }
            if !(params.decay > 0.0 && params.decay <= 10.0) {
                return Err(Error::InvalidParams(format!(
                    "decay must lie in (0, 10], got {}",
                    params.decay
                )));
            }
            let oracle = SpiralDisk::new(params.t_max, params.decay);
            SetSpec::new(
                "spiral_disk",
                Some(Rect::new(-2.0, -2.0, 2.0, 2.0)),
                2,
                Arc::new(oracle),
            )
        }
        "bars" => bars(params.count)?,
        "random_blobs" => random_compactum(params.seed, &params.random)?,
        other => return Err(Error::UnknownGenerator(other.to_string())),
    };
    Ok(spec)
}

/// Ternary digits of `v` (least significant first), `d` of them.
fn ternary_digits(mut v: i64, d: u32) -> impl Iterator<Item = i64> {
    (0..d).map(move |_| {
        let r = v % 3;
        v /= 3;
        r
    })
}

/// The open interval `(v, v + 1) / 3^d` meets the Cantor set iff `v` has no
/// ternary digit 1 and lies in `[0, 3^d)`.
pub fn cantor_cell(v: i64, d: u32) -> bool {
    v >= 0 && v < 3i64.pow(d) && ternary_digits(v, d).all(|t| t != 1)
}

struct CantorComb;

impl Oracle for CantorComb {
    fn classify(&self, b: CellBox) -> Hit {
        let d = b.level.n;
        let n = b.level.cells_per_unit();
        let (i, j) = (b.cell.i, b.cell.j);
        if !(0..n).contains(&j) || !(0..n).contains(&i) {
            return Hit::Disjoint;
        }
        // Teeth over the Cantor set; the bar y = 1 belongs to the top row.
        if cantor_cell(i, d) || j == n - 1 {
            Hit::Intersects
        } else {
            Hit::Disjoint
        }
    }
}

struct CantorDust;

impl Oracle for CantorDust {
    fn classify(&self, b: CellBox) -> Hit {
        let d = b.level.n;
        if cantor_cell(b.cell.i, d) && cantor_cell(b.cell.j, d) {
            Hit::Intersects
        } else {
            Hit::Disjoint
        }
    }
}

struct Carpet;

impl Oracle for Carpet {
    fn classify(&self, b: CellBox) -> Hit {
        let d = b.level.n;
        let n = b.level.cells_per_unit();
        let (i, j) = (b.cell.i, b.cell.j);
        if !(0..n).contains(&i) || !(0..n).contains(&j) {
            return Hit::Disjoint;
        }
        let holed = ternary_digits(i, d)
            .zip(ternary_digits(j, d))
            .any(|(a, c)| a == 1 && c == 1);
        if holed {
            Hit::Disjoint
        } else {
            Hit::Intersects
        }
    }
}

struct UnitSquare;

impl Oracle for UnitSquare {
    fn classify(&self, b: CellBox) -> Hit {
        let n = b.level.cells_per_unit();
        if (0..n).contains(&b.cell.i) && (0..n).contains(&b.cell.j) {
            Hit::Intersects
        } else {
            Hit::Disjoint
        }
    }
}

/// Union of closed axis-aligned rectangles with positive extent.
#[derive(Debug, Clone)]
pub(crate) struct RectUnion {
    pub rects: Vec<Rect>,
}

impl Oracle for RectUnion {
    fn classify(&self, b: CellBox) -> Hit {
        let c = b.rect();
        let hit = self
            .rects
            .iter()
            .any(|r| c.x0 < r.x1 && c.x1 > r.x0 && c.y0 < r.y1 && c.y1 > r.y0);
        if hit {
            Hit::Intersects
        } else {
            Hit::Disjoint
        }
    }
}

/// `count` full-height vertical bars in `[0, 1]^2` on a dyadic slot grid.
fn bars(count: usize) -> Result<SetSpec> {
    if count == 0 || count > 512 {
        return Err(Error::InvalidParams(format!(
            "bars needs 1..=512 bars, got {count}"
        )));
    }
    let slots = (2 * count).next_power_of_two() as f64;
    let w = 1.0 / slots;
    let rects: Vec<Rect> = (0..count)
        .map(|m| Rect::new(2.0 * m as f64 * w, 0.0, (2 * m + 1) as f64 * w, 1.0))
        .collect();
    let bbox = rects.iter().skip(1).fold(rects[0], |acc, r| acc.union(r));
    Ok(SetSpec::new(
        "bars",
        Some(bbox),
        2,
        Arc::new(RectUnion { rects }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{label_components, rasterize, Cell, Connectivity, Level};

    /// Independent enumeration of level-n Cantor intervals: repeatedly drop
    /// the open middle third of every interval, in exact integer units of 3^-n.
    fn cantor_intervals(n: u32) -> Vec<i64> {
        let mut ivs: Vec<(i64, i64)> = vec![(0, 3i64.pow(n))];
        for _ in 0..n {
            ivs = ivs
                .into_iter()
                .flat_map(|(a, b)| {
                    let t = (b - a) / 3;
                    [(a, a + t), (b - t, b)]
                })
                .collect();
        }
        ivs.into_iter().map(|(a, _)| a).collect()
    }

    #[test]
    fn cantor_digit_test_matches_enumeration() {
        for n in 0..=6 {
            let digits: Vec<i64> = (0..3i64.pow(n)).filter(|&v| cantor_cell(v, n)).collect();
            assert_eq!(digits, cantor_intervals(n), "level {n}");
        }
    }

    #[test]
    fn comb_teeth_occupy_cantor_columns() {
        let spec = make_spec(&GeneratorParams::named("cantor_comb")).unwrap();
        for n in 1..=4 {
            let k = rasterize(&spec, Level::new(n, 3).unwrap()).unwrap();
            let bottom: Vec<i64> = k.cells().filter(|c| c.j == 0).map(|c| c.i).collect();
            assert_eq!(bottom, cantor_intervals(n));
            assert_eq!(label_components(&k, Connectivity::Eight).len(), 1);
        }
    }

    #[test]
    fn cantor_set_times_zero_gives_four_runs_at_level_two() {
        // C x {0}: the segment lies on the bottom edge of its bbox, so it is
        // attributed to row 0.
        struct CantorLine;
        impl Oracle for CantorLine {
            fn classify(&self, b: CellBox) -> Hit {
                if b.cell.j == 0 && cantor_cell(b.cell.i, b.level.n) {
                    Hit::Intersects
                } else {
                    Hit::Disjoint
                }
            }
        }
        let spec = SetSpec::new(
            "cantor_line",
            Some(Rect::new(0.0, 0.0, 1.0, 0.0)),
            // degenerate bbox: the root row still covers the segment
            3,
            Arc::new(CantorLine),
        );
        let k = rasterize(&spec, Level::new(2, 3).unwrap()).unwrap();
        let row: Vec<i64> = k.cells().map(|c| c.i).collect();
        assert_eq!(row, cantor_intervals(2));
        assert_eq!(row, vec![0, 2, 6, 8]);
        assert!(k.cells().all(|c| c.j == 0));
    }

    #[test]
    fn carpet_cell_count() {
        let spec = make_spec(&GeneratorParams::named("sierpinski_carpet")).unwrap();
        for n in 0..=4u32 {
            let k = rasterize(&spec, Level::new(n, 3).unwrap()).unwrap();
            assert_eq!(k.len(), 8usize.pow(n));
        }
    }

    #[test]
    fn bars_are_separate() {
        let mut p = GeneratorParams::named("bars");
        p.count = 3;
        let spec = make_spec(&p).unwrap();
        let k = rasterize(&spec, Level::new(4, 2).unwrap()).unwrap();
        assert_eq!(label_components(&k, Connectivity::Eight).len(), 3);
        assert!(k.contains(Cell::new(0, 15)));
    }

    #[test]
    fn unknown_name_rejected() {
        assert_eq!(
            make_spec(&GeneratorParams::named("julia")).unwrap_err(),
            Error::UnknownGenerator("julia".into())
        );
        let mut p = GeneratorParams::named("spiral_disk");
        p.t_max = -1.0;
        assert!(matches!(make_spec(&p), Err(Error::InvalidParams(_))));
    }
}
