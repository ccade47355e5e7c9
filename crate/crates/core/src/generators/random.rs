//! Seeded random compacta in the unit square: bars and round blobs.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::RectUnion;
use crate::error::{Error, Result};
use crate::grid::{CellBox, Hit, Oracle, Rect, SetSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomParams {
    /// Number of thin axis-parallel bars.
    pub bars: usize,
    /// Number of blobs (disks and boxes).
    pub blobs: usize,
    /// Coordinates are multiples of `2^-granularity`.
    pub granularity: u32,
    /// Make every bar vertical and span `y in [0, 1]`.
    pub full_height_bars: bool,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams {
            bars: 3,
            blobs: 4,
            granularity: 6,
            full_height_bars: false,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Disk {
    cx: f64,
    cy: f64,
    r: f64,
}

struct Shapes {
    rects: RectUnion,
    disks: Vec<Disk>,
}

impl Oracle for Shapes {
    fn classify(&self, b: CellBox) -> Hit {
        if self.rects.classify(b) == Hit::Intersects {
            return Hit::Intersects;
        }
        let r = b.rect();
        let hit = self.disks.iter().any(|d| {
            let dx = (r.x0 - d.cx).max(d.cx - r.x1).max(0.0);
            let dy = (r.y0 - d.cy).max(d.cy - r.y1).max(0.0);
            dx * dx + dy * dy < d.r * d.r
        });
        if hit {
            Hit::Intersects
        } else {
            Hit::Disjoint
        }
    }
}

/// Deterministic union of random bars and blobs; the same seed and params
/// always give the same set.
pub fn random_compactum(seed: u64, params: &RandomParams) -> Result<SetSpec> {
    if !(2..=20).contains(&params.granularity) {
        return Err(Error::InvalidParams(format!(
            "granularity must lie in 2..=20, got {}",
            params.granularity
        )));
    }
    let name = format!("random_blobs_{seed}");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = 1u64 << params.granularity;
    let unit = 1.0 / g as f64;
    let mut rects = Vec::new();
    let mut disks = Vec::new();
    for _ in 0..params.bars {
        let thick = rng.gen_range(1..=(g / 32).max(1)) as f64 * unit;
        if params.full_height_bars {
            let x = rng.gen_range(0..g) as f64 * unit;
            rects.push(Rect::new(x, 0.0, (x + thick).min(1.0), 1.0));
            continue;
        }
        let a = rng.gen_range(0..g) as f64 * unit;
        let b = rng.gen_range(0..g) as f64 * unit;
        let len = rng.gen_range(g / 4..=g) as f64 * unit;
        let (s0, s1) = ((b - len / 2.0).max(0.0), (b + len / 2.0).min(1.0));
        let t1 = (a + thick).min(1.0);
        if rng.gen_bool(0.5) {
            rects.push(Rect::new(a, s0, t1, s1));
        } else {
            rects.push(Rect::new(s0, a, s1, t1));
        }
    }
    for _ in 0..params.blobs {
        let size = rng.gen_range(1..=(g / 8).max(1)) as f64 * unit;
        let cx = rng.gen_range(0..g) as f64 * unit;
        let cy = rng.gen_range(0..g) as f64 * unit;
        if rng.gen_bool(0.5) {
            let r = size.min(cx).min(1.0 - cx).min(cy).min(1.0 - cy);
            if r > 0.0 {
                disks.push(Disk { cx, cy, r });
                continue;
            }
        }
        let x1 = (cx + size).min(1.0);
        let y1 = (cy + size).min(1.0);
        if x1 > cx && y1 > cy {
            rects.push(Rect::new(cx, cy, x1, y1));
        }
    }
    rects.retain(|r| r.width() > 0.0 && r.height() > 0.0);
    let mut boxes: Vec<Rect> = rects.clone();
    boxes.extend(
        disks
            .iter()
            .map(|d| Rect::new(d.cx - d.r, d.cy - d.r, d.cx + d.r, d.cy + d.r)),
    );
    let Some(first) = boxes.first().copied() else {
        return Ok(SetSpec::empty(name, 2));
    };
    let bbox = boxes.iter().fold(first, |acc, r| acc.union(r));
    Ok(SetSpec::new(
        name,
        Some(bbox),
        2,
        Arc::new(Shapes {
            rects: RectUnion { rects },
            disks,
        }),
    ))
}
