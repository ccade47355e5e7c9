//! Oracles for the curve-based examples.

use crate::grid::{CellBox, Hit, Oracle, Rect};

/// Closure of the graph of `sin(1/x)` on `(0, 1]`: the curve plus the limit
/// bar `{0} x [-1, 1]`.
///
/// The curve test is exact interval arithmetic on `u = 1/x`; the bar lies on
/// the left edge of the bounding box and belongs to column 0.
#[derive(Debug, Clone, Copy)]
pub struct TopologistSine;

const SLACK: f64 = 1e-12;

impl Oracle for TopologistSine {
    fn classify(&self, b: CellBox) -> Hit {
        let r = b.rect();
        let y_overlaps_bar = r.y0 < 1.0 && r.y1 > -1.0;
        if b.cell.i == 0 && y_overlaps_bar {
            return Hit::Intersects;
        }
        if r.x1 <= 0.0 || r.x0 >= 1.0 {
            return Hit::Disjoint;
        }
        let (lo, hi) = if r.x0 <= 0.0 {
            // Every value in [-1, 1] is taken arbitrarily close to x = 0.
            (-1.0, 1.0)
        } else {
            sin_range(1.0 / r.x1.min(1.0), 1.0 / r.x0)
        };
        if r.y0 < hi && r.y1 > lo {
            Hit::Intersects
        } else if r.y0 < hi + SLACK && r.y1 > lo - SLACK {
            Hit::Unknown
        } else {
            Hit::Disjoint
        }
    }
}

/// Bounds of `sin` over `[a, b]`.
fn sin_range(a: f64, b: f64) -> (f64, f64) {
    use std::f64::consts::{FRAC_PI_2, PI};
    if b - a >= 2.0 * PI {
        return (-1.0, 1.0);
    }
    let (sa, sb) = (a.sin(), b.sin());
    let (mut lo, mut hi) = (sa.min(sb), sa.max(sb));
    // Critical points pi/2 + k pi inside the interval.
    let mut k = ((a - FRAC_PI_2) / PI).ceil();
    loop {
        let u = FRAC_PI_2 + k * PI;
        if u > b {
            break;
        }
        let v = u.sin();
        lo = lo.min(v);
        hi = hi.max(v);
        k += 1.0;
    }
    (lo, hi)
}

/// Closed unit disk together with the spiral
/// `(1 + exp(-decay t)) exp(2 pi i t)`, `0 <= t <= t_max`.
///
/// The spiral is stored as a polyline whose chord error is bounded; boxes
/// within that error of the polyline answer [`Hit::Unknown`].
#[derive(Debug, Clone)]
pub struct SpiralDisk {
    segments: Vec<[f64; 4]>,
    buckets: Vec<Vec<u32>>,
    grid: usize,
    origin: f64,
    bucket_size: f64,
    err: f64,
}

impl SpiralDisk {
    pub fn new(t_max: f64, decay: f64) -> SpiralDisk {
        use std::f64::consts::PI;
        let dt = 1e-3;
        // |L''| <= decay^2 + 4 pi decay + 2 (2 pi)^2; chord error <= |L''| dt^2 / 8.
        let curvature = decay * decay + 4.0 * PI * decay + 8.0 * PI * PI;
        let err = curvature * dt * dt / 8.0 * 1.25;
        let steps = (t_max / dt).ceil() as usize;
        let point = |t: f64| {
            let r = 1.0 + (-decay * t).exp();
            let a = 2.0 * PI * t;
            (r * a.cos(), r * a.sin())
        };
        let mut segments = Vec::with_capacity(steps);
        let mut prev = point(0.0);
        for s in 1..=steps {
            let t = (s as f64 * dt).min(t_max);
            let p = point(t);
            segments.push([prev.0, prev.1, p.0, p.1]);
            prev = p;
        }
        let grid = 256;
        let origin = -2.0 - 2.0 * err;
        let bucket_size = (4.0 + 4.0 * err) / grid as f64;
        let mut buckets = vec![Vec::new(); grid * grid];
        for (k, s) in segments.iter().enumerate() {
            let (bx0, by0, bx1, by1) = Self::bucket_span(
                origin,
                bucket_size,
                grid,
                s[0].min(s[2]) - err,
                s[1].min(s[3]) - err,
                s[0].max(s[2]) + err,
                s[1].max(s[3]) + err,
            );
            for by in by0..=by1 {
                for bx in bx0..=bx1 {
                    buckets[by * grid + bx].push(k as u32);
                }
            }
        }
        SpiralDisk {
            segments,
            buckets,
            grid,
            origin,
            bucket_size,
            err,
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn bucket_span(
        origin: f64,
        size: f64,
        grid: usize,
        x0: f64,
        y0: f64,
        x1: f64,
        y1: f64,
    ) -> (usize, usize, usize, usize) {
        let idx = |v: f64| (((v - origin) / size).floor().max(0.0) as usize).min(grid - 1);
        (idx(x0), idx(y0), idx(x1), idx(y1))
    }

    fn disk_hit(r: &Rect) -> bool {
        let dx = 0f64.max(r.x0).max(-r.x1);
        let dy = 0f64.max(r.y0).max(-r.y1);
        dx * dx + dy * dy < 1.0
    }

    fn spiral_hit(&self, r: &Rect) -> Hit {
        let e = self.err;
        let grown = Rect::new(r.x0 - e, r.y0 - e, r.x1 + e, r.y1 + e);
        let shrunk = Rect::new(r.x0 + e, r.y0 + e, r.x1 - e, r.y1 - e);
        let (bx0, by0, bx1, by1) = Self::bucket_span(
            self.origin,
            self.bucket_size,
            self.grid,
            grown.x0,
            grown.y0,
            grown.x1,
            grown.y1,
        );
        let mut near = false;
        for by in by0..=by1 {
            for bx in bx0..=bx1 {
                for &k in &self.buckets[by * self.grid + bx] {
                    let s = &self.segments[k as usize];
                    if shrunk.x0 < shrunk.x1
                        && shrunk.y0 < shrunk.y1
                        && segment_meets_box(s, &shrunk)
                    {
                        return Hit::Intersects;
                    }
                    if !near && segment_meets_box(s, &grown) {
                        near = true;
                    }
                }
            }
        }
        if near {
            Hit::Unknown
        } else {
            Hit::Disjoint
        }
    }
}

impl Oracle for SpiralDisk {
    fn classify(&self, b: CellBox) -> Hit {
        let r = b.rect();
        if Self::disk_hit(&r) {
            return Hit::Intersects;
        }
        self.spiral_hit(&r)
    }
}

/// Closed segment vs closed box (Liang-Barsky clipping).
fn segment_meets_box(s: &[f64; 4], r: &Rect) -> bool {
    let (x0, y0, dx, dy) = (s[0], s[1], s[2] - s[0], s[3] - s[1]);
    let mut t0 = 0.0f64;
    let mut t1 = 1.0f64;
    for (p, q) in [
        (-dx, x0 - r.x0),
        (dx, r.x1 - x0),
        (-dy, y0 - r.y0),
        (dy, r.y1 - y0),
    ] {
        if p == 0.0 {
            if q < 0.0 {
                return false;
            }
        } else {
            let t = q / p;
            if p < 0.0 {
                t0 = t0.max(t);
            } else {
                t1 = t1.min(t);
            }
            if t0 > t1 {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Cell, Level};

    #[test]
    fn sin_range_brackets_samples() {
        for (a, b) in [(0.3, 1.9), (2.0, 2.1), (10.0, 14.0), (1.0, 1.0 + 7.0)] {
            let (lo, hi) = sin_range(a, b);
            for k in 0..=200 {
                let v = (a + (b - a) * k as f64 / 200.0).sin();
                assert!(v >= lo - 1e-12 && v <= hi + 1e-12);
            }
        }
    }

    #[test]
    fn disk_excludes_boxes_touching_only_at_a_point() {
        let l = Level::new(3, 2).unwrap();
        // [1, 1.125] x [0, 0.125] touches the disk at (1, 0) only.
        assert!(!SpiralDisk::disk_hit(&Cell::new(8, 0).rect(l)));
        assert!(SpiralDisk::disk_hit(&Cell::new(7, 0).rect(l)));
    }

    #[test]
    fn spiral_start_point_is_covered() {
        let s = SpiralDisk::new(5.0, 1.0);
        let l = Level::new(6, 2).unwrap();
        // The spiral starts at (2, 0) and leaves upward.
        let hit = s.classify(CellBox {
            level: l,
            cell: Cell::new(127, 0),
        });
        assert!(hit.included());
        let miss = s.classify(CellBox {
            level: l,
            cell: Cell::new(-20, 100),
        });
        assert_eq!(miss, Hit::Disjoint);
    }

    #[test]
    fn segment_clip() {
        let r = Rect::new(0.0, 0.0, 1.0, 1.0);
        assert!(segment_meets_box(&[-1.0, 0.5, 2.0, 0.5], &r));
        assert!(!segment_meets_box(&[-1.0, 2.0, 2.0, 1.5], &r));
        assert!(segment_meets_box(&[1.0, 1.0, 3.0, 3.0], &r));
    }
}
