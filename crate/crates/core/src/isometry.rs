//! The eight symmetries of the square lattice about the origin.

use std::sync::Arc;

use crate::decomposition::Decomposition;
use crate::grid::{Cell, CellBox, GridCompactum, Hit, Oracle, Rect, SetSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Isometry {
    Identity,
    Rot90,
    Rot180,
    Rot270,
    /// `(x, y) -> (-x, y)`
    FlipX,
    /// `(x, y) -> (x, -y)`
    FlipY,
    /// `(x, y) -> (y, x)`
    Transpose,
    /// `(x, y) -> (-y, -x)`
    AntiTranspose,
}

impl Isometry {
    pub const ALL: [Isometry; 8] = [
        Isometry::Identity,
        Isometry::Rot90,
        Isometry::Rot180,
        Isometry::Rot270,
        Isometry::FlipX,
        Isometry::FlipY,
        Isometry::Transpose,
        Isometry::AntiTranspose,
    ];

    /// Integer linear map `(a, b, c, d)` acting as `(x, y) -> (a x + b y, c x + d y)`.
    fn matrix(&self) -> (i64, i64, i64, i64) {
        match self {
            Isometry::Identity => (1, 0, 0, 1),
            Isometry::Rot90 => (0, -1, 1, 0),
            Isometry::Rot180 => (-1, 0, 0, -1),
            Isometry::Rot270 => (0, 1, -1, 0),
            Isometry::FlipX => (-1, 0, 0, 1),
            Isometry::FlipY => (1, 0, 0, -1),
            Isometry::Transpose => (0, 1, 1, 0),
            Isometry::AntiTranspose => (0, -1, -1, 0),
        }
    }

    pub fn inverse(&self) -> Isometry {
        match self {
            Isometry::Rot90 => Isometry::Rot270,
            Isometry::Rot270 => Isometry::Rot90,
            other => *other,
        }
    }

    pub fn apply_point(&self, x: f64, y: f64) -> (f64, f64) {
        let (a, b, c, d) = self.matrix();
        (a as f64 * x + b as f64 * y, c as f64 * x + d as f64 * y)
    }

    /// Image of a cell; the map is exact on doubled center coordinates.
    pub fn apply_cell(&self, cell: Cell) -> Cell {
        let (a, b, c, d) = self.matrix();
        let (x, y) = (2 * cell.i + 1, 2 * cell.j + 1);
        let (u, v) = (a * x + b * y, c * x + d * y);
        Cell::new((u - 1).div_euclid(2), (v - 1).div_euclid(2))
    }

    pub fn apply_rect(&self, r: &Rect) -> Rect {
        let (ax, ay) = self.apply_point(r.x0, r.y0);
        let (bx, by) = self.apply_point(r.x1, r.y1);
        Rect::new(ax.min(bx), ay.min(by), ax.max(bx), ay.max(by))
    }

    pub fn apply_spec(&self, spec: &SetSpec) -> SetSpec {
        struct Moved {
            inner: Arc<dyn Oracle>,
            back: Isometry,
        }
        impl Oracle for Moved {
            fn classify(&self, b: CellBox) -> Hit {
                self.inner.classify(CellBox {
                    level: b.level,
                    cell: self.back.apply_cell(b.cell),
                })
            }
        }
        SetSpec {
            name: spec.name.clone(),
            bbox: spec.bbox.map(|r| self.apply_rect(&r)),
            base: spec.base,
            oracle: Arc::new(Moved {
                inner: spec.oracle.clone(),
                back: self.inverse(),
            }),
        }
    }

    pub fn apply_compactum(&self, k: &GridCompactum) -> GridCompactum {
        GridCompactum::from_cells(k.level, &k.source, k.cells().map(|c| self.apply_cell(c)))
    }

    pub fn apply_decomposition(&self, d: &Decomposition) -> Decomposition {
        Decomposition::from_classes(
            d.level,
            d.classes()
                .iter()
                .map(|cls| cls.cells.iter().map(|&c| self.apply_cell(c)).collect()),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trips_cells() {
        for iso in Isometry::ALL {
            for c in [Cell::new(0, 0), Cell::new(-3, 5), Cell::new(7, -2)] {
                assert_eq!(iso.inverse().apply_cell(iso.apply_cell(c)), c, "{iso:?}");
            }
        }
    }

    #[test]
    fn rotation_moves_unit_cell() {
        // [0,1]^2 rotated by 90 degrees is [-1,0] x [0,1].
        assert_eq!(
            Isometry::Rot90.apply_cell(Cell::new(0, 0)),
            Cell::new(-1, 0)
        );
        assert_eq!(
            Isometry::FlipY.apply_cell(Cell::new(2, 0)),
            Cell::new(2, -1)
        );
    }

    #[test]
    fn group_closure_under_composition() {
        let c = Cell::new(3, 1);
        let twice = Isometry::Rot90.apply_cell(Isometry::Rot90.apply_cell(c));
        assert_eq!(twice, Isometry::Rot180.apply_cell(c));
    }
}
