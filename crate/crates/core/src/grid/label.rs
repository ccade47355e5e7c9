//! Connected-component labeling of cell masks.

use serde::{Deserialize, Serialize};

use super::metric::diameter_cells;
use super::{Cell, CellRect, GridCompactum, Level, Rect};
use crate::error::{Error, Result};

/// Whether diagonal neighbours are adjacent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Connectivity {
    Four,
    Eight,
}

impl Connectivity {
    pub fn from_number(k: u32) -> Option<Connectivity> {
        match k {
            4 => Some(Connectivity::Four),
            8 => Some(Connectivity::Eight),
            _ => None,
        }
    }

    pub fn as_number(&self) -> u32 {
        match self {
            Connectivity::Four => 4,
            Connectivity::Eight => 8,
        }
    }

    pub(crate) fn offsets(&self) -> &'static [(i64, i64)] {
        const FOUR: [(i64, i64); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];
        const EIGHT: [(i64, i64); 8] = [
            (1, 0),
            (-1, 0),
            (0, 1),
            (0, -1),
            (1, 1),
            (-1, 1),
            (1, -1),
            (-1, -1),
        ];
        match self {
            Connectivity::Four => &FOUR,
            Connectivity::Eight => &EIGHT,
        }
    }
}

/// Dense boolean raster over a cell rectangle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    pub frame: CellRect,
    bits: Vec<bool>,
}

impl Mask {
    pub fn new(frame: CellRect) -> Mask {
        Mask {
            frame,
            bits: vec![false; frame.area()],
        }
    }

    pub fn from_cells<'a>(frame: CellRect, cells: impl IntoIterator<Item = &'a Cell>) -> Mask {
        let mut m = Mask::new(frame);
        for c in cells {
            if frame.contains(*c) {
                m.set(*c, true);
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, c: Cell) -> bool {
        self.frame.contains(c) && self.bits[self.frame.index(c)]
    }

    #[inline]
    pub fn set(&mut self, c: Cell, v: bool) {
        let k = self.frame.index(c);
        self.bits[k] = v;
    }

    #[inline]
    pub(crate) fn get_index(&self, k: usize) -> bool {
        self.bits[k]
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(k, _)| self.frame.cell_at(k))
    }

    /// Cells of the frame not in the mask.
    pub fn complement(&self) -> Mask {
        Mask {
            frame: self.frame,
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }
}

/// Labels set cells of `mask`; returns per-cell labels (0 = unset, otherwise
/// component id + 1) and the number of components. Ids follow row-major
/// order of each component's first cell.
pub fn label_mask(mask: &Mask, conn: Connectivity) -> (Vec<u32>, usize) {
    let frame = mask.frame;
    let (w, h) = (frame.width(), frame.height());
    let mut labels = vec![0u32; frame.area()];
    let mut next = 0u32;
    let mut stack = Vec::new();
    for start in 0..labels.len() {
        if !mask.get_index(start) || labels[start] != 0 {
            continue;
        }
        next += 1;
        labels[start] = next;
        stack.push(start);
        while let Some(k) = stack.pop() {
            let (x, y) = ((k as i64) % w, (k as i64) / w);
            for &(dx, dy) in conn.offsets() {
                let (nx, ny) = (x + dx, y + dy);
                if nx < 0 || ny < 0 || nx >= w || ny >= h {
                    continue;
                }
                let nk = (ny * w + nx) as usize;
                if mask.get_index(nk) && labels[nk] == 0 {
                    labels[nk] = next;
                    stack.push(nk);
                }
            }
        }
    }
    (labels, next as usize)
}

/// Which sides of the labeled frame a component reaches.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Touch {
    pub left: bool,
    pub right: bool,
    pub bottom: bool,
    pub top: bool,
}

impl Touch {
    pub fn any(&self) -> bool {
        self.left || self.right || self.bottom || self.top
    }
}

/// One labeled component.
#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub id: usize,
    /// Cells in row-major order.
    pub cells: Vec<Cell>,
    pub bbox: CellRect,
    /// Diameter in scene units (box extremes).
    pub diameter: f64,
    pub touches: Touch,
    /// Set for complement components that reach the window frame.
    pub unbounded: bool,
}

/// Partition of a cell set into maximal connected pieces.
#[derive(Debug, Clone)]
pub struct ComponentLabeling {
    pub level: Level,
    pub connectivity: Connectivity,
    frame: CellRect,
    labels: Vec<u32>,
    pub components: Vec<Component>,
}

impl ComponentLabeling {
    pub fn from_mask(level: Level, mask: &Mask, conn: Connectivity) -> ComponentLabeling {
        let (labels, count) = label_mask(mask, conn);
        let frame = mask.frame;
        let mut cells: Vec<Vec<Cell>> = vec![Vec::new(); count];
        for (k, &l) in labels.iter().enumerate() {
            if l != 0 {
                cells[(l - 1) as usize].push(frame.cell_at(k));
            }
        }
        let components = cells
            .into_iter()
            .enumerate()
            .map(|(id, cells)| {
                let bbox = CellRect::bounding(&cells);
                let touches = Touch {
                    left: bbox.i0 == frame.i0,
                    right: bbox.i1 == frame.i1,
                    bottom: bbox.j0 == frame.j0,
                    top: bbox.j1 == frame.j1,
                };
                Component {
                    id,
                    diameter: diameter_cells(&cells, level),
                    bbox,
                    touches,
                    unbounded: false,
                    cells,
                }
            })
            .collect();
        ComponentLabeling {
            level,
            connectivity: conn,
            frame,
            labels,
            components,
        }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Component id of a cell, if the cell was labeled.
    pub fn label(&self, c: Cell) -> Option<usize> {
        if !self.frame.contains(c) {
            return None;
        }
        match self.labels[self.frame.index(c)] {
            0 => None,
            l => Some((l - 1) as usize),
        }
    }

    pub fn frame(&self) -> CellRect {
        self.frame
    }
}

/// Components of the compactum's cells (foreground connectivity defaults to 8).
pub fn label_components(k: &GridCompactum, conn: Connectivity) -> ComponentLabeling {
    let mask = k.mask(k.frame());
    ComponentLabeling::from_mask(k.level, &mask, conn)
}

/// 4-connected components of the window cells outside `k`. Components that
/// reach the window frame are flagged unbounded.
pub fn complement_components(k: &GridCompactum, window: Rect) -> Result<ComponentLabeling> {
    let frame = window.snap_out(k.level);
    if !frame.contains_rect(&k.frame()) {
        return Err(Error::WindowViolation(format!(
            "window {:?} does not cover the cells {:?}",
            frame,
            k.frame()
        )));
    }
    let mask = k.mask(frame).complement();
    let mut lab = ComponentLabeling::from_mask(k.level, &mask, Connectivity::Four);
    for comp in &mut lab.components {
        comp.unbounded = comp.touches.any();
    }
    Ok(lab)
}
