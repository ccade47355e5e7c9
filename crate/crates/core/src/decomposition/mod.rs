//! Decompositions of a rasterized compactum: the Schönflies relation, its
//! equivalence closure, fineness comparisons, and the quotient graph.

mod quotient;
mod relation;

pub use quotient::{
    monotone_check, peano_check, quotient_graph, MonotoneReport, PeanoReport, QuotientGraph,
    QuotientNode, ThresholdCounts,
};
pub use relation::{
    annulus_regions, decompose, decompose_compactum, region_family, schoenflies_relation,
    schoenflies_relation_refined, strip_family, strip_regions, AnnulusFamily, RelationParams,
    RelationSeed,
};

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{diameter_cells, Cell, CellRect, GridCompactum, Level};
use crate::unionfind::UnionFind;

/// One class of a decomposition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Class {
    pub id: usize,
    /// Cells in row-major order.
    pub cells: Vec<Cell>,
    pub diameter: f64,
}

impl Class {
    pub fn size(&self) -> usize {
        self.cells.len()
    }

    /// Smallest cell in row-major order.
    pub fn representative(&self) -> Cell {
        self.cells[0]
    }

    /// Mean of the cell centers, in scene units.
    pub fn centroid(&self, level: Level) -> (f64, f64) {
        let n = self.cells.len() as f64;
        let (sx, sy) = self.cells.iter().fold((0.0, 0.0), |(x, y), c| {
            let (cx, cy) = c.center(level);
            (x + cx, y + cy)
        });
        (sx / n, sy / n)
    }
}

/// A partition of a compactum's cells. Class ids follow the row-major order
/// of each class's smallest cell.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub level: Level,
    classes: Vec<Class>,
    index: HashMap<Cell, usize>,
}

impl PartialEq for Decomposition {
    fn eq(&self, other: &Self) -> bool {
        self.level == other.level
            && self.classes.len() == other.classes.len()
            && self
                .classes
                .iter()
                .zip(&other.classes)
                .all(|(a, b)| a.cells == b.cells)
    }
}

impl Decomposition {
    /// Builds a decomposition from class cell lists (assumed disjoint); empty
    /// classes are dropped and ids are canonicalized.
    pub fn from_classes(
        level: Level,
        classes: impl IntoIterator<Item = Vec<Cell>>,
    ) -> Decomposition {
        let mut cls: Vec<Vec<Cell>> = classes
            .into_iter()
            .filter(|c| !c.is_empty())
            .map(|mut c| {
                c.sort();
                c.dedup();
                c
            })
            .collect();
        cls.sort_by_key(|c| c[0]);
        let mut index = HashMap::new();
        let classes: Vec<Class> = cls
            .into_iter()
            .enumerate()
            .map(|(id, cells)| {
                for &c in &cells {
                    index.insert(c, id);
                }
                Class {
                    id,
                    diameter: diameter_cells(&cells, level),
                    cells,
                }
            })
            .collect();
        Decomposition {
            level,
            classes,
            index,
        }
    }

    /// Every cell in its own class.
    pub fn singletons(k: &GridCompactum) -> Decomposition {
        Decomposition::from_classes(k.level, k.cells().map(|c| vec![c]))
    }

    pub fn classes(&self) -> &[Class] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, c: Cell) -> Option<usize> {
        self.index.get(&c).copied()
    }

    /// Number of cells covered.
    pub fn cell_count(&self) -> usize {
        self.index.len()
    }

    /// All cells in row-major order.
    pub fn cells(&self) -> Vec<Cell> {
        let mut v: Vec<Cell> = self.index.keys().copied().collect();
        v.sort();
        v
    }

    /// Whether the classes are pairwise disjoint.
    pub fn is_partition(&self) -> bool {
        self.classes.iter().map(|c| c.cells.len()).sum::<usize>() == self.index.len()
    }

    /// Whether the classes cover exactly the cells of `k`.
    pub fn covers(&self, k: &GridCompactum) -> bool {
        self.is_partition()
            && self.index.len() == k.len()
            && k.cells().all(|c| self.index.contains_key(&c))
    }

    pub fn non_singleton(&self) -> impl Iterator<Item = &Class> {
        self.classes.iter().filter(|c| c.cells.len() > 1)
    }
}

fn same_cells(d1: &Decomposition, d2: &Decomposition) -> Result<()> {
    if d1.level != d2.level {
        return Err(Error::LevelMismatch);
    }
    if d1.index.len() != d2.index.len() || d1.index.keys().any(|c| !d2.index.contains_key(c)) {
        return Err(Error::PartitionMismatch);
    }
    Ok(())
}

/// Merge sets to be identified into single classes.
pub(crate) fn closure_over(k: &GridCompactum, sets: &[Vec<Cell>]) -> Result<Decomposition> {
    let frame: CellRect = k.frame();
    let mut uf = UnionFind::new(frame.area());
    for set in sets {
        let mut first = None;
        for &c in set {
            if !k.contains(c) {
                return Err(Error::CellOutsideCompactum((c.i, c.j)));
            }
            let x = frame.index(c);
            match first {
                None => first = Some(x),
                Some(f) => {
                    uf.union(f, x);
                }
            }
        }
    }
    let mut groups: HashMap<usize, Vec<Cell>> = HashMap::new();
    for c in k.cells() {
        groups.entry(uf.find(frame.index(c))).or_default().push(c);
    }
    Ok(Decomposition::from_classes(k.level, groups.into_values()))
}

/// Smallest equivalence on `k`'s cells identifying every merge set.
pub fn close_equivalence(k: &GridCompactum, seed: &RelationSeed) -> Result<Decomposition> {
    closure_over(k, &seed.merge_sets)
}

/// True iff every class of `d1` lies inside a class of `d2`.
pub fn refines(d1: &Decomposition, d2: &Decomposition) -> Result<bool> {
    same_cells(d1, d2)?;
    Ok(d1.classes.iter().all(|cls| {
        let target = d2.index[&cls.cells[0]];
        cls.cells.iter().all(|c| d2.index[c] == target)
    }))
}

/// Classes are the nonempty intersections of a class of `d1` with one of `d2`.
pub fn common_refinement(d1: &Decomposition, d2: &Decomposition) -> Result<Decomposition> {
    same_cells(d1, d2)?;
    let mut groups: HashMap<(usize, usize), Vec<Cell>> = HashMap::new();
    for (c, &a) in &d1.index {
        groups.entry((a, d2.index[c])).or_default().push(*c);
    }
    Ok(Decomposition::from_classes(d1.level, groups.into_values()))
}
