//! Quotient graphs and the checks run on them.

use serde::{Deserialize, Serialize};

use super::Decomposition;
use crate::error::{Error, Result};
use crate::grid::{
    diameter_cells, label_components, label_mask, Cell, CellRect, Connectivity, GridCompactum,
    Level, Mask,
};
use crate::schoenflies::{scan_compacta, ScanReport, Strip};
use crate::unionfind::UnionFind;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuotientNode {
    pub id: usize,
    pub diameter: f64,
    pub size: usize,
}

/// Classes as nodes, joined when they hold 8-adjacent cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuotientGraph {
    pub level: Level,
    pub nodes: Vec<QuotientNode>,
    /// Sorted pairs `(a, b)` with `a < b`.
    pub edges: Vec<(usize, usize)>,
    /// Node ids of each graph component, ordered by smallest id.
    pub components: Vec<Vec<usize>>,
}

const FORWARD: [(i64, i64); 4] = [(1, 0), (-1, 1), (0, 1), (1, 1)];

pub fn quotient_graph(k: &GridCompactum, d: &Decomposition) -> Result<QuotientGraph> {
    if k.level != d.level {
        return Err(Error::LevelMismatch);
    }
    if !d.covers(k) {
        return Err(Error::PartitionMismatch);
    }
    let mut edges = Vec::new();
    for c in k.cells() {
        let a = d.class_of(c).unwrap();
        for (di, dj) in FORWARD {
            let n = Cell::new(c.i + di, c.j + dj);
            if let Some(b) = d.class_of(n) {
                if a != b {
                    edges.push((a.min(b), a.max(b)));
                }
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let n = d.len();
    let mut uf = UnionFind::new(n);
    for &(a, b) in &edges {
        uf.union(a, b);
    }
    let mut root_slot = vec![usize::MAX; n];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        let r = uf.find(v);
        if root_slot[r] == usize::MAX {
            root_slot[r] = components.len();
            components.push(Vec::new());
        }
        components[root_slot[r]].push(v);
    }
    Ok(QuotientGraph {
        level: d.level,
        nodes: d
            .classes()
            .iter()
            .map(|c| QuotientNode {
                id: c.id,
                diameter: c.diameter,
                size: c.size(),
            })
            .collect(),
        edges,
        components,
    })
}

impl QuotientGraph {
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }

    /// Suppresses every degree-2 node (joining its two neighbours) until none
    /// is left. Returns the surviving nodes and the resulting multigraph edges.
    pub fn contract_degree_two(&self) -> (Vec<usize>, Vec<(usize, usize)>) {
        let n = self.nodes.len();
        // Multigraph as per-node neighbour multisets.
        let mut adj = self.adjacency();
        let mut alive = vec![true; n];
        let mut queue: Vec<usize> = (0..n).filter(|&v| adj[v].len() == 2).collect();
        while let Some(v) = queue.pop() {
            if !alive[v] || adj[v].len() != 2 {
                continue;
            }
            let (a, b) = (adj[v][0], adj[v][1]);
            if a == v || b == v || a == b {
                // A loop or a double edge: the node closes a cycle.
                continue;
            }
            alive[v] = false;
            for (x, y) in [(a, b), (b, a)] {
                let p = adj[x].iter().position(|&w| w == v).unwrap();
                adj[x][p] = y;
            }
            queue.push(a);
            queue.push(b);
        }
        let nodes: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
        let mut edges = Vec::new();
        for &v in &nodes {
            for &w in &adj[v] {
                if v <= w {
                    edges.push((v, w));
                }
            }
        }
        // A loop appears twice in its node's list.
        edges.sort_unstable();
        let mut out = Vec::new();
        let mut i = 0;
        while i < edges.len() {
            out.push(edges[i]);
            i += if edges[i].0 == edges[i].1 { 2 } else { 1 };
        }
        (nodes, out)
    }

    /// Whether contracting degree-2 chains leaves a single node or a single
    /// simple edge.
    pub fn is_simple_path_after_contraction(&self) -> bool {
        if self.components.len() != 1 {
            return false;
        }
        let (nodes, edges) = self.contract_degree_two();
        match nodes.len() {
            1 => edges.is_empty(),
            2 => edges.len() == 1 && edges[0].0 != edges[0].1,
            _ => false,
        }
    }

    /// Graph distances from `root` (`usize::MAX` when unreachable).
    pub fn distances(&self, root: usize) -> Vec<usize> {
        let adj = self.adjacency();
        let mut dist = vec![usize::MAX; self.nodes.len()];
        let mut queue = std::collections::VecDeque::from([root]);
        dist[root] = 0;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Whether the graph is a thickened arc: seen from an extremal node, every
    /// distance layer has exactly one component from which the graph goes on
    /// for at least `spur` more layers. Side branches no longer than `spur`
    /// layers, and anything in the last `spur` layers, are tolerated.
    /// For graphs of thin chains this agrees with contracting degree-2 chains
    /// to a simple path; unlike that test it survives rasters several cells
    /// thick, whose cell graphs are full of short cycles.
    pub fn is_arc_like(&self, spur: usize) -> bool {
        if self.components.len() != 1 {
            return false;
        }
        let first = self.distances(0);
        let root = (0..first.len())
            .max_by_key(|&v| (first[v], std::cmp::Reverse(v)))
            .unwrap();
        let dist = self.distances(root);
        let last = *dist.iter().max().unwrap();
        let adj = self.adjacency();
        // Components of each layer.
        let mut uf = UnionFind::new(dist.len());
        for &(a, b) in &self.edges {
            if dist[a] == dist[b] {
                uf.union(a, b);
            }
        }
        // Deepest layer reachable from each layer component by stepping
        // outwards only, filled from the last layer in.
        let mut order: Vec<usize> = (0..dist.len()).collect();
        order.sort_by_key(|&v| std::cmp::Reverse(dist[v]));
        let mut comp_reach = dist.clone();
        for &v in &order {
            let mut best = dist[v];
            for &w in &adj[v] {
                if dist[w] == dist[v] + 1 {
                    best = best.max(comp_reach[uf.find(w)]);
                }
            }
            let r = uf.find(v);
            comp_reach[r] = comp_reach[r].max(best);
        }
        let mut live: Vec<Vec<usize>> = vec![Vec::new(); last + 1];
        for v in 0..dist.len() {
            let r = uf.find(v);
            if comp_reach[r] >= dist[v] + spur && !live[dist[v]].contains(&r) {
                live[dist[v]].push(r);
            }
        }
        (0..=last.saturating_sub(spur)).all(|d| live[d].len() == 1)
    }
}

/// Connectivity of each class and the component counts of K and its quotient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotoneReport {
    /// Whether each class (by id) is 8-connected.
    pub class_connected: Vec<bool>,
    pub all_connected: bool,
    pub quotient_components: usize,
    pub k_components: usize,
    /// All classes connected and the component counts agree.
    pub monotone: bool,
}

fn is_connected(cells: &[Cell]) -> bool {
    if cells.len() <= 1 {
        return true;
    }
    let frame = CellRect::bounding(cells);
    label_mask(&Mask::from_cells(frame, cells), Connectivity::Eight).1 == 1
}

pub fn monotone_check(k: &GridCompactum, d: &Decomposition) -> Result<MonotoneReport> {
    let g = quotient_graph(k, d)?;
    let class_connected: Vec<bool> = d.classes().iter().map(|c| is_connected(&c.cells)).collect();
    let all_connected = class_connected.iter().all(|&b| b);
    let k_components = label_components(k, Connectivity::Eight).len();
    Ok(MonotoneReport {
        all_connected,
        quotient_components: g.components.len(),
        k_components,
        monotone: all_connected && g.components.len() == k_components,
        class_connected,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdCounts {
    pub threshold: f64,
    /// Quotient components of diameter at least `threshold`, per level.
    pub counts: Vec<usize>,
    /// The count did not change over the last two levels.
    pub stable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeanoReport {
    pub levels: Vec<u32>,
    pub thresholds: Vec<ThresholdCounts>,
    /// Scan of the rasters with every class collapsed to its representative.
    pub representative_scan: Option<ScanReport>,
    /// Every threshold is stable and no strip of the scan diverges.
    pub consistent: bool,
}

/// Component counts above each threshold across levels, plus a strip scan of
/// the class-representative rasters when `strips` is nonempty.
pub fn peano_check(
    levels: &[(GridCompactum, Decomposition)],
    thresholds: &[f64],
    strips: &[Strip],
) -> Result<PeanoReport> {
    if levels.is_empty() {
        return Err(Error::EmptyInput("peano_check needs at least one level"));
    }
    let mut comp_diams: Vec<Vec<f64>> = Vec::new();
    for (k, d) in levels {
        let g = quotient_graph(k, d)?;
        comp_diams.push(
            g.components
                .iter()
                .map(|comp| {
                    let cells: Vec<Cell> = comp
                        .iter()
                        .flat_map(|&id| d.classes()[id].cells.iter().copied())
                        .collect();
                    diameter_cells(&cells, k.level)
                })
                .collect(),
        );
    }
    let thresholds: Vec<ThresholdCounts> = thresholds
        .iter()
        .map(|&t| {
            let counts: Vec<usize> = comp_diams
                .iter()
                .map(|ds| ds.iter().filter(|&&x| x >= t).count())
                .collect();
            let stable = counts.len() < 2 || counts[counts.len() - 1] == counts[counts.len() - 2];
            ThresholdCounts {
                threshold: t,
                counts,
                stable,
            }
        })
        .collect();
    let representative_scan = if strips.is_empty() {
        None
    } else {
        let reps: Vec<GridCompactum> = levels
            .iter()
            .map(|(k, d)| {
                GridCompactum::from_cells(
                    k.level,
                    format!("{}/representatives", k.source),
                    d.classes().iter().map(|c| c.representative()),
                )
            })
            .collect();
        Some(scan_compacta(&reps, strips)?)
    };
    let consistent = thresholds.iter().all(|t| t.stable)
        && representative_scan
            .as_ref()
            .is_none_or(|s| s.strips.iter().all(|x| !x.divergent));
    Ok(PeanoReport {
        levels: levels.iter().map(|(k, _)| k.level.n).collect(),
        thresholds,
        representative_scan,
        consistent,
    })
}
