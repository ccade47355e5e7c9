//! Finite-resolution toolkit for the Schönflies analysis of planar compacta.
//!
//! A compactum is described by a [`SetSpec`] (a conservative box oracle),
//! rasterized into a [`GridCompactum`] at some [`Level`], and analysed by
//! counting components that cross strips and rectangular annuli. The
//! accumulation of crossing components seeds an equivalence whose classes form
//! a [`Decomposition`]; contracting the classes gives a [`QuotientGraph`], the
//! finite stand-in for the Peano model of the compactum.

pub mod decomposition;
pub mod error;
pub mod generators;
pub mod grid;
pub mod isometry;
pub mod schoenflies;
mod unionfind;

pub use decomposition::{
    close_equivalence, common_refinement, decompose, decompose_compactum, monotone_check,
    peano_check, quotient_graph, refines, schoenflies_relation, schoenflies_relation_refined,
    AnnulusFamily, Decomposition, MonotoneReport, PeanoReport, QuotientGraph, RelationParams,
    RelationSeed,
};
pub use error::{Error, Result};
pub use generators::{from_pbm, make_spec, random_compactum, GeneratorParams, RandomParams};
pub use grid::{
    coarsen, complement_components, diameter, hausdorff_distance, label_components, rasterize,
    rasterize_window, Cell, CellBox, CellRect, ComponentLabeling, Connectivity, GridCompactum, Hit,
    Level, Oracle, Rect, SetSpec,
};
pub use isometry::Isometry;
pub use schoenflies::{
    complement_diameter_scan, crossing_components, crossing_path, cut_wire, schoenflies_scan,
    separating_curve, CrossingMode, CrossingReport, CutWire, RectAnnulus, Region, ScanReport,
    SeparatingLoop, Strip, StripAxis,
};
