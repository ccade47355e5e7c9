//! JSON documents (schema `pcx/1`) and their text summaries.
//!
//! Documents are built as `serde_json::Value`s, whose maps keep keys sorted,
//! so the same inputs always give the same bytes.

use std::fmt::Write;

use pcx_core::decomposition::{MonotoneReport, QuotientGraph};
use pcx_core::schoenflies::ScanReport;
use pcx_core::{Cell, ComponentLabeling, Decomposition, GridCompactum, Level, RelationParams};
use serde_json::{json, Map, Value};

use crate::CliError;

pub const SCHEMA: &str = "pcx/1";

fn header(command: &str, source: &str, level: Option<Level>, base: u32) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("command".into(), json!(command));
    m.insert("source".into(), json!(source));
    m.insert("base".into(), json!(base));
    if let Some(l) = level {
        m.insert("level".into(), json!(l.n));
        m.insert("cell_size".into(), json!(l.cell_size()));
    }
    m
}

fn cells_json(cells: &[Cell]) -> Value {
    Value::Array(cells.iter().map(|c| json!([c.i, c.j])).collect())
}

pub fn to_bytes(v: &Value) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("json values always serialize");
    s.push('\n');
    s.into_bytes()
}

pub fn components(k: &GridCompactum, fg: &ComponentLabeling, holes: &[f64]) -> Value {
    let mut m = header("components", &k.source, Some(k.level), k.level.base);
    let comps: Vec<Value> = fg
        .components
        .iter()
        .map(|c| {
            let r = c.bbox.to_rect(k.level);
            json!({
                "id": c.id,
                "size": c.cells.len(),
                "diameter": c.diameter,
                "bbox": [r.x0, r.y0, r.x1, r.y1],
            })
        })
        .collect();
    m.insert("cell_count".into(), json!(k.len()));
    m.insert("connectivity".into(), json!(fg.connectivity.as_number()));
    m.insert("component_count".into(), json!(fg.len()));
    m.insert("components".into(), Value::Array(comps));
    m.insert(
        "complement".into(),
        json!({
            "connectivity": 4,
            "bounded_count": holes.len(),
            "bounded_diameters": holes,
        }),
    );
    Value::Object(m)
}

pub fn scan(source: &str, report: &ScanReport) -> Value {
    let mut m = header("scan", source, None, report.base);
    let body = serde_json::to_value(report).expect("scan reports serialize");
    if let Value::Object(b) = body {
        m.extend(b);
    }
    let sizes: Vec<f64> = report
        .levels
        .iter()
        .map(|&n| {
            Level {
                n,
                base: report.base,
            }
            .cell_size()
        })
        .collect();
    m.insert("cell_sizes".into(), json!(sizes));
    Value::Object(m)
}

pub fn decomposition(k: &GridCompactum, d: &Decomposition, params: &RelationParams) -> Value {
    let mut m = header("decompose", &k.source, Some(k.level), k.level.base);
    let classes: Vec<Value> = d
        .classes()
        .iter()
        .map(|c| {
            let (x, y) = c.centroid(d.level);
            json!({
                "id": c.id,
                "size": c.size(),
                "diameter": c.diameter,
                "centroid": [x, y],
                "cells": cells_json(&c.cells),
            })
        })
        .collect();
    m.insert(
        "params".into(),
        serde_json::to_value(params).expect("params serialize"),
    );
    m.insert("cell_count".into(), json!(d.cell_count()));
    m.insert("class_count".into(), json!(d.len()));
    m.insert(
        "non_singleton_count".into(),
        json!(d.non_singleton().count()),
    );
    m.insert(
        "max_class_diameter".into(),
        json!(d.classes().iter().map(|c| c.diameter).fold(0.0, f64::max)),
    );
    m.insert("classes".into(), Value::Array(classes));
    Value::Object(m)
}

pub fn quotient(k: &GridCompactum, g: &QuotientGraph, mono: &MonotoneReport, spur: usize) -> Value {
    let mut m = header("quotient", &k.source, Some(k.level), k.level.base);
    m.insert(
        "nodes".into(),
        serde_json::to_value(&g.nodes).expect("nodes serialize"),
    );
    m.insert("edges".into(), json!(g.edges));
    m.insert("components".into(), json!(g.components));
    m.insert("spur".into(), json!(spur));
    m.insert("arc_like".into(), json!(g.is_arc_like(spur)));
    m.insert(
        "simple_path_after_contraction".into(),
        json!(g.is_simple_path_after_contraction()),
    );
    m.insert(
        "monotone".into(),
        serde_json::to_value(mono).expect("reports serialize"),
    );
    Value::Object(m)
}

pub fn compare(
    a: &Decomposition,
    b: &Decomposition,
    a_refines_b: bool,
    b_refines_a: bool,
    meet: &Decomposition,
) -> Value {
    let mut m = header("compare", "", Some(a.level), a.level.base);
    m.remove("source");
    m.insert("a_refines_b".into(), json!(a_refines_b));
    m.insert("b_refines_a".into(), json!(b_refines_a));
    m.insert("equal".into(), json!(a_refines_b && b_refines_a));
    m.insert("a_classes".into(), json!(a.len()));
    m.insert("b_classes".into(), json!(b.len()));
    m.insert("common_refinement_classes".into(), json!(meet.len()));
    Value::Object(m)
}

/// Reads a decomposition document back.
pub fn load_decomposition(bytes: &[u8]) -> Result<Decomposition, CliError> {
    let v: Value = serde_json::from_slice(bytes).map_err(|e| CliError::Parse(e.to_string()))?;
    let bad = |what: &str| CliError::Parse(format!("decomposition document: {what}"));
    if v.get("schema").and_then(Value::as_str) != Some(SCHEMA) {
        return Err(bad("missing or unknown schema"));
    }
    let int = |key: &str| {
        v.get(key)
            .and_then(Value::as_u64)
            .and_then(|x| u32::try_from(x).ok())
            .ok_or_else(|| bad(&format!("`{key}` must be a non-negative integer")))
    };
    let level = Level::new(int("level")?, int("base")?).map_err(|e| bad(&e.to_string()))?;
    let classes = v
        .get("classes")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("`classes` must be an array"))?;
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::with_capacity(classes.len());
    for cls in classes {
        let cells = cls
            .get("cells")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("every class needs a `cells` array"))?;
        let mut v = Vec::with_capacity(cells.len());
        for c in cells {
            let pair = c.as_array().filter(|p| p.len() == 2);
            let ij = pair.and_then(|p| Some((p[0].as_i64()?, p[1].as_i64()?)));
            let (i, j) = ij.ok_or_else(|| bad("cells are [i, j] integer pairs"))?;
            if !seen.insert((i, j)) {
                return Err(bad(&format!("cell [{i}, {j}] is listed twice")));
            }
            v.push(Cell::new(i, j));
        }
        out.push(v);
    }
    Ok(Decomposition::from_classes(level, out))
}

pub fn text_summary(v: &Value) -> String {
    let mut out = String::new();
    let get = |k: &str| v.get(k).cloned().unwrap_or(Value::Null);
    let _ = writeln!(
        out,
        "{} {}",
        get("command").as_str().unwrap_or(""),
        get("source").as_str().unwrap_or("")
    );
    if let Value::Object(m) = v {
        for (k, x) in m {
            match x {
                Value::Array(_) | Value::Object(_) => {}
                other => {
                    let _ = writeln!(out, "  {k}: {other}");
                }
            }
        }
    }
    if let Some(strips) = v.get("strips").and_then(Value::as_array) {
        for s in strips {
            let _ = writeln!(
                out,
                "  strip {} m_int {} m_diff {} divergent {}",
                s["strip"], s["m_int"], s["m_diff"], s["divergent"]
            );
        }
    }
    out
}
