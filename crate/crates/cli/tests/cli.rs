use std::path::Path;
use std::process::Command;

use pcx_cli::report::load_decomposition;
use pcx_cli::{execute, CliError};
use pcx_core::{refines, Cell};
use serde_json::Value;

fn json(args: &[&str]) -> Value {
    let out = execute(std::iter::once("pcx").chain(args.iter().copied())).unwrap();
    serde_json::from_slice(&out.bytes).unwrap()
}

fn text(args: &[&str]) -> String {
    let out = execute(std::iter::once("pcx").chain(args.iter().copied())).unwrap();
    String::from_utf8(out.bytes).unwrap()
}

fn exit_code(args: &[&str], env: Option<(&str, &str)>) -> i32 {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_pcx"));
    cmd.args(args);
    if let Some((k, v)) = env {
        cmd.env(k, v);
    }
    cmd.output().unwrap().status.code().unwrap()
}

fn write(dir: &Path, name: &str, bytes: &[u8]) -> String {
    let p = dir.join(name);
    std::fs::write(&p, bytes).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn comb_scan_report() {
    let v = json(&[
        "scan",
        "--gen",
        "cantor_comb",
        "--levels",
        "2..6",
        "--strip",
        "h:0.25:0.75",
    ]);
    assert_eq!(v["schema"], "pcx/1");
    let s = &v["strips"][0];
    assert_eq!(s["m_int"], serde_json::json!([4, 8, 16, 32, 64]));
    assert_eq!(s["m_diff"], serde_json::json!([5, 9, 17, 33, 65]));
    assert_eq!(s["divergent"], true);
    assert_eq!(v["verdict"], "NotLocallyConnected");
}

#[test]
fn auto_strips_on_the_square_never_diverge() {
    let v = json(&["scan", "--gen", "unit_square", "--levels", "1..5"]);
    let strips = v["strips"].as_array().unwrap();
    assert!(!strips.is_empty());
    assert!(strips.iter().all(|s| s["divergent"] == false));
}

#[test]
fn spiral_has_a_circle_class() {
    let v = json(&[
        "decompose",
        "--gen",
        "spiral_disk",
        "--level",
        "7",
        "--format",
        "json",
    ]);
    let h = v["cell_size"].as_f64().unwrap();
    let big = v["classes"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["diameter"].as_f64().unwrap() >= 2.0 - 4.0 * h)
        .count();
    assert_eq!(big, 1);
}

#[test]
fn decomposition_round_trips_through_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = execute([
        "pcx",
        "decompose",
        "--gen",
        "topologist_sine",
        "--level",
        "5",
    ])
    .unwrap();
    let path = write(dir.path(), "d.json", &out.bytes);
    let d = load_decomposition(&out.bytes).unwrap();
    let again = load_decomposition(&std::fs::read(&path).unwrap()).unwrap();
    assert!(refines(&d, &again).unwrap() && refines(&again, &d).unwrap());
    let v = json(&["compare", "--a", &path, "--b", &path]);
    assert_eq!(v["a_refines_b"], true);
    assert_eq!(v["b_refines_a"], true);
    assert_eq!(v["equal"], true);
}

#[test]
fn compare_against_singletons() {
    let dir = tempfile::tempdir().unwrap();
    let d = execute(["pcx", "decompose", "--gen", "cantor_comb", "--level", "3"]).unwrap();
    let mut v: Value = serde_json::from_slice(&d.bytes).unwrap();
    let cells: Vec<Value> = v["classes"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|c| c["cells"].as_array().unwrap().clone())
        .map(|c| serde_json::json!({ "cells": [c] }))
        .collect();
    v["classes"] = Value::Array(cells);
    let a = write(dir.path(), "singletons.json", v.to_string().as_bytes());
    let b = write(dir.path(), "decomp.json", &d.bytes);
    let r = json(&["compare", "--a", &a, "--b", &b]);
    assert_eq!(r["a_refines_b"], true);
    assert_eq!(r["b_refines_a"], false);
}

#[test]
fn gen_writes_a_readable_bitmap() {
    let dir = tempfile::tempdir().unwrap();
    let pbm = execute(["pcx", "gen", "--gen", "unit_square", "--level", "4"]).unwrap();
    let text = String::from_utf8(pbm.bytes.clone()).unwrap();
    assert!(text.starts_with("P1\n"));
    assert!(text.contains("\n16 16\n"));
    let path = write(dir.path(), "square.pbm", &pbm.bytes);
    let v = json(&["components", "--input", &path]);
    assert_eq!(v["level"], 4);
    assert_eq!(v["cell_count"], 256);
    assert_eq!(v["component_count"], 1);
}

#[test]
fn plain_render_of_the_comb() {
    let svg = text(&["render", "--gen", "cantor_comb", "--level", "3", "--plain"]);
    assert!(svg.contains("version=\"1.1\""));
    // 8 teeth of 26 cells plus a 27-cell bar.
    assert_eq!(svg.matches("fill=\"#111111\"").count(), 8 * 26 + 27);
}

#[test]
fn rendered_teeth_are_one_color() {
    let svg = text(&["render", "--gen", "cantor_comb", "--level", "3"]);
    let s = 1024.0 / 27.0;
    let mut colors: std::collections::HashMap<i64, std::collections::HashSet<String>> =
        Default::default();
    for line in svg.lines().filter(|l| l.starts_with("<rect x=")) {
        let attr = |name: &str| {
            let start = line.find(&format!("{name}=\"")).unwrap() + name.len() + 2;
            line[start..].split('"').next().unwrap().to_string()
        };
        let x: f64 = attr("x").parse().unwrap();
        let y: f64 = attr("y").parse().unwrap();
        let col = (x / s).round() as i64;
        // Skip the bar, drawn in the top row.
        if (y / s).round() as i64 > 0 {
            colors.entry(col).or_default().insert(attr("fill"));
        }
    }
    assert_eq!(colors.len(), 8);
    assert!(colors.values().all(|c| c.len() == 1));
}

#[test]
fn jobs_do_not_change_the_bytes() {
    for cmd in [
        vec!["decompose", "--gen", "spiral_disk", "--level", "5"],
        vec!["render", "--gen", "cantor_comb", "--level", "4"],
        vec!["scan", "--gen", "topologist_sine", "--levels", "3..6"],
    ] {
        let run = |jobs: &str| {
            let mut argv = vec!["pcx"];
            argv.extend(&cmd);
            argv.extend(["--jobs", jobs]);
            execute(argv).unwrap().bytes
        };
        assert_eq!(run("1"), run("8"), "{cmd:?}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(
        exit_code(&["scan", "--gen", "cantor_comb", "--levels", "2..3"], None),
        0
    );
    assert_eq!(exit_code(&["scan", "--gen", "nope"], None), 2);
    assert_eq!(
        exit_code(&["scan", "--gen", "cantor_comb", "--strip", "d:0:1"], None),
        2
    );
    assert_eq!(
        exit_code(&["decompose", "--gen", "cantor_comb", "--base", "2"], None),
        2
    );
    assert_eq!(
        exit_code(&["decompose", "--gen", "unit_square", "--jobs", "0"], None),
        2
    );
    assert_eq!(exit_code(&["frobnicate"], None), 2);
    assert_eq!(
        exit_code(
            &["decompose", "--gen", "unit_square", "--level", "5"],
            Some(("PCX_MAX_LEVEL", "4"))
        ),
        2
    );
    assert_eq!(
        exit_code(
            &["decompose", "--gen", "unit_square", "--level", "3"],
            Some(("PCX_MAX_LEVEL", "4"))
        ),
        0
    );
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.pbm", b"P1\n2 2\n1 0 x 1\n");
    assert_eq!(exit_code(&["components", "--input", &bad], None), 3);
    let junk = write(dir.path(), "junk.json", b"{\"schema\": \"pcx/1\"");
    assert_eq!(exit_code(&["compare", "--a", &junk, "--b", &junk], None), 3);
    assert_eq!(
        exit_code(&["components", "--input", "/nonexistent/file.pbm"], None),
        3
    );
}

#[test]
fn out_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("q.json");
    let p = path.to_string_lossy().into_owned();
    assert_eq!(
        pcx_cli::run([
            "pcx",
            "quotient",
            "--gen",
            "cantor_comb",
            "--level",
            "3",
            "-o",
            &p
        ]),
        0
    );
    let v: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "quotient");
    assert_eq!(v["monotone"]["monotone"], true);
    assert_eq!(v["components"].as_array().unwrap().len(), 1);
}

#[test]
fn help_is_not_an_error() {
    assert!(matches!(execute(["pcx", "--help"]), Err(CliError::Info(_))));
    assert_eq!(exit_code(&["--help"], None), 0);
}

#[test]
fn decomposition_cells_are_integer_pairs() {
    let v = json(&["decompose", "--gen", "cantor_dust", "--level", "2"]);
    let first = &v["classes"][0]["cells"][0];
    assert_eq!(first, &serde_json::json!([0, 0]));
    let d = load_decomposition(v.to_string().as_bytes()).unwrap();
    assert_eq!(d.class_of(Cell::new(0, 0)), Some(0));
}
