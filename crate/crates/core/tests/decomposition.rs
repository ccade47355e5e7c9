use std::collections::HashMap;

use pcx_core::decomposition::{close_equivalence, common_refinement, refines, RelationSeed};
use pcx_core::generators::{cantor_cell, GENERATOR_NAMES};
use pcx_core::*;

fn spec(name: &str) -> SetSpec {
    make_spec(&GeneratorParams::named(name)).unwrap()
}

fn run(name: &str, n: u32) -> (GridCompactum, Decomposition) {
    let s = spec(name);
    let level = Level::new(n, s.base).unwrap();
    let k = rasterize(&s, level).unwrap();
    let d = decompose_compactum(&s, &k, &RelationParams::default()).unwrap();
    (k, d)
}

/// Level small enough for the equivariance sweep to stay quick.
fn sweep_level(name: &str) -> u32 {
    if generators::native_base(name).unwrap() == 3 {
        4
    } else {
        5
    }
}

/// Distance in cells from column `i` to the nearest column over the Cantor
/// set, from a direct walk over the ternary intervals.
fn cantor_column_gap(i: i64, n: u32) -> i64 {
    let cols: Vec<i64> = (0..3i64.pow(n))
        .filter(|&v| ternary_free_of_ones(v, n))
        .collect();
    cols.iter().map(|c| (c - i).abs()).min().unwrap()
}

fn ternary_free_of_ones(mut v: i64, n: u32) -> bool {
    for _ in 0..n {
        if v % 3 == 1 {
            return false;
        }
        v /= 3;
    }
    true
}

#[test]
fn unit_square_is_all_singletons() {
    let (k, d) = run("unit_square", 5);
    assert_eq!(d, Decomposition::singletons(&k));
}

#[test]
fn comb_classes_are_tooth_columns() {
    let (k, d) = run("cantor_comb", 4);
    let n = 81;
    let h = k.level.cell_size();
    assert!(d.covers(&k));
    for cls in d.classes() {
        let f = CellRect::bounding(&cls.cells);
        assert!(
            f.width() <= 3,
            "class {} spans {} columns",
            cls.id,
            f.width()
        );
    }
    for i in (0..n).filter(|&i| ternary_free_of_ones(i, 4)) {
        let ids: Vec<usize> = (0..n)
            .map(|j| d.class_of(Cell::new(i, j)).unwrap())
            .collect();
        assert!(ids.windows(2).all(|w| w[0] == w[1]), "column {i} split");
        assert!(d.classes()[ids[0]].diameter >= 1.0 - 4.0 * h);
    }
    for i in 0..n {
        if cantor_column_gap(i, 4) > 4 {
            let c = Cell::new(i, n - 1);
            assert_eq!(
                d.classes()[d.class_of(c).unwrap()].size(),
                1,
                "bar cell {i}"
            );
        }
    }
}

/// Vertical fibers of the projection to the x axis, with the bar cut into
/// singletons away from the Cantor columns.
fn comb_fibers(k: &GridCompactum, n: u32) -> Decomposition {
    let top = k.level.cells_per_unit() - 1;
    let mut classes: HashMap<i64, Vec<Cell>> = HashMap::new();
    let mut singles = Vec::new();
    for c in k.cells() {
        if cantor_cell(c.i, n) {
            classes.entry(c.i).or_default().push(c);
        } else {
            assert_eq!(c.j, top);
            singles.push(vec![c]);
        }
    }
    Decomposition::from_classes(k.level, classes.into_values().chain(singles))
}

#[test]
fn comb_matches_fibers_up_to_tolerance() {
    let (k, d) = run("cantor_comb", 4);
    let fibers = comb_fibers(&k, 4);
    // Computed classes may take in bar cells next to a tooth; away from those
    // bands the two decompositions agree.
    let band = |c: &Cell| c.j == k.level.cells_per_unit() - 1 && cantor_column_gap(c.i, 4) <= 2;
    let keep: Vec<Cell> = k.cells().filter(|c| !band(c)).collect();
    let restrict = |dd: &Decomposition| {
        let mut m: HashMap<usize, Vec<Cell>> = HashMap::new();
        for &c in &keep {
            m.entry(dd.class_of(c).unwrap()).or_default().push(c);
        }
        Decomposition::from_classes(k.level, m.into_values())
    };
    let (a, b) = (restrict(&d), restrict(&fibers));
    assert!(refines(&a, &b).unwrap());
    assert!(refines(&b, &a).unwrap());
}

#[test]
fn sine_bar_is_one_class() {
    for n in [5, 6] {
        let (k, d) = run("topologist_sine", n);
        let h = k.level.cell_size();
        let bar: Vec<Cell> = k.cells().filter(|c| c.i == 0).collect();
        let id = d.class_of(bar[0]).unwrap();
        assert!(bar.iter().all(|c| d.class_of(*c) == Some(id)));
        assert!(d.classes()[id].diameter >= 2.0 - 4.0 * h);
        for cls in d.classes() {
            if cls.centroid(k.level).0 > 4.0 * h {
                assert_eq!(cls.size(), 1, "level {n} class {}", cls.id);
            }
        }
    }
}

#[test]
fn sine_quotient_is_arc_like() {
    let (k, d) = run("topologist_sine", 5);
    let g = quotient_graph(&k, &d).unwrap();
    assert_eq!(g.components.len(), 1);
    assert!(g.is_arc_like(4));
}

#[test]
fn comb_quotient_is_an_arc() {
    let (k, d) = run("cantor_comb", 4);
    let g = quotient_graph(&k, &d).unwrap();
    assert_eq!(g.components.len(), 1);
    assert!(g.is_arc_like(0));
}

#[test]
fn singleton_quotient_matches_cell_graph() {
    let s = spec("sierpinski_carpet");
    let k = rasterize(&s, Level::new(2, 3).unwrap()).unwrap();
    let d = Decomposition::singletons(&k);
    let g = quotient_graph(&k, &d).unwrap();
    let cells: Vec<Cell> = k.cells().collect();
    let mut want = 0;
    for (x, a) in cells.iter().enumerate() {
        for b in &cells[x + 1..] {
            if a.is_8_adjacent(b) {
                want += 1;
            }
        }
    }
    assert_eq!(g.edges.len(), want);
    assert_eq!(g.nodes.len(), k.len());
}

#[test]
fn monotone_on_every_generator() {
    for name in GENERATOR_NAMES {
        let (k, d) = run(name, sweep_level(name));
        let m = monotone_check(&k, &d).unwrap();
        assert!(m.all_connected, "{name}");
        assert_eq!(m.quotient_components, m.k_components, "{name}");
        assert!(m.monotone, "{name}");
    }
}

#[test]
fn far_merge_is_flagged() {
    let s = spec("unit_square");
    let k = rasterize(&s, Level::new(3, 2).unwrap()).unwrap();
    let seed = RelationSeed {
        merge_sets: vec![vec![Cell::new(0, 0), Cell::new(7, 7)]],
    };
    let d = close_equivalence(&k, &seed).unwrap();
    let m = monotone_check(&k, &d).unwrap();
    assert!(!m.all_connected);
    assert!(!m.monotone);
}

#[test]
fn decompose_is_equivariant() {
    for name in GENERATOR_NAMES {
        let s = spec(name);
        let level = Level::new(sweep_level(name), s.base).unwrap();
        let base = decompose(&s, level, &RelationParams::default()).unwrap();
        for iso in Isometry::ALL {
            let moved = decompose(&iso.apply_spec(&s), level, &RelationParams::default()).unwrap();
            assert_eq!(
                moved,
                iso.apply_decomposition(&base),
                "{name} under {iso:?}"
            );
        }
    }
}

#[test]
fn comb_peano_counts_are_one() {
    let levels: Vec<_> = (3..=5).map(|n| run("cantor_comb", n)).collect();
    let r = peano_check(&levels, &[0.1, 0.5, 0.9], &[]).unwrap();
    for t in &r.thresholds {
        assert!(t.counts.iter().all(|&c| c == 1), "{t:?}");
        assert!(t.stable);
    }
}

#[test]
fn carpet_peano_scan_matches_carpet() {
    let strips = [
        Strip::horizontal(1.0 / 3.0, 2.0 / 3.0),
        Strip::vertical(0.0, 1.0 / 3.0),
    ];
    let levels: Vec<_> = (2..=4).map(|n| run("sierpinski_carpet", n)).collect();
    for (k, d) in &levels {
        assert_eq!(*d, Decomposition::singletons(k));
    }
    let r = peano_check(&levels, &[0.5], &strips).unwrap();
    assert_eq!(r.thresholds[0].counts, vec![1, 1, 1]);
    let rep = r.representative_scan.unwrap();
    let direct = schoenflies::scan_compacta(
        &levels.iter().map(|(k, _)| k.clone()).collect::<Vec<_>>(),
        &strips,
    )
    .unwrap();
    assert_eq!(rep.strips, direct.strips);
    assert!(rep.strips.iter().all(|s| !s.divergent));
    assert!(r.consistent);
}

#[test]
fn fixed_squares_counted_at_every_level() {
    let side = 0.25;
    let boxes = [(0.0, 0.0), (0.5, 0.0), (0.0, 0.5)];
    let mut levels = Vec::new();
    for n in 3..=5 {
        let level = Level::new(n, 2).unwrap();
        let m = level.cells_per_unit();
        let q = (side * m as f64) as i64;
        let cells: Vec<Cell> = boxes
            .iter()
            .flat_map(|&(x, y)| {
                let (i0, j0) = ((x * m as f64) as i64, (y * m as f64) as i64);
                CellRect::new(i0, j0, i0 + q, j0 + q)
                    .cells()
                    .collect::<Vec<_>>()
            })
            .collect();
        let k = GridCompactum::from_cells(level, "squares", cells);
        let d = Decomposition::singletons(&k);
        levels.push((k, d));
    }
    let r = peano_check(&levels, &[side], &[]).unwrap();
    assert_eq!(r.thresholds[0].counts, vec![3, 3, 3]);
}

#[test]
fn crossed_fibers_of_square_meet_in_singletons() {
    let s = spec("unit_square");
    let k = rasterize(&s, Level::new(4, 2).unwrap()).unwrap();
    let cols = Decomposition::from_classes(
        k.level,
        (0..16).map(|i| (0..16).map(|j| Cell::new(i, j)).collect()),
    );
    let rows = Decomposition::from_classes(
        k.level,
        (0..16).map(|j| (0..16).map(|i| Cell::new(i, j)).collect()),
    );
    assert_eq!(
        common_refinement(&cols, &rows).unwrap(),
        Decomposition::singletons(&k)
    );
    assert!(!refines(&cols, &rows).unwrap());
}
