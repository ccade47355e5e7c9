use std::collections::{HashSet, VecDeque};
use std::f64::consts::PI;

use pcx_core::generators::GENERATOR_NAMES;
use pcx_core::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn level() -> Level {
    Level::new(4, 2).unwrap()
}

fn cells_strategy(max: usize) -> impl Strategy<Value = Vec<Cell>> {
    prop::collection::vec((0i64..16, 0i64..16), 1..max)
        .prop_map(|v| v.into_iter().map(|(i, j)| Cell::new(i, j)).collect())
}

fn brute_hausdorff(a: &[Cell], b: &[Cell]) -> f64 {
    let dir = |x: &[Cell], y: &[Cell]| {
        x.iter()
            .map(|p| {
                y.iter()
                    .map(|q| (((p.i - q.i).pow(2) + (p.j - q.j).pow(2)) as f64).sqrt())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    dir(a, b).max(dir(b, a)) * level().cell_size()
}

/// Component count by breadth-first search under the given neighbor offsets.
fn bfs_components(cells: &[Cell], eight: bool) -> Vec<HashSet<Cell>> {
    let set: HashSet<Cell> = cells.iter().copied().collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for &s in cells {
        if !seen.insert(s) {
            continue;
        }
        let mut comp = HashSet::from([s]);
        let mut q = VecDeque::from([s]);
        while let Some(c) = q.pop_front() {
            for di in -1..=1i64 {
                for dj in -1..=1i64 {
                    if (di, dj) == (0, 0) || (!eight && di != 0 && dj != 0) {
                        continue;
                    }
                    let n = Cell::new(c.i + di, c.j + dj);
                    if set.contains(&n) && seen.insert(n) {
                        comp.insert(n);
                        q.push_back(n);
                    }
                }
            }
        }
        out.push(comp);
    }
    out
}

proptest! {
    #[test]
    fn hausdorff_matches_brute_force(a in cells_strategy(30), b in cells_strategy(30)) {
        let got = hausdorff_distance(&a, &b, level()).unwrap();
        prop_assert!((got - brute_hausdorff(&a, &b)).abs() < 1e-12);
    }

    #[test]
    fn hausdorff_metric_axioms(a in cells_strategy(20), b in cells_strategy(20), c in cells_strategy(20)) {
        let l = level();
        let ab = hausdorff_distance(&a, &b, l).unwrap();
        let ba = hausdorff_distance(&b, &a, l).unwrap();
        let bc = hausdorff_distance(&b, &c, l).unwrap();
        let ac = hausdorff_distance(&a, &c, l).unwrap();
        prop_assert_eq!(ab, ba);
        prop_assert_eq!(hausdorff_distance(&a, &a, l).unwrap(), 0.0);
        let sa: HashSet<Cell> = a.iter().copied().collect();
        let sb: HashSet<Cell> = b.iter().copied().collect();
        prop_assert_eq!(ab == 0.0, sa == sb);
        prop_assert!(ac <= ab + bc + 1e-12);
    }

    #[test]
    fn labeling_partitions_into_connected_pieces(cells in cells_strategy(120), eight in any::<bool>()) {
        let k = GridCompactum::from_cells(level(), "random", cells.clone());
        let conn = if eight { Connectivity::Eight } else { Connectivity::Four };
        let lab = label_components(&k, conn);
        let all: Vec<Cell> = k.cells().collect();
        prop_assert_eq!(lab.components.iter().map(|c| c.cells.len()).sum::<usize>(), all.len());
        for c in &all {
            let id = lab.label(*c).unwrap();
            prop_assert!(lab.components[id].cells.contains(c));
        }
        let mut want: Vec<Vec<Cell>> = bfs_components(&all, eight)
            .into_iter()
            .map(|s| { let mut v: Vec<Cell> = s.into_iter().collect(); v.sort(); v })
            .collect();
        want.sort();
        let mut got: Vec<Vec<Cell>> = lab.components.iter().map(|c| c.cells.clone()).collect();
        got.sort();
        prop_assert_eq!(got, want);
        // Ids follow the row-major order of each component's first cell.
        let firsts: Vec<Cell> = lab.components.iter().map(|c| c.cells[0]).collect();
        let mut sorted = firsts.clone();
        sorted.sort();
        prop_assert_eq!(firsts, sorted);
    }

    #[test]
    fn adding_an_adjacent_cell_never_splits(cells in cells_strategy(60), pick in any::<prop::sample::Index>(), dir in 0usize..8) {
        let k = GridCompactum::from_cells(level(), "random", cells.clone());
        let before = label_components(&k, Connectivity::Eight).len();
        let base = cells[pick.index(cells.len())];
        let (di, dj) = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)][dir];
        let mut more = cells.clone();
        more.push(Cell::new(base.i + di, base.j + dj));
        let grown = GridCompactum::from_cells(level(), "random", more);
        prop_assert!(label_components(&grown, Connectivity::Eight).len() <= before);
    }
}

#[test]
fn coarsening_matches_the_coarser_raster() {
    for name in GENERATOR_NAMES {
        let spec = make_spec(&GeneratorParams::named(name)).unwrap();
        let top = 6;
        let mut fine = rasterize(&spec, Level::new(top + 1, spec.base).unwrap()).unwrap();
        for n in (0..=top).rev() {
            let want = rasterize(&spec, Level::new(n, spec.base).unwrap()).unwrap();
            let got = coarsen(&fine).unwrap();
            assert_eq!(
                got.cells().collect::<Vec<_>>(),
                want.cells().collect::<Vec<_>>(),
                "{name} level {n}"
            );
            fine = want;
        }
    }
}

/// Random point of the middle-thirds Cantor set.
fn cantor_point(rng: &mut ChaCha8Rng) -> f64 {
    (1..=40)
        .map(|k| {
            if rng.gen_bool(0.5) {
                2.0 / 3f64.powi(k)
            } else {
                0.0
            }
        })
        .sum()
}

/// Points of each generator's set from its closed-form description.
fn sample(name: &str, rng: &mut ChaCha8Rng) -> Option<(f64, f64)> {
    Some(match name {
        "cantor_comb" => {
            if rng.gen_bool(0.3) {
                (rng.gen::<f64>(), 1.0)
            } else {
                (cantor_point(rng), rng.gen::<f64>())
            }
        }
        "cantor_dust" => (cantor_point(rng), cantor_point(rng)),
        "sierpinski_carpet" => {
            let (mut x, mut y) = (0.0, 0.0);
            for k in 1..=30 {
                let (a, b) = loop {
                    let p = (rng.gen_range(0..3), rng.gen_range(0..3));
                    if p != (1, 1) {
                        break p;
                    }
                };
                x += a as f64 / 3f64.powi(k);
                y += b as f64 / 3f64.powi(k);
            }
            (x, y)
        }
        "unit_square" => (rng.gen(), rng.gen()),
        "topologist_sine" => {
            if rng.gen_bool(0.2) {
                (0.0, rng.gen_range(-1.0..=1.0))
            } else {
                let x: f64 = rng.gen_range(1e-3..=1.0);
                (x, (1.0 / x).sin())
            }
        }
        "spiral_disk" => {
            if rng.gen_bool(0.3) {
                let (r, a) = (rng.gen::<f64>().sqrt(), rng.gen_range(0.0..2.0 * PI));
                (r * a.cos(), r * a.sin())
            } else {
                let t: f64 = rng.gen_range(0.0..=40.0);
                let r = 1.0 + (-t).exp();
                (r * (2.0 * PI * t).cos(), r * (2.0 * PI * t).sin())
            }
        }
        "bars" => {
            // Three bars of width 1/8 at x = 0, 1/4, 1/2.
            let m = rng.gen_range(0..3) as f64;
            (m / 4.0 + rng.gen::<f64>() / 8.0, rng.gen())
        }
        _ => return None,
    })
}

#[test]
fn oracles_never_miss_sampled_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for name in GENERATOR_NAMES {
        let spec = make_spec(&GeneratorParams::named(name)).unwrap();
        for n in 1..=5 {
            let level = Level::new(n, spec.base).unwrap();
            let k = rasterize(&spec, level).unwrap();
            let m = level.cells_per_unit() as f64;
            for _ in 0..4000 {
                let Some((x, y)) = sample(name, &mut rng) else {
                    break;
                };
                // Every closed cell box holding the point; at least one is kept.
                let (u, v) = (x * m, y * m);
                let is = [u.floor() as i64, u.ceil() as i64 - 1];
                let js = [v.floor() as i64, v.ceil() as i64 - 1];
                let hit = is
                    .iter()
                    .any(|&i| js.iter().any(|&j| k.contains(Cell::new(i, j))));
                assert!(hit, "{name} level {n} misses ({x}, {y})");
            }
        }
    }
}
