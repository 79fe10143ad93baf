//! Acceptance suite: one line per criterion, exact comparisons only.
//!
//! Run with `cargo test -p toric-codes-cli --test acceptance`.

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::sync::Arc;

use num_bigint::BigUint;
use toric_codes::bounds::{
    decomposition_monotone, extremal_polynomial, max_zeros_formula, sweep_bounds,
};
use toric_codes::codes::{
    bipartite_params, dimension_torus_formula, evaluation_matrix, min_distance_of_basis,
    min_distance_p1_p2, min_distance_torus_formula, Caps,
};
use toric_codes::geometry::{is_complete_intersection, projective_torus};
use toric_codes::invariants::{check_regularity_bound, ci_hilbert_series, ci_regularity, hilbert_profile};
use toric_codes::polyeval::count_zeros_projective;
use toric_codes::{Clutter, FiniteField, Strategy, ToricSet};

const ORACLE_LIMIT: u64 = 10_000_000;
const GRID_Q: [(u64, u32); 3] = [(3, 1), (2, 2), (5, 1)];
const GRID_S: [usize; 3] = [2, 3, 4];

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(failures: &[String], ok_detail: String) -> Verdict {
    if failures.is_empty() {
        Verdict { pass: true, detail: ok_detail }
    } else {
        Verdict {
            pass: false,
            detail: failures.join("; "),
        }
    }
}

fn field(p: u64, m: u32) -> Arc<FiniteField> {
    Arc::new(FiniteField::new(p, m).unwrap())
}

fn torus(f: &Arc<FiniteField>, s: usize) -> ToricSet {
    projective_torus(f, s, Caps::default().points).unwrap()
}

/// `(k, delta)` of `C_X(d)`, with `delta` only when `q^k <= 10^7`.
fn code(x: &ToricSet, d: u32) -> (u64, Option<u64>) {
    let f = x.field();
    let m = evaluation_matrix(x, d, &Caps::default()).unwrap();
    let basis = m.entries().row_basis(f);
    let k = basis.rows() as u64;
    let feasible = u64::from(f.q()).checked_pow(k as u32).is_some_and(|v| v <= ORACLE_LIMIT);
    let delta = feasible.then(|| min_distance_of_basis(f, &basis, ORACLE_LIMIT, Strategy::default()).unwrap());
    (k, delta)
}

type Row = (u32, u64, Option<u64>);
type Cell = (Arc<FiniteField>, ToricSet, Vec<Row>);
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Verdict + 'a>);

/// Oracle data for every torus in the grid and every `1 <= d <= (s-1)(q-2)+1`.
struct Grid {
    cells: BTreeMap<(u32, usize), Cell>,
}

impl Grid {
    fn build() -> Self {
        let mut cells = BTreeMap::new();
        for &(p, m) in &GRID_Q {
            let f = field(p, m);
            for &s in &GRID_S {
                let t = torus(&f, s);
                let top = ci_regularity(f.q(), s as u32) as u32 + 1;
                let rows = (1..=top)
                    .map(|d| {
                        let (k, delta) = code(&t, d);
                        (d, k, delta)
                    })
                    .collect();
                cells.insert((f.q(), s), (f.clone(), t, rows));
            }
        }
        Grid { cells }
    }
}

fn c1_torus_min_distance(grid: &Grid) -> Verdict {
    let mut failures = Vec::new();
    let mut checked = 0;
    for (&(q, s), (_, _, rows)) in &grid.cells {
        for &(d, _, delta) in rows {
            let Some(delta) = delta else { continue };
            let formula = min_distance_torus_formula(q, s as u32, d).unwrap();
            checked += 1;
            if formula != delta {
                failures.push(format!("q={q} s={s} d={d}: oracle {delta}, formula {formula}"));
            }
        }
    }
    verdict(&failures, format!("{checked} (q, s, d) cases, oracle = formula"))
}

fn c2_dimension(grid: &Grid) -> Verdict {
    let mut failures = Vec::new();
    let mut checked = 0;
    for (&(q, s), (_, _, rows)) in &grid.cells {
        for &(d, k, _) in rows {
            checked += 1;
            if dimension_torus_formula(q, s as u32, d) != BigUint::from(k) {
                failures.push(format!("q={q} s={s} d={d}: rank {k}"));
            }
        }
    }
    verdict(&failures, format!("{checked} cases, rank = alternating sum"))
}

fn c3_torus_invariants(grid: &Grid) -> Verdict {
    let mut failures = Vec::new();
    for (&(q, s), (_, t, _)) in &grid.cells {
        let size = u64::from(q - 1).pow(s as u32 - 1);
        if t.len() as u64 != size {
            failures.push(format!("q={q} s={s}: |T| = {}", t.len()));
        }
        let profile = hilbert_profile(t, size as u32, &Caps::default()).unwrap();
        if u64::from(profile.regularity) != ci_regularity(q, s as u32) {
            failures.push(format!("q={q} s={s}: regularity {}", profile.regularity));
        }
        let numerator = ci_hilbert_series(q, s as u32).unwrap().numerator_u64().unwrap();
        if profile.differences() != numerator {
            failures.push(format!("q={q} s={s}: differences {:?} vs {numerator:?}", profile.differences()));
        }
    }
    verdict(&failures, format!("{} tori: size, regularity, series numerator", grid.cells.len()))
}

fn c4_p1_p2() -> Verdict {
    let mut failures = Vec::new();
    let (mut formula_cases, mut oracle_cases, mut mds_cases) = (0, 0, 0);
    for (p, m) in [(3, 1), (2, 2), (5, 1), (7, 1)] {
        let f = field(p, m);
        let q = f.q();
        for s in [2usize, 3] {
            let t = torus(&f, s);
            let n = t.len() as u64;
            for d in 1..=ci_regularity(q, s as u32) as u32 + 2 {
                let piecewise = min_distance_p1_p2(q, s as u32, d).unwrap();
                let general = min_distance_torus_formula(q, s as u32, d).unwrap();
                formula_cases += 1;
                if piecewise != general {
                    failures.push(format!("q={q} s={s} d={d}: piecewise {piecewise}, general {general}"));
                }
                let (k, delta) = code(&t, d);
                if let Some(delta) = delta {
                    oracle_cases += 1;
                    if delta != piecewise {
                        failures.push(format!("q={q} s={s} d={d}: oracle {delta}, piecewise {piecewise}"));
                    }
                    if s == 2 && d <= q - 2 {
                        mds_cases += 1;
                        if delta != n - k + 1 {
                            failures.push(format!("q={q} d={d}: not MDS (n={n} k={k} delta={delta})"));
                        }
                    }
                }
            }
        }
    }
    verdict(
        &failures,
        format!("{formula_cases} formula cases, {oracle_cases} oracle cases, {mds_cases} MDS cases"),
    )
}

fn c5_bipartite() -> Verdict {
    let mut failures = Vec::new();
    let mut checked = 0;
    for ((p, m), (a, b)) in [((3, 1), (2, 2)), ((2, 2), (2, 2)), ((3, 1), (2, 3))] {
        let f = field(p, m);
        let x = Clutter::complete_bipartite(a, b).unwrap().toric_set(&f, Caps::default().points).unwrap();
        for d in 1..=3 {
            let (k, delta) = code(&x, d);
            let formula = bipartite_params(f.q(), a, b, d).unwrap();
            let Some(delta) = delta else {
                failures.push(format!("K_{a},{b} q={} d={d}: oracle over the cap", f.q()));
                continue;
            };
            checked += 1;
            if (x.len() as u64, k, delta) != (formula.n, formula.k, formula.delta) {
                failures.push(format!(
                    "K_{a},{b} q={} d={d}: oracle ({}, {k}, {delta}), formula ({}, {}, {})",
                    f.q(),
                    x.len(),
                    formula.n,
                    formula.k,
                    formula.delta
                ));
            }
        }
    }
    verdict(&failures, format!("{checked} clutter codes match (n, H1 H2, delta1 delta2)"))
}

fn c6_ci_characterization() -> Verdict {
    let mut failures = Vec::new();
    let caps = Caps::default();
    for &(p, m) in &GRID_Q {
        let f = field(p, m);
        let q = f.q();
        for s in GRID_S {
            let x = Clutter::singletons(s as u32).unwrap().toric_set(&f, caps.points).unwrap();
            let r = check_regularity_bound(&x, &caps).unwrap();
            let bound = ci_regularity(q, s as u32);
            if !is_complete_intersection(&x) || u64::from(r.regularity) != bound {
                failures.push(format!("singletons q={q} s={s}: ci={} regularity {}", r.ci, r.regularity));
            }
        }
        let non_ci = [
            ("K_2,2", Clutter::complete_bipartite(2, 2).unwrap()),
            ("triangle", Clutter::new(3, vec![vec![1, 2], vec![2, 3], vec![1, 3]]).unwrap()),
        ];
        for (label, c) in non_ci {
            let x = c.toric_set(&f, caps.points).unwrap();
            let ci = is_complete_intersection(&x);
            if ci {
                failures.push(format!(
                    "{label} q={q}: is_complete_intersection = true (|X| = {} = (q-1)^{}), expected false",
                    x.len(),
                    c.s() - 1
                ));
            }
            match check_regularity_bound(&x, &caps) {
                Ok(r) if u64::from(r.regularity) <= r.bound => {}
                Ok(r) => failures.push(format!("{label} q={q}: regularity {} > {}", r.regularity, r.bound)),
                Err(e) => failures.push(format!("{label} q={q}: {e}")),
            }
        }
    }
    verdict(&failures, "singletons CI with regularity = bound; K_2,2 and triangle non-CI within bound".into())
}

fn c7_extremal(grid: &Grid) -> Verdict {
    let mut failures = Vec::new();
    let mut checked = 0;
    for (&(q, s), (f, t, rows)) in &grid.cells {
        let n = t.len() as u64;
        for &(d, _, delta) in rows {
            if u64::from(d) + 1 > ci_regularity(q, s as u32) {
                continue;
            }
            let Some(delta) = delta else { continue };
            let poly = extremal_polynomial(f, s, d).unwrap();
            let zeros = count_zeros_projective(&poly, t).unwrap();
            let closed = max_zeros_formula(q, s as u32, d).unwrap();
            checked += 1;
            if !(zeros == n - delta && zeros == closed) {
                failures.push(format!(
                    "q={q} s={s} d={d}: |A_F| = {zeros}, |X| - delta = {}, M1 = {closed}",
                    n - delta
                ));
            }
        }
    }
    verdict(&failures, format!("{checked} cases, |A_F| = |X| - delta = M1"))
}

fn c8_bound_sweep() -> Verdict {
    let mut failures = Vec::new();
    let mut total = 0;
    for &(p, m) in &GRID_Q {
        let f = field(p, m);
        for s in 1..=3 {
            let seed = 0x5eed ^ (u64::from(f.q()) << 8 | s as u64);
            match sweep_bounds(&f, s, 1000, seed, Strategy::default()) {
                Ok(r) => total += r.random + r.deterministic,
                Err(e) => failures.push(format!("q={} s={s}: {e}", f.q())),
            }
        }
    }
    verdict(&failures, format!("{total} polynomials, no bound violated"))
}

fn c9_behaviour(grid: &Grid) -> Verdict {
    let mut failures = Vec::new();
    for (&(q, s), (_, t, rows)) in &grid.cells {
        let reg = ci_regularity(q, s as u32);
        let known: Vec<(u32, u64)> = rows.iter().filter_map(|&(d, _, delta)| delta.map(|v| (d, v))).collect();
        for w in known.windows(2) {
            let ((d0, a), (d1, b)) = (w[0], w[1]);
            if d1 == d0 + 1 && ((a > 1 && a <= b) || (a == 1 && b != 1)) {
                failures.push(format!("q={q} s={s}: delta_{d0} = {a}, delta_{d1} = {b}"));
            }
        }
        for &(d, delta) in &known {
            if u64::from(d) >= reg && delta != 1 {
                failures.push(format!("q={q} s={s} d={d}: delta = {delta} past regularity {reg}"));
            }
        }
        let mut prev = 0;
        for d in 0..=reg as u32 + 2 {
            let k = evaluation_matrix(t, d, &Caps::default()).unwrap().rank() as u64;
            if k < prev || (u64::from(d) >= reg && k != t.len() as u64) {
                failures.push(format!("q={q} s={s} d={d}: H = {k} after {prev}"));
            }
            prev = k;
        }
    }
    let mut cases = 0;
    for q in 3..=9u32 {
        for s in 1..=6u32 {
            for d in 1..=(s - 1) * (q - 2) {
                for d_small in 1..=d {
                    match decomposition_monotone(q, s, d_small, d).unwrap() {
                        Some(true) => cases += 1,
                        Some(false) => failures.push(format!("decomposition q={q} s={s} d'={d_small} d={d}")),
                        None => {}
                    }
                }
            }
        }
    }
    verdict(&failures, format!("distance decrease, plateau, Hilbert monotonicity; {cases} decomposition cases"))
}

fn c10_determinism() -> Verdict {
    let run = |extra: &[&str]| {
        let out = Command::new(env!("CARGO_BIN_EXE_toric-codes"))
            .args(["verify", "--seed", "17"])
            .args(extra)
            .output()
            .expect("binary runs");
        (out.status.code(), out.stdout)
    };
    let a = run(&[]);
    let b = run(&[]);
    let c = run(&["--sequential"]);
    let mut failures = Vec::new();
    if a.0 != Some(0) {
        failures.push(format!("verify exited with {:?}", a.0));
    }
    if a != b {
        failures.push("two identical runs differ".into());
    }
    if a != c {
        failures.push("sequential and parallel runs differ".into());
    }
    verdict(&failures, format!("{} bytes, identical across runs and strategies", a.1.len()))
}

fn main() -> ExitCode {
    let grid = Grid::build();
    let criteria: Vec<Criterion<'_>> = vec![
        ("1 minimum distance formula on tori", Box::new(|| c1_torus_min_distance(&grid))),
        ("2 dimension formula on tori", Box::new(|| c2_dimension(&grid))),
        ("3 torus size, regularity, Hilbert series", Box::new(|| c3_torus_invariants(&grid))),
        ("4 P^1/P^2 formulas and MDS", Box::new(c4_p1_p2)),
        ("5 complete bipartite product", Box::new(c5_bipartite)),
        ("6 complete-intersection characterization", Box::new(c6_ci_characterization)),
        ("7 extremal polynomial tightness", Box::new(|| c7_extremal(&grid))),
        ("8 zero-count bound sweep", Box::new(c8_bound_sweep)),
        ("9 distance and Hilbert behaviour", Box::new(|| c9_behaviour(&grid))),
        ("10 deterministic verify reports", Box::new(c10_determinism)),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        let v = check();
        println!("{} [{name}] {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        failed += usize::from(!v.pass);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
