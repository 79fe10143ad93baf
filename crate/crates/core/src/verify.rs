//! The full cross-check suite: every closed formula against its exhaustive
//! oracle over a grid of fields and dimensions.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bounds::{decomposition_monotone, extremal_polynomial, max_zeros_formula, sweep_bounds};
use crate::codes::{
    bipartite_params, decompose_degree, dimension_torus_formula, evaluation_matrix, min_distance_of_basis,
    min_distance_p1_p2, min_distance_torus_formula, Caps,
};
use crate::error::{Error, Result};
use crate::exec::Strategy;
use crate::galois::FiniteField;
use crate::geometry::{is_complete_intersection, projective_torus, Clutter, ToricSet};
use crate::invariants::{check_regularity_bound, ci_hilbert_series, ci_regularity, hilbert_profile};
use crate::polyeval::count_zeros_projective_with;

/// Deliberate errors used to confirm that the suite notices them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Uses `ell + 1` in place of `ell` in the torus minimum distance.
    EllOffByOne,
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    /// Fields as `(p, m)`.
    pub fields: Vec<(u64, u32)>,
    /// Ambient dimensions of the tori (points in P^{s-1}).
    pub s_values: Vec<usize>,
    /// Numbers of variables for the zero-bound sweeps.
    pub sweep_s: Vec<usize>,
    pub sweep_samples: usize,
    pub seed: u64,
    pub caps: Caps,
    pub fault: Option<Fault>,
    pub strategy: Strategy,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            fields: vec![(3, 1), (2, 2), (5, 1)],
            s_values: vec![2, 3, 4],
            sweep_s: vec![1, 2, 3],
            sweep_samples: 1000,
            seed: 0,
            caps: Caps::default(),
            fault: None,
            strategy: Strategy::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub q: Option<u32>,
    pub s: Option<usize>,
    pub d: Option<u32>,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub q: Vec<u32>,
    pub s: Vec<usize>,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> + '_ {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }
}

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

fn judge(ok: bool, detail: String) -> Outcome {
    if ok {
        Outcome::Pass(detail)
    } else {
        Outcome::Fail(detail)
    }
}

struct Recorder {
    checks: Vec<CheckResult>,
}

impl Recorder {
    fn record(&mut self, name: &str, q: Option<u32>, s: Option<usize>, d: Option<u32>, outcome: Result<Outcome>) {
        let (status, detail) = match outcome {
            Ok(Outcome::Pass(detail)) => (Status::Pass, detail),
            Ok(Outcome::Fail(detail)) => (Status::Fail, detail),
            Ok(Outcome::Skip(detail)) => (Status::Skip, detail),
            Err(e @ Error::CapExceeded { .. }) => (Status::Skip, e.to_string()),
            Err(e) => (Status::Fail, e.to_string()),
        };
        self.checks.push(CheckResult {
            name: name.to_string(),
            q,
            s,
            d,
            status,
            detail,
        });
    }
}

fn torus_formula(q: u32, s: u32, d: u32, fault: Option<Fault>) -> Result<u64> {
    match fault {
        None => min_distance_torus_formula(q, s, d),
        Some(Fault::EllOffByOne) => {
            let dec = decompose_degree(d, q)?;
            if u64::from(d) >= u64::from(q - 2) * u64::from(s - 1) {
                return Ok(1);
            }
            let b = u64::from(q - 1);
            Ok(b.pow(s - dec.k - 2) * (b - u64::from(dec.ell) - 1))
        }
    }
}

/// Minimum distance of `C_X(d)` together with `n` and `k`; `None` for the
/// distance when the codeword enumeration would exceed the cap.
struct CodeData {
    n: u64,
    k: u64,
    delta: Option<u64>,
    cap_note: String,
}

fn code_data(x: &ToricSet, d: u32, caps: &Caps, strategy: Strategy) -> Result<CodeData> {
    let m = evaluation_matrix(x, d, caps)?;
    let basis = m.entries().row_basis(x.field());
    let k = basis.rows() as u64;
    let (delta, cap_note) = match min_distance_of_basis(x.field(), &basis, caps.codewords, strategy) {
        Ok(delta) => (Some(delta), String::new()),
        Err(e @ Error::CapExceeded { .. }) => (None, e.to_string()),
        Err(e) => return Err(e),
    };
    Ok(CodeData {
        n: x.len() as u64,
        k,
        delta,
        cap_note,
    })
}

pub fn run(config: &VerifyConfig) -> Result<VerifyReport> {
    let mut fields = Vec::new();
    for &(p, m) in &config.fields {
        fields.push(Arc::new(FiniteField::new(p, m)?));
    }
    fields.sort_by_key(|f| f.q());
    fields.dedup_by_key(|f| f.q());
    let mut s_values = config.s_values.clone();
    s_values.sort_unstable();
    s_values.dedup();
    if s_values.iter().any(|&s| s < 2) {
        return Err(Error::invalid("torus dimensions need s >= 2"));
    }

    let mut rec = Recorder { checks: Vec::new() };
    rec.record(
        "degree-decomposition-monotonicity",
        None,
        None,
        None,
        monotonicity_check(),
    );
    for field in &fields {
        for &s in &s_values {
            torus_cell(&mut rec, field, s, config);
        }
        clutter_checks(&mut rec, field, config);
        for &s in &config.sweep_s {
            let q = field.q();
            let outcome = if q < 3 {
                Ok(Outcome::Skip("q < 3".into()))
            } else {
                let seed = config.seed ^ (u64::from(q) << 32 | s as u64);
                sweep_bounds(field, s, config.sweep_samples, seed, config.strategy).map(|r| {
                    Outcome::Pass(format!(
                        "{} random + {} fixed polynomials, refined bound applied to {} ({} tight, least margin {})",
                        r.random,
                        r.deterministic,
                        r.refined_checked,
                        r.refined_tight,
                        r.min_refined_margin.map_or("-".into(), |m| m.to_string())
                    ))
                })
            };
            rec.record("zero-bound-sweep", Some(q), Some(s), None, outcome);
        }
    }

    let mut checks = rec.checks;
    checks.sort_by(|a, b| {
        (a.q, a.s, a.d, &a.name, &a.detail).cmp(&(b.q, b.s, b.d, &b.name, &b.detail))
    });
    let count = |st: Status| checks.iter().filter(|c| c.status == st).count();
    Ok(VerifyReport {
        seed: config.seed,
        q: fields.iter().map(|f| f.q()).collect(),
        s: s_values,
        passed: count(Status::Pass),
        failed: count(Status::Fail),
        skipped: count(Status::Skip),
        checks,
    })
}

fn monotonicity_check() -> Result<Outcome> {
    let mut cases = 0u64;
    for q in 3..=9u32 {
        for s in 1..=6u32 {
            for d in 1..=(s - 1) * (q - 2) {
                for d_small in 1..=d {
                    match decomposition_monotone(q, s, d_small, d)? {
                        Some(true) => cases += 1,
                        Some(false) => {
                            return Ok(Outcome::Fail(format!("fails at q={q} s={s} d'={d_small} d={d}")))
                        }
                        None => {}
                    }
                }
            }
        }
    }
    Ok(Outcome::Pass(format!("{cases} cases with q <= 9, s <= 6")))
}

fn torus_cell(rec: &mut Recorder, field: &Arc<FiniteField>, s: usize, config: &VerifyConfig) {
    let q = field.q();
    let caps = &config.caps;
    let (qs, ss) = (Some(q), Some(s));
    let torus = match projective_torus(field, s, caps.points) {
        Ok(t) => t,
        Err(e) => {
            rec.record("torus-size", qs, ss, None, Err(e));
            return;
        }
    };
    let n = torus.len() as u64;
    let expected = u64::from(q - 1).pow(s as u32 - 1);
    rec.record(
        "torus-size",
        qs,
        ss,
        None,
        Ok(judge(
            n == expected && is_complete_intersection(&torus),
            format!("|T| = {n}, (q-1)^(s-1) = {expected}"),
        )),
    );

    let reg = ci_regularity(q, s as u32);
    let mut deltas: Vec<(u32, u64)> = Vec::new();
    for d in 1..=reg as u32 + 1 {
        let data = match code_data(&torus, d, caps, config.strategy) {
            Ok(data) => data,
            Err(e) => {
                rec.record("torus-dimension-formula", qs, ss, Some(d), Err(e));
                continue;
            }
        };
        let dq = Some(d);
        let k_formula = dimension_torus_formula(q, s as u32, d);
        rec.record(
            "torus-dimension-formula",
            qs,
            ss,
            dq,
            Ok(judge(
                k_formula == data.k.into(),
                format!("rank {}, alternating sum {k_formula}", data.k),
            )),
        );
        if let Some(delta) = data.delta {
            deltas.push((d, delta));
            rec.record(
                "singleton",
                qs,
                ss,
                dq,
                Ok(judge(
                    delta >= 1 && delta + data.k <= data.n + 1,
                    format!("n={} k={} delta={delta}", data.n, data.k),
                )),
            );
        }

        let formula_outcome = if q < 3 {
            Ok(Outcome::Skip("q < 3".into()))
        } else {
            torus_formula(q, s as u32, d, config.fault).map(|f| match data.delta {
                Some(delta) => judge(f == delta, format!("oracle {delta}, formula {f}")),
                None => Outcome::Skip(data.cap_note.clone()),
            })
        };
        rec.record("torus-min-distance-formula", qs, ss, dq, formula_outcome);

        if s == 2 || s == 3 {
            let outcome = if q < 3 {
                Ok(Outcome::Skip("q < 3".into()))
            } else {
                min_distance_p1_p2(q, s as u32, d).and_then(|p| {
                    let general = min_distance_torus_formula(q, s as u32, d)?;
                    Ok(match data.delta {
                        Some(delta) => judge(
                            p == general && p == delta,
                            format!("piecewise {p}, general {general}, oracle {delta}"),
                        ),
                        None => judge(p == general, format!("piecewise {p}, general {general}, oracle capped")),
                    })
                })
            };
            rec.record("p1-p2-min-distance", qs, ss, dq, outcome);
        }
        if s == 2 && q >= 3 && d <= q - 2 {
            let outcome = match data.delta {
                Some(delta) => judge(delta == data.n - data.k + 1, format!("n={} k={} delta={delta}", data.n, data.k)),
                None => Outcome::Skip(data.cap_note.clone()),
            };
            rec.record("p1-mds", qs, ss, dq, Ok(outcome));
        }

        if q >= 3 && u64::from(d) < reg {
            let outcome = match data.delta {
                None => Ok(Outcome::Skip(data.cap_note.clone())),
                Some(delta) => (|| {
                    let f = extremal_polynomial(field, s, d)?;
                    let zeros = count_zeros_projective_with(&f, &torus, config.strategy)?;
                    let closed = max_zeros_formula(q, s as u32, d)?;
                    let oracle = n - delta;
                    Ok(judge(
                        zeros == oracle && oracle == closed,
                        format!("|A_F| = {zeros}, |X| - delta = {oracle}, M1 = {closed}"),
                    ))
                })(),
            };
            rec.record("extremal-tightness", qs, ss, dq, outcome);
        }
    }

    let mut decrease = Ok(Outcome::Pass(format!("{} consecutive degrees", deltas.len())));
    for pair in deltas.windows(2) {
        let ((d0, a), (d1, b)) = (pair[0], pair[1]);
        if d1 != d0 + 1 {
            continue;
        }
        if (a > 1 && a <= b) || (a == 1 && b != 1) {
            decrease = Ok(Outcome::Fail(format!("delta_{d0} = {a}, delta_{d1} = {b}")));
            break;
        }
    }
    rec.record("min-distance-decrease", qs, ss, None, decrease);

    let past: Vec<_> = deltas.iter().filter(|&&(d, _)| u64::from(d) >= reg).collect();
    let outcome = if past.is_empty() {
        Outcome::Skip("no oracle value at or past the regularity".into())
    } else {
        judge(
            past.iter().all(|&&(_, delta)| delta == 1),
            format!("regularity {reg}, delta = {:?}", past.iter().map(|p| p.1).collect::<Vec<_>>()),
        )
    };
    rec.record("min-distance-past-regularity", qs, ss, None, Ok(outcome));

    let hilbert = (|| {
        let profile = hilbert_profile(&torus, n.saturating_sub(1).min(u64::from(u32::MAX)) as u32, caps)?;
        let series = ci_hilbert_series(q, s as u32)?;
        let numerator = series.numerator_u64().ok_or(Error::Overflow("the torus Hilbert series"))?;
        let formula_ok = profile
            .values
            .iter()
            .enumerate()
            .all(|(d, &v)| dimension_torus_formula(q, s as u32, d as u32) == v.into());
        Ok(judge(
            u64::from(profile.regularity) == reg && profile.differences() == numerator && formula_ok,
            format!("profile {:?}, numerator {numerator:?}, regularity {}", profile.values, profile.regularity),
        ))
    })();
    rec.record("torus-hilbert-series", qs, ss, None, hilbert);
}

fn clutter_checks(rec: &mut Recorder, field: &Arc<FiniteField>, config: &VerifyConfig) {
    let q = field.q();
    let caps = &config.caps;
    let mut clutters = vec![
        ("singletons-3", Clutter::singletons(3)),
        ("singletons-4", Clutter::singletons(4)),
        ("k22", Clutter::complete_bipartite(2, 2)),
        ("triangle", Clutter::new(3, vec![vec![1, 2], vec![2, 3], vec![1, 3]])),
    ];
    if q == 3 {
        clutters.push(("k23", Clutter::complete_bipartite(2, 3)));
    }
    for (label, clutter) in clutters {
        let clutter = clutter.expect("fixed clutters are valid");
        let s = clutter.s();
        let x = match clutter.toric_set(field, caps.points) {
            Ok(x) => x,
            Err(e) => {
                rec.record("ci-point-set", Some(q), Some(s), None, Err(e));
                continue;
            }
        };
        let torus_size = u64::from(q - 1).pow(s as u32 - 1);
        let ci = is_complete_intersection(&x);
        let mut ok = ci == (x.len() as u64 == torus_size);
        if label.starts_with("singletons") {
            ok &= ci;
        }
        if label.starts_with('k') && q >= 3 {
            ok &= !ci;
        }
        rec.record(
            "ci-point-set",
            Some(q),
            Some(s),
            None,
            Ok(judge(ok, format!("{label}: |X| = {}, (q-1)^(s-1) = {torus_size}, ci = {ci}", x.len()))),
        );

        let outcome = check_regularity_bound(&x, caps).map(|r| {
            let mut ok = u64::from(r.regularity) <= r.bound;
            if label.starts_with("singletons") {
                ok &= r.equality();
            }
            judge(
                ok,
                format!("{label}: regularity {}, bound {}, ci = {}", r.regularity, r.bound, r.ci),
            )
        });
        rec.record("regularity-bound", Some(q), Some(s), None, outcome);

        if q >= 3 {
            if let Some((a, b)) = clutter.as_complete_bipartite() {
                for d in 1..=2 {
                    let outcome = code_data(&x, d, caps, config.strategy).and_then(|data| {
                        let f = bipartite_params(q, a, b, d)?;
                        Ok(match data.delta {
                            Some(delta) => judge(
                                (data.n, data.k, delta) == (f.n, f.k, f.delta),
                                format!(
                                    "{label}: oracle ({}, {}, {delta}), formula ({}, {}, {})",
                                    data.n, data.k, f.n, f.k, f.delta
                                ),
                            ),
                            None => Outcome::Skip(data.cap_note),
                        })
                    });
                    rec.record("bipartite-product", Some(q), Some(s), Some(d), outcome);
                }
            }
        }
    }
}
