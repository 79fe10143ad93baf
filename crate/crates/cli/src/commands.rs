use std::fmt;
use std::ops::RangeInclusive;
use std::sync::Arc;

use serde::Serialize;
use toric_codes::bounds::{sweep_bounds, verify_bound_on, zero_bounds};
use toric_codes::codes::{
    bipartite_params, clutter_code_params, code_params, evaluation_matrix, min_distance_of_basis,
    min_distance_torus_formula, vanishing_forms_basis, Caps,
};
use toric_codes::geometry::{is_complete_intersection, projective_torus, ClutterFile};
use toric_codes::invariants::check_regularity_bound;
use toric_codes::polyeval::PolynomialJson;
use toric_codes::verify::{self, Fault, Status, VerifyConfig};
use toric_codes::{Clutter, Error, FiniteField, SparsePolynomial, Strategy, ToricSet};

use crate::args::{BoundsArgs, CodeArgs, Common, FaultArg, FieldArgs, Format, SetArgs, SetSource, TorusCheckArgs, VerifyArgs};

#[derive(Debug)]
pub enum CliError {
    Lib(Error),
    Input(String),
}

impl CliError {
    /// 3 for a mathematical discrepancy, 2 for anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(e) if e.is_discrepancy() => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Lib(e) => e.fmt(f),
            CliError::Input(msg) => f.write_str(msg),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Rendered output plus the exit code to finish with.
pub struct Output {
    pub body: String,
    pub code: i32,
}

impl Output {
    fn ok(body: String) -> Self {
        Output { body, code: 0 }
    }
}

fn caps(c: &Common) -> Caps {
    Caps {
        points: c.cap_points,
        codewords: c.cap_codewords,
        ..Caps::default()
    }
}

fn field(f: &FieldArgs) -> Result<Arc<FiniteField>> {
    Ok(Arc::new(FiniteField::new(f.p, f.m)?))
}

enum Set {
    Torus(ToricSet),
    Clutter(Clutter, ToricSet),
}

impl Set {
    fn points(&self) -> &ToricSet {
        match self {
            Set::Torus(x) | Set::Clutter(_, x) => x,
        }
    }
}

fn load_set(field: &Arc<FiniteField>, source: &SetSource, common: &Common) -> Result<Set> {
    match (source.s, &source.clutter) {
        (Some(s), None) => {
            if s < 2 {
                return Err(CliError::Input("--s must be at least 2".into()));
            }
            Ok(Set::Torus(projective_torus(field, s, common.cap_points)?))
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            let file: ClutterFile = serde_json::from_str(&text)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            let clutter = Clutter::try_from(file).map_err(Error::from)?;
            if clutter.s() < 2 {
                return Err(CliError::Input("a clutter needs at least two edges".into()));
            }
            let x = clutter.toric_set(field, common.cap_points)?;
            Ok(Set::Clutter(clutter, x))
        }
        _ => Err(CliError::Input("give exactly one of --s and --clutter".into())),
    }
}

fn degrees(d: Option<u32>, range: &Option<RangeInclusive<u32>>, default: RangeInclusive<u32>) -> Vec<u32> {
    match (d, range) {
        (Some(d), _) => vec![d],
        (None, Some(r)) => r.clone().collect(),
        (None, None) => default.collect(),
    }
}

/// `1 ..= (s-1)(q-2) + 1`, so the plateau at distance 1 is always shown.
fn default_degrees(q: u32, s: usize) -> RangeInclusive<u32> {
    1..=(s as u32 - 1) * q.saturating_sub(2) + 1
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn csv<T: Serialize>(rows: &[T]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("flat rows serialize");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
}

fn opt<T: fmt::Display>(v: Option<T>) -> String {
    v.map_or("-".into(), |v| v.to_string())
}

fn require_d(args: &CodeArgs) -> Result<u32> {
    args.d
        .ok_or_else(|| CliError::Input("this subcommand needs --d".into()))
}

pub fn params(args: &CodeArgs) -> Result<Output> {
    let f = field(&args.field)?;
    let set = load_set(&f, &args.set, &args.common)?;
    let caps = caps(&args.common);
    let ds = degrees(args.d, &args.d_range, default_degrees(f.q(), set.points().s()));
    let mut rows = Vec::new();
    for &d in &ds {
        rows.push(match &set {
            Set::Torus(x) => code_params(x, d, &caps)?,
            Set::Clutter(c, _) => clutter_code_params(&f, c, d, &caps)?,
        });
    }
    let body = match args.common.format {
        Format::Json if args.d.is_some() => json(&rows[0]),
        Format::Json => json(&rows),
        Format::Csv => csv(&rows),
        Format::Text => rows
            .iter()
            .map(|r| {
                format!(
                    "q={} s={} d={} n={} k={} delta={} source={} mds={}\n",
                    r.q, r.s, r.d, r.n, r.k, r.delta, r.source, r.mds
                )
            })
            .collect(),
    };
    Ok(Output::ok(body))
}

#[derive(Serialize)]
struct TableRow {
    d: u32,
    k: u64,
    delta_formula: Option<u64>,
    delta_oracle: Option<u64>,
    hilbert: u64,
    singleton_defect: Option<u64>,
    mds: Option<bool>,
}

#[derive(Serialize)]
struct Table {
    q: u32,
    s: usize,
    n: u64,
    formula: Option<&'static str>,
    rows: Vec<TableRow>,
}

pub fn table(args: &CodeArgs) -> Result<Output> {
    let f = field(&args.field)?;
    let set = load_set(&f, &args.set, &args.common)?;
    let caps = caps(&args.common);
    let x = set.points();
    let q = f.q();
    let n = x.len() as u64;
    let bipartite = match &set {
        Set::Clutter(c, _) if q >= 3 => c.as_complete_bipartite(),
        _ => None,
    };
    let torus = q >= 3 && is_complete_intersection(x);
    let formula = if torus {
        Some("torus")
    } else if bipartite.is_some() {
        Some("bipartite")
    } else {
        None
    };

    let mut rows = Vec::new();
    let mut disagreements = Vec::new();
    for d in degrees(args.d, &args.d_range, default_degrees(q, x.s())) {
        let m = evaluation_matrix(x, d, &caps)?;
        let basis = m.entries().row_basis(&f);
        let k = basis.rows() as u64;
        let delta_oracle = match min_distance_of_basis(&f, &basis, caps.codewords, Strategy::default()) {
            Ok(v) => Some(v),
            Err(Error::CapExceeded { .. }) => None,
            Err(e) => return Err(e.into()),
        };
        let delta_formula = match (d, torus, bipartite) {
            (0, _, _) => Some(n),
            (_, true, _) => Some(min_distance_torus_formula(q, x.s() as u32, d)?),
            (_, _, Some((a, b))) => {
                let p = bipartite_params(q, a, b, d)?;
                if p.k != k {
                    disagreements.push(format!("d={d}: rank {k}, bipartite dimension {}", p.k));
                }
                Some(p.delta)
            }
            _ => None,
        };
        if let (Some(a), Some(b)) = (delta_formula, delta_oracle) {
            if a != b {
                disagreements.push(format!("d={d}: formula {a}, oracle {b}"));
            }
        }
        let delta = delta_oracle.or(delta_formula);
        rows.push(TableRow {
            d,
            k,
            delta_formula,
            delta_oracle,
            hilbert: k,
            singleton_defect: delta.map(|v| n + 1 - k - v),
            mds: delta.map(|v| v == n + 1 - k),
        });
    }
    let body = match args.common.format {
        Format::Json => json(&Table {
            q,
            s: x.s(),
            n,
            formula,
            rows,
        }),
        Format::Csv => csv(&rows),
        Format::Text => {
            let mut out = format!(
                "# q={q} s={} n={n} formula={}\n{:>4} {:>8} {:>14} {:>13} {:>8} {:>17} {:>5}\n",
                x.s(),
                formula.unwrap_or("none"),
                "d",
                "k",
                "delta_formula",
                "delta_oracle",
                "hilbert",
                "singleton_defect",
                "mds"
            );
            for r in &rows {
                out.push_str(&format!(
                    "{:>4} {:>8} {:>14} {:>13} {:>8} {:>17} {:>5}\n",
                    r.d,
                    r.k,
                    opt(r.delta_formula),
                    opt(r.delta_oracle),
                    r.hilbert,
                    opt(r.singleton_defect),
                    opt(r.mds)
                ));
            }
            out
        }
    };
    if disagreements.is_empty() {
        Ok(Output::ok(body))
    } else {
        eprintln!("error: formula and oracle disagree: {}", disagreements.join("; "));
        Ok(Output { body, code: 3 })
    }
}

pub fn genmat(args: &CodeArgs) -> Result<Output> {
    let f = field(&args.field)?;
    let set = load_set(&f, &args.set, &args.common)?;
    let m = evaluation_matrix(set.points(), require_d(args)?, &caps(&args.common))?;
    let body = match args.common.format {
        Format::Json => json(&m.to_json()),
        Format::Text => m.to_text(),
        Format::Csv => m.to_text().replace(' ', ","),
    };
    Ok(Output::ok(body))
}

#[derive(Serialize)]
struct KernelJson {
    q: u32,
    s: usize,
    d: u32,
    count: usize,
    basis: Vec<PolynomialJson>,
}

pub fn kernel(args: &CodeArgs) -> Result<Output> {
    let f = field(&args.field)?;
    let set = load_set(&f, &args.set, &args.common)?;
    let x = set.points();
    let d = require_d(args)?;
    let basis = vanishing_forms_basis(x, d, &caps(&args.common))?;
    let body = match args.common.format {
        Format::Json => json(&KernelJson {
            q: f.q(),
            s: x.s(),
            d,
            count: basis.len(),
            basis: basis.iter().map(SparsePolynomial::to_json).collect(),
        }),
        Format::Text => {
            let mut out = format!("# kernel q={} s={} d={d} count={}\n", f.q(), x.s(), basis.len());
            for g in &basis {
                out.push_str(&g.to_text());
                out.push('\n');
            }
            out
        }
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                index: usize,
                polynomial: String,
            }
            let rows: Vec<Row> = basis
                .iter()
                .enumerate()
                .map(|(index, g)| Row {
                    index,
                    polynomial: g.to_text(),
                })
                .collect();
            if rows.is_empty() {
                "index,polynomial\n".into()
            } else {
                csv(&rows)
            }
        }
    };
    Ok(Output::ok(body))
}

pub fn hilbert(args: &SetArgs) -> Result<Output> {
    let f = field(&args.field)?;
    let set = load_set(&f, &args.set, &args.common)?;
    let r = check_regularity_bound(set.points(), &caps(&args.common))?;
    let body = match args.common.format {
        Format::Json => json(&r),
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                d: usize,
                hilbert: u64,
            }
            let rows: Vec<Row> = r.values.iter().enumerate().map(|(d, &hilbert)| Row { d, hilbert }).collect();
            csv(&rows)
        }
        Format::Text => format!(
            "q={} s={} size={}\nvalues={:?}\nregularity={} bound={} ci={}\n",
            r.q, r.s, r.size, r.values, r.regularity, r.bound, r.ci
        ),
    };
    Ok(Output::ok(body))
}

#[derive(Serialize)]
struct TorusCheck {
    q: u32,
    s: usize,
    size: u64,
    torus_size: Option<u64>,
    ci: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    points: Option<Vec<Vec<u32>>>,
}

pub fn torus_check(args: &TorusCheckArgs) -> Result<Output> {
    let a = &args.set;
    let f = field(&a.field)?;
    let set = load_set(&f, &a.set, &a.common)?;
    let x = set.points();
    let report = TorusCheck {
        q: f.q(),
        s: x.s(),
        size: x.len() as u64,
        torus_size: u64::from(f.q() - 1).checked_pow(x.s() as u32 - 1),
        ci: is_complete_intersection(x),
        points: args.points.then(|| x.to_json().points),
    };
    let body = match a.common.format {
        Format::Json => json(&report),
        Format::Csv => {
            let mut out = String::from("q,s,size,torus_size,ci\n");
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                report.q,
                report.s,
                report.size,
                report.torus_size.map_or(String::new(), |t| t.to_string()),
                report.ci
            ));
            out
        }
        Format::Text => {
            let mut out = format!(
                "q={} s={} size={} torus_size={} ci={}\n",
                report.q,
                report.s,
                report.size,
                opt(report.torus_size),
                report.ci
            );
            for p in report.points.iter().flatten() {
                let coords: Vec<String> = p.iter().map(u32::to_string).collect();
                out.push_str(&coords.join(" "));
                out.push('\n');
            }
            out
        }
    };
    Ok(Output::ok(body))
}

pub fn bounds(args: &BoundsArgs) -> Result<Output> {
    let f = field(&args.field)?;
    let format = args.common.format;
    if args.s < 1 {
        return Err(CliError::Input("--s must be at least 1".into()));
    }
    if let Some(text) = &args.poly {
        let g = SparsePolynomial::parse(&f, text, args.s)?;
        let check = verify_bound_on(&g, &f, args.common.cap_points)?;
        let body = match format {
            Format::Json => json(&check),
            _ => format!(
                "q={} s={} degree={} torus_zeros={} affine_zeros={} torus_bound={} refined={}\n",
                check.q,
                check.s,
                check.degree,
                check.torus_zeros,
                opt(check.affine_zeros),
                check.bounds.torus,
                opt(check.canonical_bounds.as_ref().and_then(|b| b.refined))
            ),
        };
        return Ok(Output::ok(body));
    }
    if let Some(samples) = args.samples {
        let r = sweep_bounds(&f, args.s, samples, args.seed, Strategy::default())?;
        let body = match format {
            Format::Json => json(&r),
            Format::Csv => csv(&[&r]),
            Format::Text => format!(
                "q={} s={} seed={} random={} deterministic={} refined_checked={} refined_tight={} min_refined_margin={}\n",
                r.q,
                r.s,
                r.seed,
                r.random,
                r.deterministic,
                r.refined_checked,
                r.refined_tight,
                opt(r.min_refined_margin)
            ),
        };
        return Ok(Output::ok(body));
    }
    let q = f.q();
    let default = 1..=q.saturating_sub(2).max(1) * args.s as u32;
    let ds = degrees(args.d, &args.d_range, default);
    let reports = ds
        .iter()
        .map(|&d| zero_bounds(d, q, args.s as u32))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let body = match format {
        Format::Json if args.d.is_some() => json(&reports[0]),
        Format::Json => json(&reports),
        Format::Csv => csv(&reports),
        Format::Text => reports
            .iter()
            .map(|r| {
                format!(
                    "q={} s={} d={} schmidt={} schmidt_homogeneous={} torus={} refined={}\n",
                    r.q,
                    r.s,
                    r.d,
                    r.schmidt,
                    r.schmidt_homogeneous,
                    r.torus,
                    opt(r.refined)
                )
            })
            .collect(),
    };
    Ok(Output::ok(body))
}

/// Splits a prime power into `(p, m)`.
fn prime_power(q: u64) -> Result<(u64, u32)> {
    let p = (2..=q).find(|p| q.is_multiple_of(*p)).ok_or_else(|| CliError::Input(format!("{q} is not a prime power")))?;
    let (mut rest, mut m) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    if rest != 1 {
        return Err(CliError::Input(format!("{q} is not a prime power")));
    }
    Ok((p, m))
}

pub fn verify(args: &VerifyArgs) -> Result<Output> {
    let fields = args.q.iter().map(|&q| prime_power(q)).collect::<Result<Vec<_>>>()?;
    let config = VerifyConfig {
        fields,
        s_values: args.s_values.clone(),
        sweep_samples: args.samples,
        seed: args.seed,
        caps: caps(&args.common),
        fault: args.inject_fault.map(|f| match f {
            FaultArg::EllOffByOne => Fault::EllOffByOne,
        }),
        strategy: if args.sequential { Strategy::Sequential } else { Strategy::Parallel },
        ..VerifyConfig::default()
    };
    let report = verify::run(&config)?;
    let body = match args.common.format {
        Format::Json => json(&report),
        Format::Csv => {
            #[derive(Serialize)]
            struct Row<'a> {
                name: &'a str,
                q: Option<u32>,
                s: Option<usize>,
                d: Option<u32>,
                status: Status,
                detail: &'a str,
            }
            let rows: Vec<Row> = report
                .checks
                .iter()
                .map(|c| Row {
                    name: &c.name,
                    q: c.q,
                    s: c.s,
                    d: c.d,
                    status: c.status,
                    detail: &c.detail,
                })
                .collect();
            csv(&rows)
        }
        Format::Text => {
            let mut out = String::new();
            for c in &report.checks {
                let status = match c.status {
                    Status::Pass => "pass",
                    Status::Fail => "FAIL",
                    Status::Skip => "skip",
                };
                out.push_str(&format!(
                    "{status} {} q={} s={} d={}  {}\n",
                    c.name,
                    opt(c.q),
                    opt(c.s),
                    opt(c.d),
                    c.detail
                ));
            }
            out.push_str(&format!(
                "{} passed, {} failed, {} skipped\n",
                report.passed, report.failed, report.skipped
            ));
            out
        }
    };
    for c in report.failures() {
        eprintln!("failed: {} (q={} s={} d={}): {}", c.name, opt(c.q), opt(c.s), opt(c.d), c.detail);
    }
    Ok(Output {
        body,
        code: if report.all_passed() { 0 } else { 3 },
    })
}
