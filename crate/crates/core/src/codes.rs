//! Parameterized codes `C_X(d)`: evaluation matrices, dimension by rank,
//! exhaustive minimum distance, and closed formulas for projective tori and
//! complete bipartite clutters.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::galois::{FieldElement, FiniteField};
use crate::geometry::{is_complete_intersection, Clutter, ToricSet, DEFAULT_POINT_CAP};
use crate::linalg::Matrix;
use crate::polyeval::SparsePolynomial;

/// Default cap on `q^k - 1`, the number of nonzero messages enumerated.
pub const DEFAULT_CODEWORD_CAP: u64 = 10_000_000;
/// Default cap on evaluation matrix entries.
pub const DEFAULT_MATRIX_CAP: u64 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub points: u64,
    pub codewords: u64,
    pub matrix_entries: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            points: DEFAULT_POINT_CAP,
            codewords: DEFAULT_CODEWORD_CAP,
            matrix_entries: DEFAULT_MATRIX_CAP,
        }
    }
}

/// Exponent vectors of total degree `d` in `s` variables, in descending
/// lexicographic order (`t1^d` first, `ts^d` last).
pub fn monomials(s: usize, d: u32) -> Vec<Vec<u32>> {
    fn go(s: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == s {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            go(s, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if s > 0 {
        go(s, d, &mut Vec::with_capacity(s), &mut out);
    }
    out
}

pub(crate) fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// The matrix of `ev_d`: rows indexed by degree-`d` monomials, columns by
/// the points of `X`; entry `m_i(P_j) / t1^d(P_j)`.
#[derive(Debug, Clone)]
pub struct EvaluationMatrix {
    field: Arc<FiniteField>,
    d: u32,
    s: usize,
    monomials: Vec<Vec<u32>>,
    entries: Matrix,
}

/// JSON export `{q, n, k_rows, entries}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorMatrixJson {
    pub q: u32,
    pub n: usize,
    pub k_rows: usize,
    pub entries: Vec<Vec<u32>>,
}

impl EvaluationMatrix {
    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn monomials(&self) -> &[Vec<u32>] {
        &self.monomials
    }

    pub fn entries(&self) -> &Matrix {
        &self.entries
    }

    pub fn rank(&self) -> usize {
        self.entries.rank(&self.field)
    }

    /// One row per line, encodings separated by single spaces.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for row in self.entries.row_iter() {
            let line: Vec<String> = row.iter().map(|c| c.value().to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> GeneratorMatrixJson {
        GeneratorMatrixJson {
            q: self.field.q(),
            n: self.entries.cols(),
            k_rows: self.entries.rows(),
            entries: self
                .entries
                .row_iter()
                .map(|r| r.iter().map(|c| c.value()).collect())
                .collect(),
        }
    }
}

pub fn evaluation_matrix(x: &ToricSet, d: u32, caps: &Caps) -> Result<EvaluationMatrix> {
    let field = x.field();
    let s = x.s();
    let rows = binomial(s as u64 - 1 + u64::from(d), s as u64 - 1);
    let entries = rows.clone() * BigUint::from(x.len());
    if entries > BigUint::from(caps.matrix_entries) {
        return Err(Error::CapExceeded {
            what: "evaluation matrix entries",
            required: entries.to_u128().unwrap_or(u128::MAX),
            cap: caps.matrix_entries,
        });
    }
    let monomials = monomials(s, d);
    debug_assert_eq!(BigUint::from(monomials.len()), rows);

    let order = u64::from(field.q() - 1);
    let logs: Vec<Vec<u64>> = x
        .points()
        .map(|p| {
            p.iter()
                .map(|&c| u64::from(field.log(c).expect("toric points have nonzero coordinates")))
                .collect()
        })
        .collect();
    let mut m = Matrix::zeros(monomials.len(), x.len());
    for (i, e) in monomials.iter().enumerate() {
        for (j, l) in logs.iter().enumerate() {
            // m_i(P) / P_1^d = g^{e.L - d L_1}
            let num: u64 = e.iter().zip(l).map(|(&a, &b)| u64::from(a) * b).sum::<u64>() % order;
            let den = (u64::from(d) % order) * l[0] % order;
            m.set(i, j, field.exp(num + order - den));
        }
    }
    Ok(EvaluationMatrix {
        field: Arc::clone(field),
        d,
        s,
        monomials,
        entries: m,
    })
}

/// `H_X(d) = dim C_X(d)`, the rank of the evaluation matrix.
pub fn dimension(x: &ToricSet, d: u32, caps: &Caps) -> Result<usize> {
    Ok(evaluation_matrix(x, d, caps)?.rank())
}

/// A basis of `I(X)_d`: the degree-`d` forms vanishing on `X`, read off the
/// left null space of the evaluation matrix.
pub fn vanishing_forms_basis(x: &ToricSet, d: u32, caps: &Caps) -> Result<Vec<SparsePolynomial>> {
    let m = evaluation_matrix(x, d, caps)?;
    let field = x.field();
    let basis = m.entries.transpose().null_space(field);
    basis
        .into_iter()
        .map(|coeffs| {
            SparsePolynomial::from_terms(
                field,
                x.s(),
                m.monomials.iter().cloned().zip(coeffs),
            )
        })
        .collect()
}

/// Exact minimum distance of the code spanned by the evaluation matrix.
pub fn min_distance_oracle(m: &EvaluationMatrix, cap: u64) -> Result<u64> {
    min_distance_oracle_with(m, cap, Strategy::default())
}

pub fn min_distance_oracle_with(m: &EvaluationMatrix, cap: u64, strategy: Strategy) -> Result<u64> {
    let basis = m.entries.row_basis(&m.field);
    min_distance_of_basis(&m.field, &basis, cap, strategy)
}

/// Minimum Hamming weight over all nonzero combinations of the rows of
/// `basis`, which must be linearly independent.
///
/// Codewords `c` and `λc` have equal weight, so only messages whose first
/// nonzero coordinate is 1 are visited: `(q^k - 1)/(q - 1)` codewords. The
/// cap still applies to `q^k - 1`.
pub fn min_distance_of_basis(
    field: &FiniteField,
    basis: &Matrix,
    cap: u64,
    strategy: Strategy,
) -> Result<u64> {
    let k = basis.rows();
    let n = basis.cols();
    if k == 0 {
        return Err(Error::invalid("the zero code has no minimum distance"));
    }
    let q = u64::from(field.q());
    let required = u128::from(q)
        .checked_pow(k as u32)
        .map(|v| v - 1)
        .unwrap_or(u128::MAX);
    if required > u128::from(cap) {
        return Err(Error::CapExceeded {
            what: "nonzero messages",
            required,
            cap,
        });
    }
    let rows: Vec<&[FieldElement]> = basis.row_iter().collect();

    // Fix the leading coordinate, then split off a few more coordinates so
    // there are enough independent tasks to spread across workers.
    let work = required as u64;
    let want = exec::task_count(strategy, work) as u64;
    let mut split = 0u32;
    while q.pow(split) * (k as u64) < want && (split as usize) < k {
        split += 1;
    }
    let mut tasks: Vec<(Vec<FieldElement>, usize)> = Vec::new();
    for lead in 0..k {
        let free = k - 1 - lead;
        let fixed = (split as usize).min(free);
        for prefix in 0..q.pow(fixed as u32) {
            let mut base = rows[lead].to_vec();
            let mut rest = prefix;
            for row in &rows[lead + 1..lead + 1 + fixed] {
                let c = FieldElement::new((rest % q) as u32);
                rest /= q;
                if !c.is_zero() {
                    for (b, &r) in base.iter_mut().zip(row.iter()) {
                        *b = field.add(*b, field.mul(c, r));
                    }
                }
            }
            tasks.push((base, lead + 1 + fixed));
        }
    }

    let best = exec::map_reduce(
        strategy,
        tasks.len(),
        u64::MAX,
        |t| {
            let (base, first_free) = &tasks[t];
            coset_min_weight(field, base, &rows[*first_free..], n)
        },
        u64::min,
    );
    debug_assert!(best != u64::MAX, "independent rows never combine to zero");
    Ok(best)
}

/// Minimum nonzero weight over `base + span(free)`, visiting every
/// combination once with an additive odometer: each step adds one row and
/// a digit wrapping after `q` additions is automatically back at zero.
fn coset_min_weight(field: &FiniteField, base: &[FieldElement], free: &[&[FieldElement]], n: usize) -> u64 {
    let q = field.q();
    let mut word = base.to_vec();
    let mut weight = word.iter().filter(|c| !c.is_zero()).count() as u64;
    let mut best = if weight > 0 { weight } else { u64::MAX };
    let mut counters = vec![0u32; free.len()];
    'outer: loop {
        if best == 1 {
            break;
        }
        let mut j = 0;
        loop {
            if j == free.len() {
                break 'outer;
            }
            let row = free[j];
            for c in 0..n {
                let old = word[c];
                let new = field.add(old, row[c]);
                word[c] = new;
                weight = weight + u64::from(!new.is_zero()) - u64::from(!old.is_zero());
            }
            counters[j] += 1;
            if counters[j] < q {
                break;
            }
            counters[j] = 0;
            j += 1;
        }
        if weight > 0 && weight < best {
            best = weight;
        }
    }
    best
}

/// `d = k(q-2) + ell` with `k >= 0` and `1 <= ell <= q-2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeDecomposition {
    pub d: u32,
    pub q: u32,
    pub k: u32,
    pub ell: u32,
}

pub fn decompose_degree(d: u32, q: u32) -> Result<DegreeDecomposition> {
    if q < 3 {
        return Err(Error::invalid("degree decomposition needs q >= 3"));
    }
    if d < 1 {
        return Err(Error::invalid("degree decomposition needs d >= 1"));
    }
    let ell = (d - 1) % (q - 2) + 1;
    Ok(DegreeDecomposition {
        d,
        q,
        k: (d - ell) / (q - 2),
        ell,
    })
}

fn checked_pow(base: u64, e: u32) -> Result<u64> {
    base.checked_pow(e).ok_or(Error::Overflow("a power of q - 1"))
}

/// Closed-form minimum distance of `C_T(d)` for the projective torus
/// `T` in P^{s-1}.
pub fn min_distance_torus_formula(q: u32, s: u32, d: u32) -> Result<u64> {
    if s < 2 {
        return Err(Error::invalid("the torus formula needs s >= 2"));
    }
    torus_min_distance(q, s, d)
}

/// Same as the public formula but also accepts `s = 1` (a single point).
pub(crate) fn torus_min_distance(q: u32, s: u32, d: u32) -> Result<u64> {
    let dec = decompose_degree(d, q)?;
    if u64::from(d) >= u64::from(q - 2) * u64::from(s - 1) {
        return Ok(1);
    }
    let base = u64::from(q - 1);
    Ok(checked_pow(base, s - dec.k - 2)? * (base - u64::from(dec.ell)))
}

/// `dim C_T(d)` as the alternating binomial sum; exact for all inputs.
pub fn dimension_torus_formula(q: u32, s: u32, d: u32) -> BigUint {
    assert!(q >= 2 && s >= 1, "need q >= 2 and s >= 1");
    let (q, s, d) = (u64::from(q), u64::from(s), u64::from(d));
    let mut sum = BigInt::zero();
    for j in 0..=(d / (q - 1)).min(s - 1) {
        let term = BigInt::from(binomial(s - 1, j)) * BigInt::from(binomial(s - 1 + d - j * (q - 1), s - 1));
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum.to_biguint().expect("Hilbert function values are nonnegative")
}

/// Minimum distance on the torus of P^1 or P^2 by the piecewise formulas.
pub fn min_distance_p1_p2(q: u32, s: u32, d: u32) -> Result<u64> {
    if q < 3 {
        return Err(Error::invalid("needs q >= 3"));
    }
    if d < 1 {
        return Err(Error::invalid("needs d >= 1"));
    }
    let (q, d) = (u64::from(q), u64::from(d));
    match s {
        2 if d <= q - 3 => Ok(q - 1 - d),
        2 => Ok(1),
        3 if d <= q - 2 => Ok((q - 1) * (q - 1) - d * (q - 1)),
        3 if d <= 2 * q - 5 => Ok(2 * q - d - 3),
        3 => Ok(1),
        _ => Err(Error::invalid("the P^1/P^2 formulas need s in {2, 3}")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    Formula,
    Oracle,
    BothAgree,
}

impl std::fmt::Display for Source {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Source::Formula => "formula",
            Source::Oracle => "oracle",
            Source::BothAgree => "both-agree",
        })
    }
}

/// Length, dimension and minimum distance of one code, with provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeParameters {
    pub q: u32,
    pub s: usize,
    pub d: u32,
    pub n: u64,
    pub k: u64,
    pub delta: u64,
    pub source: Source,
    pub mds: bool,
}

impl CodeParameters {
    pub fn new(q: u32, s: usize, d: u32, n: u64, k: u64, delta: u64, source: Source) -> Result<Self> {
        if k < 1 || k > n || delta < 1 || delta > n - k + 1 {
            return Err(Error::Discrepancy {
                check: "singleton bound".into(),
                detail: format!("n={n} k={k} delta={delta}"),
            });
        }
        Ok(CodeParameters {
            q,
            s,
            d,
            n,
            k,
            delta,
            source,
            mds: delta == n - k + 1,
        })
    }

    pub fn singleton_defect(&self) -> u64 {
        self.n - self.k + 1 - self.delta
    }
}

/// Formula parameters of `C_X(d)` for `X` parameterized by the edges of
/// K_{k,l}: products of the two torus factors in P^{l-1} and P^{k-1}.
pub fn bipartite_params(q: u32, k: u32, l: u32, d: u32) -> Result<CodeParameters> {
    if q < 3 {
        return Err(Error::invalid("the bipartite formulas need q >= 3"));
    }
    if k < 1 || l < 1 {
        return Err(Error::invalid("K_{k,l} needs k, l >= 1"));
    }
    let n = checked_pow(u64::from(q - 1), k + l - 2)?;
    let to_u64 = |b: BigUint| b.to_u64().ok_or(Error::Overflow("a Hilbert function value"));
    let dim = to_u64(dimension_torus_formula(q, l, d))?
        .checked_mul(to_u64(dimension_torus_formula(q, k, d))?)
        .ok_or(Error::Overflow("a product of dimensions"))?;
    let delta = if d == 0 {
        n
    } else {
        torus_min_distance(q, l, d)? * torus_min_distance(q, k, d)?
    };
    CodeParameters::new(q, (k * l) as usize, d, n, dim, delta, Source::Formula)
}

/// Oracle parameters of `C_X(d)`. When `X` is a full projective torus and
/// the closed formulas apply, they are evaluated too and must agree.
pub fn code_params(x: &ToricSet, d: u32, caps: &Caps) -> Result<CodeParameters> {
    code_params_with(x, d, caps, Strategy::default())
}

pub fn code_params_with(x: &ToricSet, d: u32, caps: &Caps, strategy: Strategy) -> Result<CodeParameters> {
    let field = x.field();
    let q = field.q();
    let m = evaluation_matrix(x, d, caps)?;
    let basis = m.entries.row_basis(field);
    let k = basis.rows() as u64;
    let delta = min_distance_of_basis(field, &basis, caps.codewords, strategy)?;
    let n = x.len() as u64;
    let mut source = Source::Oracle;
    if d >= 1 && q >= 3 && is_complete_intersection(x) {
        let s = x.s() as u32;
        let k_formula = dimension_torus_formula(q, s, d);
        let delta_formula = min_distance_torus_formula(q, s, d)?;
        if k_formula != BigUint::from(k) || delta_formula != delta {
            return Err(Error::Discrepancy {
                check: "torus formulas".into(),
                detail: format!(
                    "q={q} s={s} d={d}: oracle (k={k}, delta={delta}) vs formula (k={k_formula}, delta={delta_formula})"
                ),
            });
        }
        source = Source::BothAgree;
    }
    CodeParameters::new(q, x.s(), d, n, k, delta, source)
}

/// Oracle parameters for a clutter code, cross-checked against the
/// bipartite product formulas when the clutter is some K_{k,l}.
pub fn clutter_code_params(
    field: &Arc<FiniteField>,
    clutter: &Clutter,
    d: u32,
    caps: &Caps,
) -> Result<CodeParameters> {
    let x = clutter.toric_set(field, caps.points)?;
    let oracle = code_params(&x, d, caps)?;
    match clutter.as_complete_bipartite() {
        Some((a, b)) if field.q() >= 3 && d >= 1 => {
            let formula = bipartite_params(field.q(), a, b, d)?;
            if (formula.n, formula.k, formula.delta) != (oracle.n, oracle.k, oracle.delta) {
                return Err(Error::Discrepancy {
                    check: "bipartite product formulas".into(),
                    detail: format!(
                        "K_{{{a},{b}}} q={} d={d}: oracle ({}, {}, {}) vs formula ({}, {}, {})",
                        field.q(),
                        oracle.n,
                        oracle.k,
                        oracle.delta,
                        formula.n,
                        formula.k,
                        formula.delta
                    ),
                });
            }
            Ok(CodeParameters {
                source: Source::BothAgree,
                ..oracle
            })
        }
        _ => Ok(oracle),
    }
}
