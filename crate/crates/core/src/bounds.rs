//! Upper bounds on the number of zeros of a polynomial, and the
//! homogeneous polynomial attaining the maximum number of zeros on the
//! projective torus.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::codes::{
    decompose_degree, evaluation_matrix, min_distance_of_basis, Caps,
};
use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::galois::{FieldElement, FiniteField};
use crate::geometry::{projective_torus, torus_size};
use crate::polyeval::{
    count_zeros_affine_space, count_zeros_affine_torus_with, count_zeros_projective_with,
    SparsePolynomial,
};

/// The zero-count bounds for a polynomial of total degree `d` in `s`
/// variables over GF(q).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub q: u32,
    pub s: u32,
    pub d: u32,
    /// Zeros in K^s: `d q^{s-1}`.
    pub schmidt: u64,
    /// Nontrivial zeros of a homogeneous form: `d (q^{s-1} - 1)`.
    pub schmidt_homogeneous: u64,
    /// Zeros in (K*)^s: `d (q-1)^{s-1}`.
    pub torus: u64,
    /// `(q-1)^{s-k-1} ((q-1)^{k+1} - (q-1) + ell)`, for `deg_{t_i} <= q-2`.
    pub refined: Option<u64>,
    pub refined_applicable: bool,
}

fn pow(base: u64, e: u32) -> Result<u64> {
    base.checked_pow(e).ok_or(Error::Overflow("a zero-count bound"))
}

fn mul(a: u64, b: u64) -> Result<u64> {
    a.checked_mul(b).ok_or(Error::Overflow("a zero-count bound"))
}

pub fn zero_bounds(d: u32, q: u32, s: u32) -> Result<BoundReport> {
    if d < 1 || q < 2 || s < 1 {
        return Err(Error::invalid("zero bounds need d >= 1, q >= 2, s >= 1"));
    }
    let (qq, dd) = (u64::from(q), u64::from(d));
    let refined = refined_bound(d, q, s)?;
    Ok(BoundReport {
        q,
        s,
        d,
        schmidt: mul(dd, pow(qq, s - 1)?)?,
        schmidt_homogeneous: mul(dd, pow(qq, s - 1)? - 1)?,
        torus: mul(dd, pow(qq - 1, s - 1)?)?,
        refined,
        refined_applicable: refined.is_some(),
    })
}

/// `None` when `q < 3` or the decomposition has `k > s - 1`.
pub fn refined_bound(d: u32, q: u32, s: u32) -> Result<Option<u64>> {
    if q < 3 || d < 1 {
        return Ok(None);
    }
    let dec = decompose_degree(d, q)?;
    if dec.k > s - 1 {
        return Ok(None);
    }
    let b = u64::from(q - 1);
    let inner = pow(b, dec.k + 1)? - b + u64::from(dec.ell);
    Ok(Some(mul(pow(b, s - dec.k - 1)?, inner)?))
}

/// `M_1 = (q-1)^{s-k-2} ((q-1)^{k+1} - (q-1) + ell)`, the largest number of
/// zeros on the torus of P^{s-1} of a degree-`d` form not vanishing on it,
/// for `1 <= d <= (q-2)(s-1) - 1`.
pub fn max_zeros_formula(q: u32, s: u32, d: u32) -> Result<u64> {
    check_extremal_range(q, s, d)?;
    let dec = decompose_degree(d, q)?;
    let b = u64::from(q - 1);
    let inner = pow(b, dec.k + 1)? - b + u64::from(dec.ell);
    mul(pow(b, s - dec.k - 2)?, inner)
}

fn check_extremal_range(q: u32, s: u32, d: u32) -> Result<()> {
    if q < 3 {
        return Err(Error::invalid("needs q >= 3"));
    }
    if s < 2 || d < 1 || u64::from(d) + 1 > u64::from(q - 2) * u64::from(s - 1) {
        return Err(Error::invalid(format!(
            "needs 1 <= d <= (q-2)(s-1) - 1, got q={q} s={s} d={d}"
        )));
    }
    Ok(())
}

/// Zero counts of one polynomial checked against every applicable bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub q: u32,
    pub s: u32,
    pub degree: u32,
    pub torus_zeros: u64,
    /// Zeros in K^s, when within the cap.
    pub affine_zeros: Option<u64>,
    /// Bounds for the polynomial as given.
    pub bounds: BoundReport,
    /// Degree and bounds of the torus canonical form, unless it is zero.
    pub canonical_degree: Option<u32>,
    pub canonical_bounds: Option<BoundReport>,
}

impl BoundCheck {
    /// Slack in the refined bound, when it applies.
    pub fn refined_margin(&self) -> Option<u64> {
        self.canonical_bounds
            .as_ref()
            .and_then(|b| b.refined)
            .map(|r| r - self.torus_zeros)
    }
}

fn ensure(bound: &'static str, zeros: u64, limit: u64) -> Result<()> {
    if zeros > limit {
        return Err(Error::BoundViolation { bound, zeros, limit });
    }
    Ok(())
}

/// Counts zeros of `g` exhaustively and asserts every applicable bound.
///
/// The affine (Schmidt) and torus bounds are checked against `g` itself.
/// The torus bound and the refined bound are also checked against the
/// torus canonical form, which has the same zeros on `(K*)^s` and degree at
/// most `q - 2` in each variable.
pub fn verify_bound_on(g: &SparsePolynomial, field: &FiniteField, cap: u64) -> Result<BoundCheck> {
    verify_bound_on_with(g, field, cap, Strategy::default())
}

pub fn verify_bound_on_with(
    g: &SparsePolynomial,
    field: &FiniteField,
    cap: u64,
    strategy: Strategy,
) -> Result<BoundCheck> {
    let Some(degree) = g.degree() else {
        return Err(Error::invalid("the bounds need a nonzero polynomial"));
    };
    let q = field.q();
    let s = g.nvars() as u32;
    let torus_zeros = count_zeros_affine_torus_with(g, field, cap, strategy)?;
    let affine_zeros = match count_zeros_affine_space(g, field, cap) {
        Ok(z) => Some(z),
        Err(Error::CapExceeded { .. }) => None,
        Err(e) => return Err(e),
    };

    if degree == 0 {
        // nonzero constant
        ensure("torus", torus_zeros, 0)?;
    }
    let bounds = zero_bounds(degree.max(1), q, s)?;
    if degree >= 1 {
        ensure("torus", torus_zeros, bounds.torus)?;
        if let Some(z) = affine_zeros {
            ensure("affine", z, bounds.schmidt)?;
            if g.is_homogeneous() {
                // the origin is the one trivial zero
                ensure("homogeneous affine", z - 1, bounds.schmidt_homogeneous)?;
            }
        }
    }

    let canonical = g.torus_canonical_form(field);
    let canonical_degree = canonical.degree();
    let canonical_bounds = match canonical_degree {
        Some(cd) if cd >= 1 => {
            let b = zero_bounds(cd, q, s)?;
            ensure("torus", torus_zeros, b.torus)?;
            if let Some(r) = b.refined {
                ensure("refined", torus_zeros, r)?;
            }
            Some(b)
        }
        Some(_) => {
            ensure("torus", torus_zeros, 0)?;
            None
        }
        None => None,
    };

    Ok(BoundCheck {
        q,
        s,
        degree,
        torus_zeros,
        affine_zeros,
        bounds,
        canonical_degree,
        canonical_bounds,
    })
}

/// `F = f_1 ... f_k g_ell` with `f_i = prod_{j=1}^{q-2} (b^j t_1 - t_{i+1})`
/// and `g_ell = prod_{j=1}^{ell} (b^j t_1 - t_{k+2})`, `b` the primitive
/// element. Homogeneous of degree `d` in `s` variables.
pub fn extremal_polynomial(field: &FiniteField, s: usize, d: u32) -> Result<SparsePolynomial> {
    let q = field.q();
    check_extremal_range(q, s as u32, d)?;
    let dec = decompose_degree(d, q)?;
    let beta = field.primitive();
    let linear = |j: u32, var: usize| {
        SparsePolynomial::binomial_form(field, s, field.pow(beta, u64::from(j)), 0, FieldElement::ONE, var)
    };
    let mut f = SparsePolynomial::constant(s, FieldElement::ONE);
    for i in 1..=dec.k as usize {
        for j in 1..=q - 2 {
            f = f.mul(field, &linear(j, i));
        }
    }
    for j in 1..=dec.ell {
        f = f.mul(field, &linear(j, dec.k as usize + 1));
    }
    Ok(f)
}

/// The three computations of the largest zero count `M` of a degree-`d`
/// form on the torus of P^{s-1}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxZeroReport {
    pub q: u32,
    pub s: u32,
    pub d: u32,
    pub torus_size: u64,
    /// `|A_F|` for the extremal polynomial.
    pub extremal_zeros: u64,
    /// `|X| - delta_d` with `delta_d` from the oracle.
    pub oracle: u64,
    /// The closed `M_1` expression.
    pub closed: u64,
}

/// Computes `M` three ways and fails with a discrepancy unless they agree.
pub fn max_zero_consistency(field: &Arc<FiniteField>, s: usize, d: u32, caps: &Caps) -> Result<MaxZeroReport> {
    max_zero_consistency_with(field, s, d, caps, Strategy::default())
}

pub fn max_zero_consistency_with(
    field: &Arc<FiniteField>,
    s: usize,
    d: u32,
    caps: &Caps,
    strategy: Strategy,
) -> Result<MaxZeroReport> {
    let q = field.q();
    let closed = max_zeros_formula(q, s as u32, d)?;
    let torus = projective_torus(field, s, caps.points)?;
    let f = extremal_polynomial(field, s, d)?;
    let extremal_zeros = count_zeros_projective_with(&f, &torus, strategy)?;
    let m = evaluation_matrix(&torus, d, caps)?;
    let basis = m.entries().row_basis(field);
    let delta = min_distance_of_basis(field, &basis, caps.codewords, strategy)?;
    let n = torus.len() as u64;
    let report = MaxZeroReport {
        q,
        s: s as u32,
        d,
        torus_size: n,
        extremal_zeros,
        oracle: n - delta,
        closed,
    };
    if !(extremal_zeros == closed && report.oracle == closed) || extremal_zeros == n {
        return Err(Error::Discrepancy {
            check: "extremal zero count".into(),
            detail: format!(
                "q={q} s={s} d={d}: |A_F| = {extremal_zeros}, |X| - delta = {}, M1 = {closed}",
                report.oracle
            ),
        });
    }
    Ok(report)
}

/// Outcome of a seeded sweep of random polynomials through
/// [`verify_bound_on`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub q: u32,
    pub s: u32,
    pub seed: u64,
    pub random: usize,
    pub deterministic: usize,
    /// Polynomials whose canonical form fell under the refined bound.
    pub refined_checked: usize,
    /// Of those, how many met it with equality.
    pub refined_tight: usize,
    pub min_refined_margin: Option<u64>,
}

/// A random nonzero polynomial in `s` variables. With `restricted`, every
/// exponent is at most `q - 2`; otherwise exponents go up to `2q`.
pub fn random_polynomial(field: &FiniteField, s: usize, restricted: bool, rng: &mut impl Rng) -> SparsePolynomial {
    let q = field.q();
    let max_exp = if restricted { q - 2 } else { 2 * q };
    loop {
        let nterms = rng.gen_range(1..=6);
        let mut g = SparsePolynomial::zero(s);
        for _ in 0..nterms {
            let exps = (0..s).map(|_| rng.gen_range(0..=max_exp)).collect();
            let c = FieldElement::new(rng.gen_range(1..q));
            g.add_term(field, exps, c);
        }
        if !g.is_zero() {
            return g;
        }
    }
}

/// Polynomials every sweep includes: for each degree `1..=(q-2)s` the sum
/// of all monomials of that degree with exponents at most `q - 2`, and the
/// generators `t_i^{q-1} - t_s^{q-1}` of the torus ideal.
pub fn deterministic_cases(field: &FiniteField, s: usize) -> Vec<SparsePolynomial> {
    let q = field.q();
    let mut out = Vec::new();
    for d in 1..=(q - 2) * s as u32 {
        let terms = crate::codes::monomials(s, d)
            .into_iter()
            .filter(|e| e.iter().all(|&x| x <= q - 2))
            .map(|e| (e, FieldElement::ONE));
        let g = SparsePolynomial::from_terms(field, s, terms).expect("exponents match nvars");
        if !g.is_zero() {
            out.push(g);
        }
    }
    for i in 0..s.saturating_sub(1) {
        let mut a = vec![0; s];
        a[i] = q - 1;
        let mut b = vec![0; s];
        b[s - 1] = q - 1;
        let g = SparsePolynomial::from_terms(
            field,
            s,
            [(a, FieldElement::ONE), (b, field.neg(FieldElement::ONE))],
        )
        .expect("exponents match nvars");
        out.push(g);
    }
    out
}

/// Checks `samples` seeded random polynomials (alternating restricted and
/// unrestricted exponents) plus the deterministic cases.
pub fn sweep_bounds(field: &FiniteField, s: usize, samples: usize, seed: u64, strategy: Strategy) -> Result<SweepReport> {
    let cap = torus_size(field.q(), s)
        .map(|t| t.max(u128::from(field.q()).pow(s as u32)))
        .filter(|&t| t <= 1 << 20)
        .ok_or_else(|| Error::invalid("bound sweeps are limited to 2^20 points"))? as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut polys: Vec<SparsePolynomial> = (0..samples)
        .map(|i| random_polynomial(field, s, i % 2 == 0, &mut rng))
        .collect();
    let deterministic = deterministic_cases(field, s);
    let ndet = deterministic.len();
    polys.extend(deterministic);

    let checks = exec::map_collect(strategy, polys.len(), |i| {
        verify_bound_on_with(&polys[i], field, cap, Strategy::Sequential)
    });
    let mut report = SweepReport {
        q: field.q(),
        s: s as u32,
        seed,
        random: samples,
        deterministic: ndet,
        refined_checked: 0,
        refined_tight: 0,
        min_refined_margin: None,
    };
    for check in checks {
        if let Some(margin) = check?.refined_margin() {
            report.refined_checked += 1;
            report.refined_tight += usize::from(margin == 0);
            report.min_refined_margin = Some(report.min_refined_margin.map_or(margin, |m: u64| m.min(margin)));
        }
    }
    Ok(report)
}

/// The decomposition inequality: for `d' <= d` with `k <= s - 1`,
/// `k' <= k` and
/// `-(q-1)^{s-k'} + ell'(q-1)^{s-k'-1} <= -(q-1)^{s-k} + ell(q-1)^{s-k-1}`.
/// Returns `None` when the hypotheses fail.
pub fn decomposition_monotone(q: u32, s: u32, d_small: u32, d: u32) -> Result<Option<bool>> {
    let big = decompose_degree(d, q)?;
    let small = decompose_degree(d_small, q)?;
    if d_small > d || big.k > s - 1 {
        return Ok(None);
    }
    if small.k > big.k {
        return Ok(Some(false));
    }
    let b = i128::from(q - 1);
    let side = |k: u32, ell: u32| -b.pow(s - k) + i128::from(ell) * b.pow(s - k - 1);
    Ok(Some(side(small.k, small.ell) <= side(big.k, big.ell)))
}
