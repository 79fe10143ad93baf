//! Sparse multivariate polynomials over GF(q) and exhaustive zero counting.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::galois::{FieldElement, FiniteField};
use crate::geometry::{torus_size, ToricSet, DEFAULT_POINT_CAP};

/// A polynomial as a map from exponent vectors to nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparsePolynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, FieldElement>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Homogeneity {
    /// The zero polynomial, homogeneous of every degree.
    Zero,
    Homogeneous(u32),
    Mixed,
}

impl Homogeneity {
    pub fn is_homogeneous(self) -> bool {
        !matches!(self, Homogeneity::Mixed)
    }
}

/// JSON form `{nvars, terms: [{exps, coeff}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub nvars: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exps: Vec<u32>,
    pub coeff: u32,
}

impl SparsePolynomial {
    pub fn zero(nvars: usize) -> Self {
        SparsePolynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: FieldElement) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn monomial(exps: Vec<u32>, c: FieldElement) -> Self {
        let mut p = Self::zero(exps.len());
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// Builds a polynomial, merging repeated exponent vectors.
    pub fn from_terms(
        field: &FiniteField,
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, FieldElement)>,
    ) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    got: exps.len(),
                });
            }
            p.add_term(field, exps, field.check(c)?);
        }
        Ok(p)
    }

    /// `a*t_i - b*t_j` in `nvars` variables (0-based indices).
    pub fn binomial_form(
        field: &FiniteField,
        nvars: usize,
        a: FieldElement,
        i: usize,
        b: FieldElement,
        j: usize,
    ) -> Self {
        let mut p = Self::zero(nvars);
        let mut e = vec![0; nvars];
        e[i] = 1;
        p.add_term(field, e, a);
        let mut e = vec![0; nvars];
        e[j] = 1;
        p.add_term(field, e, field.neg(b));
        p
    }

    pub fn add_term(&mut self, field: &FiniteField, exps: Vec<u32>, c: FieldElement) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = field.add(*o.get(), c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], FieldElement)> + '_ {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }

    pub fn coefficient(&self, exps: &[u32]) -> FieldElement {
        self.terms.get(exps).copied().unwrap_or(FieldElement::ZERO)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Degree in the variable with 0-based index `var`.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn homogeneity(&self) -> Homogeneity {
        let mut degrees = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degrees.next() {
            None => Homogeneity::Zero,
            Some(d) if degrees.all(|x| x == d) => Homogeneity::Homogeneous(d),
            Some(_) => Homogeneity::Mixed,
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneity().is_homogeneous()
    }

    /// Evaluates with the convention `0^0 = 1`.
    pub fn evaluate(&self, field: &FiniteField, point: &[FieldElement]) -> Result<FieldElement> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        for &x in point {
            field.check(x)?;
        }
        Ok(self.eval_unchecked(field, point))
    }

    fn eval_unchecked(&self, field: &FiniteField, point: &[FieldElement]) -> FieldElement {
        self.terms.iter().fold(FieldElement::ZERO, |acc, (e, &c)| {
            let t = e
                .iter()
                .zip(point)
                .fold(c, |t, (&k, &x)| field.mul(t, field.pow(x, u64::from(k))));
            field.add(acc, t)
        })
    }

    pub fn add(&self, field: &FiniteField, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(field, e.clone(), c);
        }
        out
    }

    pub fn scale(&self, field: &FiniteField, c: FieldElement) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, &a) in &self.terms {
            out.add_term(field, e.clone(), field.mul(a, c));
        }
        out
    }

    pub fn mul(&self, field: &FiniteField, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e1, &c1) in &self.terms {
            for (e2, &c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(field, e, field.mul(c1, c2));
            }
        }
        out
    }

    /// Reduces every exponent modulo `q - 1`. The result agrees with `self`
    /// on `(K*)^nvars` and has degree at most `q - 2` in each variable.
    pub fn torus_canonical_form(&self, field: &FiniteField) -> Self {
        let order = field.q() - 1;
        let mut out = Self::zero(self.nvars);
        for (e, &c) in &self.terms {
            out.add_term(field, e.iter().map(|&k| k % order).collect(), c);
        }
        out
    }

    /// `F(t_1, ..., t_{n-1}, 1)` as a polynomial in `n - 1` variables.
    pub fn dehomogenize_last(&self, field: &FiniteField) -> Self {
        let n = self.nvars.saturating_sub(1);
        let mut out = Self::zero(n);
        for (e, &c) in &self.terms {
            out.add_term(field, e[..n].to_vec(), c);
        }
        out
    }

    /// Text form `c*t1^a1*...*tn^an + ...`, highest exponent vector first.
    /// Variables with exponent zero are omitted; the zero polynomial is `0`.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            write!(out, "{c}").unwrap();
            for (v, &k) in e.iter().enumerate() {
                if k > 0 {
                    write!(out, "*t{}^{}", v + 1, k).unwrap();
                }
            }
        }
        out
    }

    /// Parses the text form. Factors may appear in any order, `tI` without
    /// an exponent means `tI^1`, and a missing coefficient means 1.
    pub fn parse(field: &FiniteField, text: &str, nvars: usize) -> Result<Self> {
        let text = text.trim();
        let mut p = Self::zero(nvars);
        if text.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        for term in text.split('+') {
            let term = term.trim();
            if term.is_empty() {
                return Err(Error::Parse("empty term".into()));
            }
            let mut coeff = FieldElement::ONE;
            let mut exps = vec![0u32; nvars];
            for factor in term.split('*') {
                let factor = factor.trim();
                if let Some(var) = factor.strip_prefix('t') {
                    let (idx, pow) = match var.split_once('^') {
                        Some((i, k)) => (i, k),
                        None => (var, "1"),
                    };
                    let idx: usize = idx
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad variable in {factor:?}")))?;
                    let pow: u32 = pow
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?;
                    if idx == 0 || idx > nvars {
                        return Err(Error::Parse(format!(
                            "variable t{idx} outside t1..t{nvars}"
                        )));
                    }
                    exps[idx - 1] += pow;
                } else {
                    let c: u32 = factor
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad coefficient {factor:?}")))?;
                    coeff = field.mul(coeff, field.element(c)?);
                }
            }
            p.add_term(field, exps, coeff);
        }
        Ok(p)
    }

    pub fn to_json(&self) -> PolynomialJson {
        PolynomialJson {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .rev()
                .map(|(e, c)| TermJson {
                    exps: e.clone(),
                    coeff: c.value(),
                })
                .collect(),
        }
    }

    pub fn from_json(field: &FiniteField, json: &PolynomialJson) -> Result<Self> {
        Self::from_terms(
            field,
            json.nvars,
            json.terms
                .iter()
                .map(|t| (t.exps.clone(), FieldElement::new(t.coeff))),
        )
    }
}

/// `|Z_G|`: number of zeros of `g` on the affine torus `(K*)^nvars`.
pub fn count_zeros_affine_torus(g: &SparsePolynomial, field: &FiniteField) -> Result<u64> {
    count_zeros_affine_torus_with(g, field, DEFAULT_POINT_CAP, Strategy::default())
}

pub fn count_zeros_affine_torus_with(
    g: &SparsePolynomial,
    field: &FiniteField,
    cap: u64,
    strategy: Strategy,
) -> Result<u64> {
    let n = g.nvars;
    let total = match torus_size(field.q(), n) {
        Some(t) if t <= u128::from(cap) => t as u64,
        other => {
            return Err(Error::CapExceeded {
                what: "torus points",
                required: other.unwrap_or(u128::MAX),
                cap,
            })
        }
    };
    if g.is_zero() {
        return Ok(total);
    }
    let order = u64::from(field.q() - 1);
    // At x = (g^{a_1}, ..., g^{a_n}) the term c*t^e equals g^{log c + e.a}.
    let coeff_logs: Vec<u64> = g
        .terms
        .values()
        .map(|&c| u64::from(field.log(c).expect("stored coefficients are nonzero")))
        .collect();
    let exps: Vec<Vec<u64>> = (0..n)
        .map(|j| g.terms.keys().map(|e| u64::from(e[j]) % order).collect())
        .collect();

    let ranges = exec::chunk_ranges(total, exec::task_count(strategy, total));
    let count = exec::map_reduce(
        strategy,
        ranges.len(),
        0u64,
        |t| {
            let range = ranges[t].clone();
            let mut digits = vec![0u64; n];
            let mut rest = range.start;
            for d in digits.iter_mut().rev() {
                *d = rest % order;
                rest /= order;
            }
            let mut logs = coeff_logs.clone();
            for (j, &a) in digits.iter().enumerate() {
                for (l, &e) in logs.iter_mut().zip(&exps[j]) {
                    *l = (*l + e * a) % order;
                }
            }
            let mut zeros = 0;
            for _ in range {
                let value = logs
                    .iter()
                    .fold(FieldElement::ZERO, |acc, &l| field.add(acc, field.exp(l)));
                zeros += u64::from(value.is_zero());
                for j in (0..n).rev() {
                    digits[j] += 1;
                    for (l, &e) in logs.iter_mut().zip(&exps[j]) {
                        *l = (*l + e) % order;
                    }
                    if digits[j] < order {
                        break;
                    }
                    digits[j] = 0;
                }
            }
            zeros
        },
        |a, b| a + b,
    );
    Ok(count)
}

/// Number of zeros of `g` in the whole affine space `K^nvars`.
pub fn count_zeros_affine_space(g: &SparsePolynomial, field: &FiniteField, cap: u64) -> Result<u64> {
    let q = u64::from(field.q());
    let n = g.nvars;
    let total = q
        .checked_pow(n as u32)
        .filter(|&t| t <= cap)
        .ok_or(Error::CapExceeded {
            what: "affine points",
            required: u128::from(q).checked_pow(n as u32).unwrap_or(u128::MAX),
            cap,
        })?;
    let mut point = vec![FieldElement::ZERO; n];
    let mut zeros = 0;
    for _ in 0..total {
        zeros += u64::from(g.eval_unchecked(field, &point).is_zero());
        for c in point.iter_mut().rev() {
            *c = FieldElement::new(c.value() + 1);
            if c.value() < field.q() {
                break;
            }
            *c = FieldElement::ZERO;
        }
    }
    Ok(zeros)
}

/// `|A_F|`: number of points of `x` at which the homogeneous `g` vanishes.
pub fn count_zeros_projective(g: &SparsePolynomial, x: &ToricSet) -> Result<u64> {
    count_zeros_projective_with(g, x, Strategy::default())
}

pub fn count_zeros_projective_with(
    g: &SparsePolynomial,
    x: &ToricSet,
    strategy: Strategy,
) -> Result<u64> {
    if !g.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    if g.nvars != x.s() {
        return Err(Error::DimensionMismatch {
            expected: x.s(),
            got: g.nvars,
        });
    }
    let field = x.field();
    let ranges = exec::chunk_ranges(x.len() as u64, exec::task_count(strategy, x.len() as u64));
    Ok(exec::map_reduce(
        strategy,
        ranges.len(),
        0u64,
        |t| {
            ranges[t]
                .clone()
                .filter(|&i| g.eval_unchecked(field, x.point(i as usize)).is_zero())
                .count() as u64
        },
        |a, b| a + b,
    ))
}
