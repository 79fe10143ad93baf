//! Hilbert functions, regularity index, and the Hilbert series of the
//! projective torus.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::codes::{dimension, Caps};
use crate::error::{Error, Result};
use crate::geometry::{is_complete_intersection, ToricSet};

/// `H_X(0), H_X(1), ...` up to and including the first degree where the
/// value reaches `|X|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertProfile {
    pub q: u32,
    pub s: usize,
    pub size: u64,
    pub values: Vec<u64>,
    pub regularity: u32,
}

impl HilbertProfile {
    /// First differences `h_i = H_X(i) - H_X(i-1)`, with `h_0 = H_X(0)`.
    pub fn differences(&self) -> Vec<u64> {
        let mut prev = 0;
        self.values
            .iter()
            .map(|&v| {
                let h = v - prev;
                prev = v;
                h
            })
            .collect()
    }
}

/// Computes the profile degree by degree. `hard_stop` is the last degree
/// tried; `|X| - 1` always suffices.
pub fn hilbert_profile(x: &ToricSet, hard_stop: u32, caps: &Caps) -> Result<HilbertProfile> {
    let size = x.len() as u64;
    let mut values = Vec::new();
    for d in 0..=hard_stop {
        let h = dimension(x, d, caps)? as u64;
        if values.last().is_some_and(|&prev| h < prev) {
            return Err(Error::Discrepancy {
                check: "Hilbert function monotonicity".into(),
                detail: format!("H({d}) = {h} < H({}) = {}", d - 1, values[values.len() - 1]),
            });
        }
        values.push(h);
        if h == size {
            return Ok(HilbertProfile {
                q: x.field().q(),
                s: x.s(),
                size,
                values,
                regularity: d,
            });
        }
    }
    Err(Error::invalid(format!(
        "Hilbert function did not reach |X| = {size} by degree {hard_stop}"
    )))
}

/// Numerator `(1 + t + ... + t^{q-2})^{s-1}` of the Hilbert series of the
/// projective torus in P^{s-1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertSeriesCI {
    pub q: u32,
    pub s: u32,
    pub numerator: Vec<BigUint>,
}

impl HilbertSeriesCI {
    pub fn regularity(&self) -> u64 {
        self.numerator.len() as u64 - 1
    }

    pub fn degree(&self) -> BigUint {
        self.numerator.iter().sum()
    }

    /// The coefficients as machine integers, if they all fit.
    pub fn numerator_u64(&self) -> Option<Vec<u64>> {
        self.numerator.iter().map(ToPrimitive::to_u64).collect()
    }
}

pub fn ci_hilbert_series(q: u32, s: u32) -> Result<HilbertSeriesCI> {
    if q < 2 || s < 2 {
        return Err(Error::invalid("the torus Hilbert series needs q >= 2 and s >= 2"));
    }
    let width = (q - 1) as usize;
    let mut poly = vec![BigUint::one()];
    for _ in 0..s - 1 {
        let mut next = vec![BigUint::zero(); poly.len() + width - 1];
        for (i, c) in poly.iter().enumerate() {
            for slot in &mut next[i..i + width] {
                *slot += c;
            }
        }
        poly = next;
    }
    Ok(HilbertSeriesCI { q, s, numerator: poly })
}

/// `reg(S/I(T)) = (s-1)(q-2)`.
pub fn ci_regularity(q: u32, s: u32) -> u64 {
    u64::from(s.saturating_sub(1)) * u64::from(q.saturating_sub(2))
}

/// Profile of a clutter-parameterized set together with the regularity
/// bound `(q-2)(s-1)` and the complete-intersection flag.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub q: u32,
    pub s: usize,
    pub size: u64,
    pub values: Vec<u64>,
    pub regularity: u32,
    pub bound: u64,
    pub ci: bool,
}

impl RegularityReport {
    pub fn equality(&self) -> bool {
        u64::from(self.regularity) == self.bound
    }
}

/// Fails with a discrepancy if the regularity exceeds the bound, or if
/// `X` is a complete intersection and the bound is not attained.
pub fn check_regularity_bound(x: &ToricSet, caps: &Caps) -> Result<RegularityReport> {
    let q = x.field().q();
    let bound = ci_regularity(q, x.s() as u32);
    let stop = u32::try_from(bound).map_err(|_| Error::Overflow("the regularity bound"))?;
    let profile = match hilbert_profile(x, stop, caps) {
        Ok(p) => p,
        Err(Error::InvalidArgument(_)) => {
            return Err(Error::Discrepancy {
                check: "regularity bound".into(),
                detail: format!("H_X has not stabilized at degree {bound} = (q-2)(s-1)"),
            })
        }
        Err(e) => return Err(e),
    };
    let ci = is_complete_intersection(x);
    let report = RegularityReport {
        q,
        s: x.s(),
        size: profile.size,
        values: profile.values,
        regularity: profile.regularity,
        bound,
        ci,
    };
    if ci && !report.equality() {
        return Err(Error::Discrepancy {
            check: "regularity of a complete intersection".into(),
            detail: format!("regularity {} but bound {bound}", report.regularity),
        });
    }
    Ok(report)
}
