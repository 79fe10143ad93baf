//! Arithmetic in GF(p^m).
//!
//! Elements are encoded as integers in `0..q`: the base-`p` digits of the
//! encoding are the coefficients of the element in the polynomial basis
//! (constant term least significant). The modulus is the monic irreducible
//! polynomial of degree `m` with the smallest encoding, and the designated
//! primitive element is the smallest encoding of multiplicative order
//! `q - 1`. Both choices are deterministic, so two fields built from the same
//! `(p, m)` share identical tables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field order accepted by [`FiniteField::new`].
pub const DEFAULT_FIELD_CAP: u64 = 1 << 16;

/// Fields up to this order get a full addition table.
const ADD_TABLE_LIMIT: u32 = 256;

#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Wraps an encoding without range checking; see [`FiniteField::element`].
    pub const fn new(encoding: u32) -> Self {
        FieldElement(encoding)
    }

    pub const fn value(self) -> u32 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl std::fmt::Display for FieldElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// JSON descriptor `{p, m, q, modulus}` used in reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub m: u32,
    pub q: u32,
    pub modulus: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteField {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    primitive: FieldElement,
    /// `exp[i] = primitive^i`, stored twice over so that `exp[a + b]` needs
    /// no reduction for logs `a, b < q - 1`.
    exp: Vec<u32>,
    /// `log[x]` for nonzero `x`; `log[0]` is a sentinel.
    log: Vec<u32>,
    neg: Vec<u32>,
    add: Option<Vec<u32>>,
}

impl FiniteField {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        Self::with_cap(p, m, DEFAULT_FIELD_CAP)
    }

    pub fn with_cap(p: u64, m: u32, cap: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m < 1 {
            return Err(Error::ZeroDegree);
        }
        let q = p
            .checked_pow(m)
            .filter(|&q| q <= cap && q <= u64::from(u32::MAX))
            .ok_or(Error::FieldTooLarge { p, m, cap })?;
        let (p, q) = (p as u32, q as u32);

        let modulus = smallest_irreducible(p, m);
        let slow = SlowArith { p, m, modulus: &modulus };
        let primitive = find_primitive(&slow, q);

        let order = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * order.max(1)];
        let mut log = vec![u32::MAX; q as usize];
        let mut x = 1u32;
        for i in 0..order {
            exp[i] = x;
            exp[i + order] = x;
            log[x as usize] = i as u32;
            x = slow.mul(x, primitive);
        }
        debug_assert_eq!(x, 1);

        let neg = (0..q).map(|a| slow.neg(a)).collect();
        let add = (q <= ADD_TABLE_LIMIT).then(|| {
            let mut table = Vec::with_capacity((q * q) as usize);
            for a in 0..q {
                for b in 0..q {
                    table.push(slow.add(a, b));
                }
            }
            table
        });

        Ok(FiniteField {
            p,
            m,
            q,
            modulus,
            primitive: FieldElement(primitive),
            exp,
            log,
            neg,
            add,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Coefficients `c0..=cm` of the modulus (monic, so `cm = 1`).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn primitive(&self) -> FieldElement {
        self.primitive
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.p,
            m: self.m,
            q: self.q,
            modulus: self.modulus.clone(),
        }
    }

    /// Checked conversion from an encoding.
    pub fn element(&self, encoding: u32) -> Result<FieldElement> {
        self.check(FieldElement(encoding))
    }

    /// Rejects elements whose encoding does not belong to this field.
    pub fn check(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 < self.q {
            Ok(a)
        } else {
            Err(Error::ForeignElement { value: a.0, q: self.q })
        }
    }

    /// The `q - 1` nonzero elements in ascending encoding order.
    pub fn nonzero_elements(&self) -> Vec<FieldElement> {
        (1..self.q).map(FieldElement).collect()
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(a.0 < self.q && b.0 < self.q);
        match &self.add {
            Some(t) => FieldElement(t[(a.0 * self.q + b.0) as usize]),
            None => FieldElement(self.slow().add(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let i = self.log[a.0 as usize] + self.log[b.0 as usize];
        FieldElement(self.exp[i as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let order = self.q - 1;
        let l = self.log[a.0 as usize];
        Ok(FieldElement(self.exp[((order - l) % order) as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` with `0^0 = 1`.
    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        let order = u64::from(self.q - 1);
        let l = u64::from(self.log[a.0 as usize]);
        FieldElement(self.exp[((l * (e % order)) % order) as usize])
    }

    /// Discrete logarithm to the primitive element; `None` for zero.
    #[inline]
    pub fn log(&self, a: FieldElement) -> Option<u32> {
        (!a.is_zero()).then(|| self.log[a.0 as usize])
    }

    /// `primitive^i`.
    #[inline]
    pub fn exp(&self, i: u64) -> FieldElement {
        FieldElement(self.exp[(i % u64::from(self.q - 1)) as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: FieldElement) -> Result<u64> {
        let l = u64::from(self.log(a).ok_or(Error::DivisionByZero)?);
        let n = u64::from(self.q - 1);
        Ok(n / gcd(n, l))
    }

    fn slow(&self) -> SlowArith<'_> {
        SlowArith {
            p: self.p,
            m: self.m,
            modulus: &self.modulus,
        }
    }
}

/// Table-free arithmetic on encodings, used while building the tables.
struct SlowArith<'a> {
    p: u32,
    m: u32,
    modulus: &'a [u32],
}

impl SlowArith<'_> {
    fn digits(&self, mut a: u32) -> Vec<u32> {
        let mut out = vec![0; self.m as usize];
        for d in out.iter_mut() {
            *d = a % self.p;
            a /= self.p;
        }
        out
    }

    fn encode(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        if self.m == 1 {
            return (a + b) % self.p;
        }
        if self.p == 2 {
            return a ^ b;
        }
        let (x, y) = (self.digits(a), self.digits(b));
        let sum: Vec<u32> = x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect();
        self.encode(&sum)
    }

    fn neg(&self, a: u32) -> u32 {
        let d: Vec<u32> = self
            .digits(a)
            .into_iter()
            .map(|u| (self.p - u) % self.p)
            .collect();
        self.encode(&d)
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        let p = u64::from(self.p);
        if self.m == 1 {
            return (u64::from(a) * u64::from(b) % p) as u32;
        }
        let (x, y) = (self.digits(a), self.digits(b));
        let m = self.m as usize;
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &u) in x.iter().enumerate() {
            for (j, &v) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u64::from(u) * u64::from(v)) % p;
            }
        }
        // Reduce with x^m = -(c0 + c1 x + ... + c_{m-1} x^{m-1}).
        for top in (m..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for (k, &mk) in self.modulus[..m].iter().enumerate() {
                let idx = top - m + k;
                prod[idx] = (prod[idx] + (p - c) * u64::from(mk)) % p;
            }
        }
        let digits: Vec<u32> = prod[..m].iter().map(|&d| d as u32).collect();
        self.encode(&digits)
    }

    fn pow(&self, a: u32, mut e: u64) -> u32 {
        let (mut base, mut acc) = (a, 1u32);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

fn find_primitive(arith: &SlowArith<'_>, q: u32) -> u32 {
    let order = u64::from(q - 1);
    let factors = prime_factors(order);
    (1..q)
        .find(|&g| factors.iter().all(|&r| arith.pow(g, order / r) != 1))
        .expect("the multiplicative group of a finite field is cyclic")
}

/// Monic irreducible polynomial of degree `m` over GF(p) with the smallest
/// encoding, as coefficients `c0..=cm`.
fn smallest_irreducible(p: u32, m: u32) -> Vec<u32> {
    let p64 = u64::from(p);
    let lower_count = p64.pow(m);
    for lower in 0..lower_count {
        let poly = monic_from_index(p, m, lower);
        if is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn monic_from_index(p: u32, deg: u32, mut index: u64) -> Vec<u32> {
    let mut coeffs = Vec::with_capacity(deg as usize + 1);
    for _ in 0..deg {
        coeffs.push((index % u64::from(p)) as u32);
        index /= u64::from(p);
    }
    coeffs.push(1);
    coeffs
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = (poly.len() - 1) as u32;
    for dd in 1..=deg / 2 {
        for idx in 0..u64::from(p).pow(dd) {
            let divisor = monic_from_index(p, dd, idx);
            if poly_rem_is_zero(poly, &divisor, p) {
                return false;
            }
        }
    }
    true
}

fn poly_rem_is_zero(num: &[u32], monic_div: &[u32], p: u32) -> bool {
    let p = u64::from(p);
    let mut rem: Vec<u64> = num.iter().map(|&c| u64::from(c)).collect();
    let dd = monic_div.len() - 1;
    for top in (dd..rem.len()).rev() {
        let c = rem[top] % p;
        if c == 0 {
            continue;
        }
        for (k, &dk) in monic_div.iter().enumerate() {
            let idx = top - dd + k;
            rem[idx] = (rem[idx] + (p - c) * u64::from(dk)) % p;
        }
    }
    rem[..dd].iter().all(|&c| c % p == 0)
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
