//! Projective tori, clutters, and the toric sets they parameterize.

use std::collections::HashSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{ClutterError, Error, Result};
use crate::exec::{self, Strategy};
use crate::galois::{FieldElement, FiniteField};

/// Default cap on the number of parameter tuples or points enumerated.
pub const DEFAULT_POINT_CAP: u64 = 10_000_000;

/// A point of P^{s-1} with all coordinates nonzero, scaled so that the last
/// coordinate is 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjectivePoint(Vec<FieldElement>);

impl ProjectivePoint {
    /// Normalizes a representative. Every coordinate must be nonzero.
    pub fn normalize(field: &FiniteField, coords: &[FieldElement]) -> Result<Self> {
        let last = *coords
            .last()
            .ok_or_else(|| Error::invalid("a projective point needs coordinates"))?;
        if coords.iter().any(|c| c.is_zero()) {
            return Err(Error::invalid("toric points have nonzero coordinates"));
        }
        for &c in coords {
            field.check(c)?;
        }
        let inv = field.inv(last)?;
        Ok(ProjectivePoint(coords.iter().map(|&c| field.mul(c, inv)).collect()))
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.0
    }
}

/// A deduplicated, lexicographically sorted set of normalized points of
/// P^{s-1}, stored flat.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricSet {
    field: Arc<FiniteField>,
    s: usize,
    coords: Vec<FieldElement>,
}

/// JSON export `{q, s, points}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToricSetJson {
    pub q: u32,
    pub s: usize,
    pub points: Vec<Vec<u32>>,
}

impl ToricSet {
    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    /// Number of homogeneous coordinates; points live in P^{s-1}.
    pub fn s(&self) -> usize {
        self.s
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.s
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[FieldElement] {
        &self.coords[i * self.s..(i + 1) * self.s]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[FieldElement]> + '_ {
        self.coords.chunks_exact(self.s)
    }

    pub fn to_points(&self) -> Vec<ProjectivePoint> {
        self.points().map(|p| ProjectivePoint(p.to_vec())).collect()
    }

    pub fn contains(&self, point: &ProjectivePoint) -> bool {
        point.0.len() == self.s
            && binary_search(self.len(), |i| self.point(i).cmp(&point.0[..])).is_ok()
    }

    pub fn to_json(&self) -> ToricSetJson {
        ToricSetJson {
            q: self.field.q(),
            s: self.s,
            points: self
                .points()
                .map(|p| p.iter().map(|c| c.value()).collect())
                .collect(),
        }
    }
}

fn binary_search(len: usize, cmp: impl Fn(usize) -> std::cmp::Ordering) -> Result<usize, usize> {
    let (mut lo, mut hi) = (0, len);
    while lo < hi {
        let mid = (lo + hi) / 2;
        match cmp(mid) {
            std::cmp::Ordering::Less => lo = mid + 1,
            std::cmp::Ordering::Greater => hi = mid,
            std::cmp::Ordering::Equal => return Ok(mid),
        }
    }
    Err(lo)
}

/// `(q-1)^e` as u128, or `None` on overflow.
pub(crate) fn torus_size(q: u32, e: usize) -> Option<u128> {
    u128::from(q - 1).checked_pow(u32::try_from(e).ok()?)
}

fn cap_check(what: &'static str, required: Option<u128>, cap: u64) -> Result<u64> {
    match required {
        Some(r) if r <= u128::from(cap) => Ok(r as u64),
        Some(r) => Err(Error::CapExceeded { what, required: r, cap }),
        None => Err(Error::CapExceeded { what, required: u128::MAX, cap }),
    }
}

/// The projective torus T in P^{s-1}: all `(q-1)^{s-1}` points with nonzero
/// coordinates, in lexicographic order.
pub fn projective_torus(field: &Arc<FiniteField>, s: usize, cap: u64) -> Result<ToricSet> {
    if s < 2 {
        return Err(Error::invalid("the projective torus needs s >= 2"));
    }
    let size = cap_check("torus points", torus_size(field.q(), s - 1), cap)? as usize;
    let nonzero = field.nonzero_elements();
    let mut coords = Vec::with_capacity(size * s);
    let mut digits = vec![0usize; s - 1];
    for _ in 0..size {
        coords.extend(digits.iter().map(|&d| nonzero[d]));
        coords.push(FieldElement::ONE);
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < nonzero.len() {
                break;
            }
            *d = 0;
        }
    }
    Ok(ToricSet {
        field: Arc::clone(field),
        s,
        coords,
    })
}

/// An exponent vector `v = (v_1, ..., v_n)` defining the monomial
/// `y_1^{v_1} ... y_n^{v_n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVector(pub Vec<u32>);

impl ExponentVector {
    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        ExponentVector(v)
    }
}

/// The toric set parameterized by the monomials `y^{v_1}, ..., y^{v_s}`.
pub fn toric_set_from_exponents(
    field: &Arc<FiniteField>,
    vs: &[ExponentVector],
    cap: u64,
) -> Result<ToricSet> {
    toric_set_from_exponents_with(field, vs, cap, Strategy::default())
}

pub fn toric_set_from_exponents_with(
    field: &Arc<FiniteField>,
    vs: &[ExponentVector],
    cap: u64,
    strategy: Strategy,
) -> Result<ToricSet> {
    let s = vs.len();
    if s == 0 {
        return Err(Error::invalid("no exponent vectors given"));
    }
    if s < 2 {
        return Err(Error::invalid("toric sets need s >= 2 monomials"));
    }
    let n = vs[0].0.len();
    if let Some(bad) = vs.iter().find(|v| v.0.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: bad.0.len(),
        });
    }
    let order = u64::from(field.q() - 1);
    let total = cap_check("parameter tuples", torus_size(field.q(), n), cap)?;

    // Coordinate i of the normalized image of (g^{a_1}, ..., g^{a_n}) is
    // g^{sum_j (v_ij - v_sj) a_j}.
    let last = &vs[s - 1].0;
    let diff: Vec<Vec<u64>> = (0..n)
        .map(|j| {
            vs[..s - 1]
                .iter()
                .map(|v| {
                    let d = i64::from(v.0[j]) - i64::from(last[j]);
                    d.rem_euclid(order as i64) as u64
                })
                .collect()
        })
        .collect();

    let ranges = exec::chunk_ranges(total, exec::task_count(strategy, total));
    let chunks: Vec<Vec<Vec<FieldElement>>> = exec::map_collect(strategy, ranges.len(), |t| {
        let range = ranges[t].clone();
        let mut digits = vec![0u64; n];
        let mut rest = range.start;
        for d in digits.iter_mut().rev() {
            *d = rest % order;
            rest /= order;
        }
        let mut logs = vec![0u64; s - 1];
        for (j, &a) in digits.iter().enumerate() {
            for (l, &dj) in logs.iter_mut().zip(&diff[j]) {
                *l = (*l + dj * a) % order;
            }
        }
        let mut seen: HashSet<Vec<FieldElement>> = HashSet::new();
        for _ in range {
            seen.insert(logs.iter().map(|&l| field.exp(l)).collect());
            // Odometer step; a digit reaching q-1 wraps to 0, which leaves
            // the logs unchanged mod q-1.
            for j in (0..n).rev() {
                digits[j] += 1;
                for (l, &dj) in logs.iter_mut().zip(&diff[j]) {
                    *l = (*l + dj) % order;
                }
                if digits[j] < order {
                    break;
                }
                digits[j] = 0;
            }
        }
        let mut v: Vec<_> = seen.into_iter().collect();
        v.sort_unstable();
        v
    });

    let mut all: Vec<Vec<FieldElement>> = chunks.into_iter().flatten().collect();
    all.sort_unstable();
    all.dedup();
    let mut coords = Vec::with_capacity(all.len() * s);
    for p in all {
        coords.extend(p);
        coords.push(FieldElement::ONE);
    }
    Ok(ToricSet {
        field: Arc::clone(field),
        s,
        coords,
    })
}

/// Complete-intersection decision for a clutter-parameterized toric set.
///
/// For a clutter, `I(X)` is a complete intersection exactly when `X` is the
/// whole projective torus of P^{s-1}. Since `X` always lies inside the
/// torus, this reduces to comparing `|X|` with `(q-1)^{s-1}`. For toric sets
/// from arbitrary (non 0/1) exponent vectors this still decides `X = T`, but
/// that is only known to coincide with the complete-intersection property
/// in the clutter case.
pub fn is_complete_intersection(x: &ToricSet) -> bool {
    let inside = x
        .points()
        .all(|p| p.iter().all(|c| !c.is_zero()) && p[x.s - 1] == FieldElement::ONE);
    inside && torus_size(x.field.q(), x.s - 1) == Some(x.len() as u128)
}

/// A family of nonempty vertex sets (1-based, each sorted) none of which
/// contains another.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clutter {
    n: u32,
    edges: Vec<Vec<u32>>,
}

/// Clutter file schema `{n, edges: [[ints]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClutterFile {
    pub n: u32,
    pub edges: Vec<Vec<u32>>,
}

impl TryFrom<ClutterFile> for Clutter {
    type Error = ClutterError;

    fn try_from(f: ClutterFile) -> Result<Self, ClutterError> {
        Clutter::new(f.n, f.edges)
    }
}

impl Clutter {
    /// Validates the antichain and distinctness conditions. Vertices inside
    /// an edge are treated as a set.
    pub fn new(n: u32, edges: Vec<Vec<u32>>) -> Result<Self, ClutterError> {
        if edges.is_empty() {
            return Err(ClutterError::NoEdges);
        }
        let mut sorted = Vec::with_capacity(edges.len());
        for mut e in edges {
            if e.is_empty() {
                return Err(ClutterError::EmptyEdge);
            }
            e.sort_unstable();
            e.dedup();
            if let Some(&v) = e.iter().find(|&&v| v == 0 || v > n) {
                return Err(ClutterError::VertexOutOfRange { vertex: v, n });
            }
            sorted.push(e);
        }
        for (i, a) in sorted.iter().enumerate() {
            for b in &sorted[i + 1..] {
                if a == b {
                    return Err(ClutterError::DuplicateEdge(a.clone()));
                }
                let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
                if is_subset(small, large) {
                    return Err(ClutterError::Containment {
                        small: small.clone(),
                        large: large.clone(),
                    });
                }
            }
        }
        Ok(Clutter { n, edges: sorted })
    }

    /// The complete bipartite graph K_{k,l} with edges `{i, k+j}` in
    /// lexicographic order of `(i, j)`.
    pub fn complete_bipartite(k: u32, l: u32) -> Result<Self, ClutterError> {
        let edges = (1..=k)
            .flat_map(|i| (1..=l).map(move |j| vec![i, k + j]))
            .collect();
        Clutter::new(k + l, edges)
    }

    /// The clutter `{1}, ..., {s}`, whose toric set is the full torus.
    pub fn singletons(s: u32) -> Result<Self, ClutterError> {
        Clutter::new(s, (1..=s).map(|i| vec![i]).collect())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn edges(&self) -> &[Vec<u32>] {
        &self.edges
    }

    /// Number of edges, i.e. the `s` of the ambient P^{s-1}.
    pub fn s(&self) -> usize {
        self.edges.len()
    }

    pub fn characteristic_vectors(&self) -> Vec<ExponentVector> {
        self.edges
            .iter()
            .map(|e| {
                let mut v = vec![0; self.n as usize];
                for &i in e {
                    v[i as usize - 1] = 1;
                }
                ExponentVector(v)
            })
            .collect()
    }

    pub fn toric_set(&self, field: &Arc<FiniteField>, cap: u64) -> Result<ToricSet> {
        toric_set_from_exponents(field, &self.characteristic_vectors(), cap)
    }

    /// Recognizes a complete bipartite graph K_{a,b} (ignoring isolated
    /// vertices); returns the side sizes with `a <= b`.
    pub fn as_complete_bipartite(&self) -> Option<(u32, u32)> {
        if self.edges.iter().any(|e| e.len() != 2) {
            return None;
        }
        let n = self.n as usize;
        let mut adj = vec![Vec::new(); n + 1];
        for e in &self.edges {
            adj[e[0] as usize].push(e[1] as usize);
            adj[e[1] as usize].push(e[0] as usize);
        }
        let start = self.edges[0][0] as usize;
        let mut side = vec![None; n + 1];
        side[start] = Some(false);
        let mut stack = vec![start];
        let (mut a, mut b) = (0u32, 0u32);
        while let Some(v) = stack.pop() {
            let sv = side[v].unwrap();
            if sv {
                b += 1;
            } else {
                a += 1;
            }
            for &w in &adj[v] {
                match side[w] {
                    None => {
                        side[w] = Some(!sv);
                        stack.push(w);
                    }
                    Some(sw) if sw == sv => return None,
                    Some(_) => {}
                }
            }
        }
        let touched = adj.iter().filter(|nb| !nb.is_empty()).count() as u32;
        if a + b != touched || u64::from(a) * u64::from(b) != self.edges.len() as u64 {
            return None;
        }
        Some((a.min(b), a.max(b)))
    }
}

fn is_subset(small: &[u32], large: &[u32]) -> bool {
    small.iter().all(|v| large.binary_search(v).is_ok())
}
