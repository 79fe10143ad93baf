//! Worked examples checked against small independent reimplementations:
//! arithmetic mod p with plain integers, naive point enumeration, naive
//! Gaussian elimination and brute-force codeword enumeration.

use std::collections::BTreeSet;
use std::sync::Arc;

use toric_codes::bounds::{extremal_polynomial, max_zero_consistency, zero_bounds};
use toric_codes::codes::{
    bipartite_params, code_params, dimension, evaluation_matrix, min_distance_oracle, monomials,
    vanishing_forms_basis, Caps, DEFAULT_CODEWORD_CAP,
};
use toric_codes::geometry::{
    is_complete_intersection, projective_torus, toric_set_from_exponents, DEFAULT_POINT_CAP,
};
use toric_codes::invariants::{check_regularity_bound, hilbert_profile};
use toric_codes::polyeval::{count_zeros_affine_torus, count_zeros_projective};
use toric_codes::{Clutter, ExponentVector, FieldElement, FiniteField, SparsePolynomial, ToricSet};

fn field(p: u64, m: u32) -> Arc<FiniteField> {
    Arc::new(FiniteField::new(p, m).unwrap())
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Points of the toric set over the prime field GF(p), by brute force.
fn naive_toric_points(p: u64, vs: &[Vec<u32>]) -> Vec<Vec<u64>> {
    let n = vs[0].len();
    let mut set = BTreeSet::new();
    let mut x = vec![1u64; n];
    loop {
        let coords: Vec<u64> = vs
            .iter()
            .map(|v| v.iter().zip(&x).fold(1, |acc, (&e, &xi)| acc * pow_mod(xi, u64::from(e), p) % p))
            .collect();
        let last = inv_mod(coords[coords.len() - 1], p);
        set.insert(coords.iter().map(|c| c * last % p).collect::<Vec<_>>());
        let mut i = n;
        loop {
            if i == 0 {
                return set.into_iter().collect();
            }
            i -= 1;
            x[i] += 1;
            if x[i] < p {
                break;
            }
            x[i] = 1;
        }
    }
}

fn as_ints(x: &ToricSet) -> Vec<Vec<u64>> {
    x.points().map(|p| p.iter().map(|c| u64::from(c.value())).collect()).collect()
}

/// Evaluation matrix over GF(p) from the naive points.
fn naive_matrix(p: u64, points: &[Vec<u64>], d: u32) -> Vec<Vec<u64>> {
    let s = points[0].len();
    monomials(s, d)
        .iter()
        .map(|e| {
            points
                .iter()
                .map(|pt| {
                    let num = e.iter().zip(pt).fold(1, |acc, (&k, &c)| acc * pow_mod(c, u64::from(k), p) % p);
                    num * inv_mod(pow_mod(pt[0], u64::from(d), p), p) % p
                })
                .collect()
        })
        .collect()
}

fn naive_row_basis(p: u64, mut m: Vec<Vec<u64>>) -> Vec<Vec<u64>> {
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, piv);
        let inv = inv_mod(m[r][c], p);
        for v in m[r].iter_mut() {
            *v = *v * inv % p;
        }
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                let pivot = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(pivot) {
                    *x = (*x + p * p - f * y) % p;
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

fn naive_min_distance(p: u64, basis: &[Vec<u64>]) -> u64 {
    let k = basis.len() as u32;
    let n = basis[0].len();
    (1..p.pow(k))
        .map(|msg| {
            let mut rest = msg;
            let mut word = vec![0u64; n];
            for row in basis {
                let c = rest % p;
                rest /= p;
                for (w, &x) in word.iter_mut().zip(row) {
                    *w = (*w + c * x) % p;
                }
            }
            word.iter().filter(|&&w| w != 0).count() as u64
        })
        .min()
        .unwrap()
}

#[test]
fn gf5_primitive_by_exhaustive_order() {
    let f = field(5, 1);
    let order = |a: u64| (1..=4).find(|&e| pow_mod(a, e, 5) == 1).unwrap();
    let expected = (1..5).find(|&a| order(a) == 4).unwrap();
    assert_eq!(u64::from(f.primitive().value()), expected);
    assert_eq!(expected, 2);
}

#[test]
fn gf4_product_by_polynomial_multiplication() {
    // carry-less multiplication reduced by x^2 + x + 1
    let clmul = |a: u32, b: u32| {
        let mut r = 0;
        for i in 0..2 {
            if b >> i & 1 == 1 {
                r ^= a << i;
            }
        }
        if r & 4 != 0 {
            r ^= 0b111;
        }
        r
    };
    let f = field(2, 2);
    assert_eq!(f.modulus(), &[1, 1, 1]);
    for a in 0..4 {
        for b in 0..4 {
            assert_eq!(f.mul(FieldElement::new(a), FieldElement::new(b)).value(), clmul(a, b));
        }
    }
    assert_eq!(f.mul(FieldElement::new(2), FieldElement::new(2)).value(), 3);
}

#[test]
fn prime_field_toric_sets_match_naive_enumeration() {
    let cases: Vec<(u64, Vec<Vec<u32>>)> = vec![
        (3, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]),
        (3, vec![vec![1, 0, 1, 0], vec![1, 0, 0, 1], vec![0, 1, 1, 0], vec![0, 1, 0, 1]]),
        (5, vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]),
        (7, vec![vec![2, 1], vec![0, 3], vec![1, 1]]),
        (5, vec![vec![1, 0, 1, 0, 0], vec![1, 0, 0, 1, 0], vec![0, 1, 0, 0, 1], vec![0, 0, 1, 1, 1]]),
    ];
    for (p, vs) in cases {
        let f = field(p, 1);
        let evs: Vec<ExponentVector> = vs.iter().cloned().map(ExponentVector).collect();
        let x = toric_set_from_exponents(&f, &evs, DEFAULT_POINT_CAP).unwrap();
        let naive = naive_toric_points(p, &vs);
        assert_eq!(as_ints(&x), naive, "p={p} vs={vs:?}");
        let torus = (p - 1).pow(vs.len() as u32 - 1);
        assert_eq!(is_complete_intersection(&x), naive.len() as u64 == torus);
    }
}

#[test]
fn torus_examples() {
    let t = projective_torus(&field(3, 1), 3, DEFAULT_POINT_CAP).unwrap();
    assert_eq!(as_ints(&t), vec![vec![1, 1, 1], vec![1, 2, 1], vec![2, 1, 1], vec![2, 2, 1]]);
    let t = projective_torus(&field(2, 1), 5, DEFAULT_POINT_CAP).unwrap();
    assert_eq!(as_ints(&t), vec![vec![1; 5]]);
    for (p, m) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)] {
        let f = field(p, m);
        for s in 2..=5 {
            if u64::from(f.q() - 1).pow(s as u32 - 1) > 100_000 {
                continue;
            }
            let t = projective_torus(&f, s, DEFAULT_POINT_CAP).unwrap();
            assert_eq!(t.len() as u64, u64::from(f.q() - 1).pow(s as u32 - 1));
        }
    }
}

#[test]
fn bipartite_toric_set_sizes() {
    let k22 = Clutter::complete_bipartite(2, 2).unwrap();
    assert_eq!(k22.toric_set(&field(3, 1), DEFAULT_POINT_CAP).unwrap().len(), 4);
    assert_eq!(k22.toric_set(&field(2, 2), DEFAULT_POINT_CAP).unwrap().len(), 9);
    assert!(!is_complete_intersection(&k22.toric_set(&field(3, 1), DEFAULT_POINT_CAP).unwrap()));
}

#[test]
fn codes_match_naive_prime_field_computation() {
    for (p, s) in [(3u64, 2usize), (3, 3), (3, 4), (5, 2), (5, 3), (7, 2)] {
        let f = field(p, 1);
        let t = projective_torus(&f, s, DEFAULT_POINT_CAP).unwrap();
        let points = naive_toric_points(p, &(0..s).map(|i| (0..s).map(|j| u32::from(i == j)).collect()).collect::<Vec<_>>());
        for d in 0..=4 {
            let naive = naive_matrix(p, &points, d);
            let m = evaluation_matrix(&t, d, &Caps::default()).unwrap();
            let ours: Vec<Vec<u64>> = m
                .entries()
                .row_iter()
                .map(|r| r.iter().map(|c| u64::from(c.value())).collect())
                .collect();
            assert_eq!(ours, naive, "p={p} s={s} d={d}");
            let basis = naive_row_basis(p, naive);
            assert_eq!(m.rank(), basis.len());
            if p.pow(basis.len() as u32) <= 200_000 {
                assert_eq!(
                    min_distance_oracle(&m, DEFAULT_CODEWORD_CAP).unwrap(),
                    naive_min_distance(p, &basis),
                    "p={p} s={s} d={d}"
                );
            }
        }
    }
}

#[test]
fn code_examples() {
    let caps = Caps::default();
    let t = projective_torus(&field(5, 1), 2, DEFAULT_POINT_CAP).unwrap();
    assert_eq!(dimension(&t, 1, &caps).unwrap(), 2);
    let m = evaluation_matrix(&t, 1, &caps).unwrap();
    assert_eq!(min_distance_oracle(&m, DEFAULT_CODEWORD_CAP).unwrap(), 3);

    let t = projective_torus(&field(2, 2), 3, DEFAULT_POINT_CAP).unwrap();
    let m = evaluation_matrix(&t, 1, &caps).unwrap();
    assert_eq!(min_distance_oracle(&m, DEFAULT_CODEWORD_CAP).unwrap(), 6);

    let p = code_params(&projective_torus(&field(3, 1), 3, DEFAULT_POINT_CAP).unwrap(), 1, &caps).unwrap();
    assert_eq!((p.n, p.k, p.delta), (4, 3, 2));
    let p = code_params(&projective_torus(&field(2, 2), 2, DEFAULT_POINT_CAP).unwrap(), 1, &caps).unwrap();
    assert_eq!((p.n, p.k, p.delta, p.mds), (3, 2, 2, true));
    let x = Clutter::complete_bipartite(2, 3).unwrap().toric_set(&field(3, 1), DEFAULT_POINT_CAP).unwrap();
    let p = code_params(&x, 0, &caps).unwrap();
    assert_eq!((p.n, p.k, p.delta), (8, 1, 8));
}

#[test]
fn bipartite_formula_matches_brute_force() {
    let caps = Caps::default();
    for ((p, m), (a, b)) in [((3, 1), (2, 2)), ((2, 2), (2, 2)), ((3, 1), (2, 3)), ((3, 1), (1, 3)), ((5, 1), (1, 2))] {
        let f = field(p, m);
        let x = Clutter::complete_bipartite(a, b).unwrap().toric_set(&f, DEFAULT_POINT_CAP).unwrap();
        for d in 1..=3 {
            let oracle = code_params(&x, d, &caps).unwrap();
            let formula = bipartite_params(f.q(), a, b, d).unwrap();
            assert_eq!((oracle.n, oracle.k, oracle.delta), (formula.n, formula.k, formula.delta), "K_{a},{b} q={} d={d}", f.q());
        }
    }
}

#[test]
fn kernel_vanishes_and_has_the_right_size() {
    let caps = Caps::default();
    for (p, m, s) in [(3, 1, 2), (3, 1, 3), (2, 2, 3), (5, 1, 2)] {
        let t = projective_torus(&field(p, m), s, DEFAULT_POINT_CAP).unwrap();
        for d in 0..=5 {
            let basis = vanishing_forms_basis(&t, d, &caps).unwrap();
            assert_eq!(basis.len() + dimension(&t, d, &caps).unwrap(), monomials(s, d).len());
            for g in &basis {
                assert_eq!(count_zeros_projective(g, &t).unwrap(), t.len() as u64);
            }
        }
    }
}

#[test]
fn zero_count_examples() {
    let f3 = field(3, 1);
    let g = SparsePolynomial::parse(&f3, "t1 + 2*t2", 2).unwrap();
    assert_eq!(count_zeros_affine_torus(&g, &f3).unwrap(), 2);
    let t = projective_torus(&f3, 3, DEFAULT_POINT_CAP).unwrap();
    let g = SparsePolynomial::parse(&f3, "t1 + 2*t2", 3).unwrap();
    assert_eq!(count_zeros_projective(&g, &t).unwrap(), 2);
    let f4 = field(2, 2);
    let g = SparsePolynomial::parse(&f4, "t1 + 1", 2).unwrap();
    assert_eq!(count_zeros_affine_torus(&g, &f4).unwrap(), 3);
}

#[test]
fn hilbert_examples() {
    let caps = Caps::default();
    let p = hilbert_profile(&projective_torus(&field(2, 2), 2, DEFAULT_POINT_CAP).unwrap(), 2, &caps).unwrap();
    assert_eq!(p.values, vec![1, 2, 3]);
    let p = hilbert_profile(&projective_torus(&field(3, 1), 3, DEFAULT_POINT_CAP).unwrap(), 3, &caps).unwrap();
    assert_eq!((p.values, p.regularity), (vec![1, 3, 4], 2));
    let x = Clutter::complete_bipartite(2, 2).unwrap().toric_set(&field(3, 1), DEFAULT_POINT_CAP).unwrap();
    let r = check_regularity_bound(&x, &caps).unwrap();
    assert!(!r.ci && r.regularity <= 2);
}

#[test]
fn bound_examples() {
    // d = 1, q = 3, s = 2: the largest torus zero count over all degree-one
    // polynomials is 2 (attained by t1 - t2), and the refined bound is 2.
    let f3 = field(3, 1);
    let mut best = 0;
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                if a == 0 && b == 0 {
                    continue;
                }
                let g = SparsePolynomial::from_terms(
                    &f3,
                    2,
                    [(vec![1, 0], FieldElement::new(a)), (vec![0, 1], FieldElement::new(b)), (vec![0, 0], FieldElement::new(c))],
                )
                .unwrap();
                best = best.max(count_zeros_affine_torus(&g, &f3).unwrap());
            }
        }
    }
    let r = zero_bounds(1, 3, 2).unwrap();
    assert_eq!((best, r.refined, r.torus, r.schmidt), (2, Some(2), 2, 3));
}

#[test]
fn extremal_examples() {
    let caps = Caps::default();
    let f4 = field(2, 2);
    let t = projective_torus(&f4, 3, DEFAULT_POINT_CAP).unwrap();
    assert_eq!(count_zeros_projective(&extremal_polynomial(&f4, 3, 1).unwrap(), &t).unwrap(), 3);
    assert_eq!(count_zeros_projective(&extremal_polynomial(&f4, 3, 3).unwrap(), &t).unwrap(), 7);
    let r = max_zero_consistency(&field(3, 1), 3, 1, &caps).unwrap();
    assert_eq!((r.extremal_zeros, r.oracle, r.closed), (2, 2, 2));
    let r = max_zero_consistency(&f4, 3, 2, &caps).unwrap();
    assert_eq!((r.extremal_zeros, r.oracle, r.closed), (6, 6, 6));
    let r = max_zero_consistency(&field(5, 1), 2, 2, &caps).unwrap();
    assert_eq!((r.extremal_zeros, r.oracle, r.closed), (2, 2, 2));
    let r = max_zero_consistency(&field(3, 1), 4, 1, &caps).unwrap();
    assert_eq!(r.closed, 4);
}
