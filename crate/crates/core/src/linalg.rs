//! Dense matrices over GF(q): row echelon form, rank and null space.

use crate::galois::{FieldElement, FiniteField};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![FieldElement::ZERO; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<FieldElement>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[FieldElement]> + '_ {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self, field: &FiniteField) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..self.cols {
            if lead == self.rows {
                break;
            }
            let Some(p) = (lead..self.rows).find(|&r| !self.get(r, c).is_zero()) else {
                continue;
            };
            self.swap_rows(p, lead);
            let inv = field.inv(self.get(lead, c)).expect("pivot is nonzero");
            for x in &mut self.data[lead * self.cols..(lead + 1) * self.cols] {
                *x = field.mul(*x, inv);
            }
            for r in 0..self.rows {
                if r == lead {
                    continue;
                }
                let factor = self.get(r, c);
                if factor.is_zero() {
                    continue;
                }
                let neg = field.neg(factor);
                for k in c..self.cols {
                    let v = field.add(self.get(r, k), field.mul(neg, self.get(lead, k)));
                    self.set(r, k, v);
                }
            }
            pivots.push(c);
            lead += 1;
        }
        pivots
    }

    pub fn rank(&self, field: &FiniteField) -> usize {
        self.clone().rref(field).len()
    }

    /// The nonzero rows of the reduced row echelon form: a basis of the row
    /// space.
    pub fn row_basis(&self, field: &FiniteField) -> Matrix {
        let mut m = self.clone();
        let rank = m.rref(field).len();
        m.data.truncate(rank * m.cols);
        m.rows = rank;
        m
    }

    /// Basis of `{x : self * x = 0}`, one vector per free column.
    pub fn null_space(&self, field: &FiniteField) -> Vec<Vec<FieldElement>> {
        let mut m = self.clone();
        let pivots = m.rref(field);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![FieldElement::ZERO; self.cols];
                v[free] = FieldElement::ONE;
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = field.neg(m.get(r, free));
                }
                v
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn m(f: &FiniteField, rows: &[&[u32]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| f.element(v).unwrap()).collect())
                .collect(),
        )
    }

    #[test]
    fn small_ranks() {
        let f = FiniteField::new(5, 1).unwrap();
        assert_eq!(m(&f, &[&[1, 1, 1, 1], &[1, 2, 3, 4]]).rank(&f), 2);
        assert_eq!(m(&f, &[&[1, 2], &[2, 4]]).rank(&f), 1);
        assert_eq!(m(&f, &[&[0, 0], &[0, 0]]).rank(&f), 0);
        let f3 = FiniteField::new(3, 1).unwrap();
        // rank over GF(3) differs from rank over Q
        assert_eq!(m(&f3, &[&[1, 1], &[1, 4 % 3]]).rank(&f3), 1);
    }

    #[test]
    fn null_space_vectors_are_annihilated() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (p, mdeg) in [(2, 1), (3, 1), (2, 2), (5, 1), (3, 2)] {
            let f = FiniteField::new(p, mdeg).unwrap();
            for _ in 0..20 {
                let rows = rng.gen_range(1..6);
                let cols = rng.gen_range(1..7);
                let a = Matrix::from_rows(
                    (0..rows)
                        .map(|_| {
                            (0..cols)
                                .map(|_| FieldElement::new(rng.gen_range(0..f.q())))
                                .collect()
                        })
                        .collect(),
                );
                let ns = a.null_space(&f);
                assert_eq!(ns.len() + a.rank(&f), cols);
                for v in &ns {
                    for r in a.row_iter() {
                        let dot = r
                            .iter()
                            .zip(v)
                            .fold(FieldElement::ZERO, |acc, (&x, &y)| f.add(acc, f.mul(x, y)));
                        assert!(dot.is_zero());
                    }
                }
                assert_eq!(Matrix::from_rows(ns.clone()).rank(&f), ns.len());
                assert_eq!(a.transpose().rank(&f), a.rank(&f));
            }
        }
    }
}
