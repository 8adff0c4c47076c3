//! Dense exact linear algebra over a [`Field`].
//!
//! Matrices here are small (at most a few hundred rows), so a dense layout is
//! used throughout. Ranks over the rationals are computed fraction-free
//! (Bareiss elimination on an integer matrix); everything else uses
//! Gauss-Jordan elimination with exact field arithmetic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    /// Builds a matrix whose columns are the given sparse vectors.
    pub fn from_columns<'a>(
        field: Field,
        rows: usize,
        columns: impl IntoIterator<Item = &'a crate::ainfty::Vector>,
    ) -> Self {
        let cols: Vec<_> = columns.into_iter().collect();
        let mut m = Matrix::zeros(field, rows, cols.len());
        for (j, v) in cols.iter().enumerate() {
            for (i, c) in v.iter() {
                m.set(i, j, c.clone());
            }
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hconcat(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut out = Matrix::zeros(self.field, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    /// Columns selected by index, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                out.set(i, jj, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        match self.field {
            Field::Rationals => self.rank_fraction_free(),
            Field::Prime(_) => self.row_reduce().pivots.len(),
        }
    }

    /// Reduced row echelon form.
    pub fn row_reduce(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&i| !m.get(i, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.get(row, col).inverse().expect("nonzero pivot");
            for j in col..m.cols {
                let v = m.get(row, j) * &inv;
                m.set(row, j, v);
            }
            for i in 0..m.rows {
                if i == row {
                    continue;
                }
                let factor = m.get(i, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in col..m.cols {
                    let v = m.get(i, j) - &(&factor * m.get(row, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon { reduced: m, pivots }
    }

    /// A basis of the null space, one column vector per free variable.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let ech = self.row_reduce();
        let free: Vec<usize> = (0..self.cols).filter(|c| !ech.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![self.field.zero(); self.cols];
                v[f] = self.field.one();
                for (r, &pc) in ech.pivots.iter().enumerate() {
                    v[pc] = -ech.reduced.get(r, f);
                }
                v
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Bareiss elimination after clearing denominators row by row. Every
    /// intermediate entry stays an integer, so no fractions are formed.
    fn rank_fraction_free(&self) -> usize {
        let mut m: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| {
                let row: Vec<&Scalar> = (0..self.cols).map(|j| self.get(i, j)).collect();
                integer_row(&row)
            })
            .collect();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        let mut prev = BigInt::one();
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let Some(p) = (rank..rows).find(|&i| !m[i][col].is_zero()) else {
                continue;
            };
            m.swap(rank, p);
            let pivot = m[rank][col].clone();
            let (top, below) = m.split_at_mut(rank + 1);
            let pivot_row = &top[rank];
            for row in below {
                let lead = row[col].clone();
                for (x, r) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    let v = &pivot * &*x - &lead * r;
                    *x = v.div_floor(&prev);
                }
            }
            prev = pivot;
            rank += 1;
        }
        rank
    }
}

fn integer_row(row: &[&Scalar]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for s in row {
        if let Scalar::Rat(r) = s {
            lcm = lcm.lcm(r.denom());
        }
    }
    row.iter()
        .map(|s| match s {
            Scalar::Rat(r) => r.numer() * (&lcm / r.denom()),
            Scalar::Mod { value, .. } => BigInt::from(*value),
        })
        .collect()
}

pub struct Echelon {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(field: Field, rows: &[&[i64]]) -> Matrix {
        let mut m = Matrix::zeros(field, rows.len(), rows[0].len());
        for (i, r) in rows.iter().enumerate() {
            for (j, v) in r.iter().enumerate() {
                m.set(i, j, field.from_i64(*v));
            }
        }
        m
    }

    #[test]
    fn rank_depends_on_characteristic() {
        let rows: &[&[i64]] = &[&[1, 1], &[1, -1]];
        assert_eq!(mat(Field::Rationals, rows).rank(), 2);
        assert_eq!(mat(Field::F2, rows).rank(), 1);
    }

    #[test]
    fn fraction_free_rank_matches_gauss_jordan() {
        let rows: &[&[i64]] = &[&[2, 4, 6, 8], &[1, 3, 5, 7], &[3, 7, 11, 15], &[0, 0, 1, 9]];
        let m = mat(Field::Rationals, rows);
        assert_eq!(m.rank(), m.row_reduce().pivots.len());
        assert_eq!(m.rank(), 3);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let m = mat(Field::Rationals, &[&[1, 2, 3], &[2, 4, 6]]);
        let ker = m.kernel();
        assert_eq!(ker.len(), 2);
        for v in ker {
            for i in 0..m.rows() {
                let mut s = Field::Rationals.zero();
                for (j, x) in v.iter().enumerate() {
                    s += &(m.get(i, j) * x);
                }
                assert!(s.is_zero());
            }
        }
    }
}
