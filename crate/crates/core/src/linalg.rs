//! Exact dense linear algebra over the rationals.

use num_traits::{One, Zero};

use crate::Rational;

/// Dense matrix in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

/// Outcome of solving `M x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    /// A particular solution and a basis of the kernel of `M`.
    Solved { particular: Vec<Rational>, kernel: Vec<Vec<Rational>> },
    /// A vector `y` with `yᵀM = 0` and `yᵀb ≠ 0`.
    Infeasible { certificate: Vec<Rational> },
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows).map(|i| self.row(i).iter().zip(x).fold(Rational::zero(), |acc, (a, b)| acc + a * b)).collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[(r, col)].is_zero())?;
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let p = a[(col, col)].clone();
            a.scale_row(col, &p);
            inv.scale_row(col, &p);
            for r in 0..n {
                if r != col && !a[(r, col)].is_zero() {
                    let factor = a[(r, col)].clone();
                    a.sub_row(r, col, &factor);
                    inv.sub_row(r, col, &factor);
                }
            }
        }
        Some(inv)
    }

    pub fn rank(&self) -> usize {
        let (_, pivots) = self.rref();
        pivots.len()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..a.cols {
            if row == a.rows {
                break;
            }
            let Some(p) = (row..a.rows).find(|&r| !a[(r, col)].is_zero()) else {
                continue;
            };
            a.swap_rows(row, p);
            let pv = a[(row, col)].clone();
            a.scale_row(row, &pv);
            for r in 0..a.rows {
                if r != row && !a[(r, col)].is_zero() {
                    let factor = a[(r, col)].clone();
                    a.sub_row(r, row, &factor);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (a, pivots)
    }

    /// Solves `self · x = b` exactly.
    pub fn solve(&self, b: &[Rational]) -> Solution {
        assert_eq!(b.len(), self.rows);
        let n = self.cols;
        // augmented [M | b | I] so the row operations are tracked for a certificate
        let width = n + 1 + self.rows;
        let mut aug = Matrix::zeros(self.rows, width);
        for i in 0..self.rows {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n)] = b[i].clone();
            aug[(i, n + 1 + i)] = Rational::one();
        }
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..n {
            if row == aug.rows {
                break;
            }
            let Some(p) = (row..aug.rows).find(|&r| !aug[(r, col)].is_zero()) else {
                continue;
            };
            aug.swap_rows(row, p);
            let pv = aug[(row, col)].clone();
            aug.scale_row(row, &pv);
            for r in 0..aug.rows {
                if r != row && !aug[(r, col)].is_zero() {
                    let factor = aug[(r, col)].clone();
                    aug.sub_row(r, row, &factor);
                }
            }
            pivots.push(col);
            row += 1;
        }
        for r in row..aug.rows {
            if !aug[(r, n)].is_zero() {
                let certificate = aug.row(r)[n + 1..].to_vec();
                return Solution::Infeasible { certificate };
            }
        }
        let mut particular = vec![Rational::zero(); n];
        for (r, &c) in pivots.iter().enumerate() {
            particular[c] = aug[(r, n)].clone();
        }
        let mut kernel = Vec::new();
        for free in (0..n).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Rational::zero(); n];
            v[free] = Rational::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -aug[(r, free)].clone();
            }
            kernel.push(v);
        }
        Solution::Solved { particular, kernel }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, divisor: &Rational) {
        for j in 0..self.cols {
            let v = &self.data[r * self.cols + j] / divisor;
            self.data[r * self.cols + j] = v;
        }
    }

    /// row[target] -= factor * row[source]
    fn sub_row(&mut self, target: usize, source: usize, factor: &Rational) {
        for j in 0..self.cols {
            let v = factor * &self.data[source * self.cols + j];
            self.data[target * self.cols + j] -= v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x, 1)).collect()).collect())
    }

    #[test]
    fn unique_solution() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let Solution::Solved { particular, kernel } = a.solve(&[rat(3, 1), rat(5, 1)]) else {
            panic!("expected a solution");
        };
        assert_eq!(particular, vec![rat(4, 5), rat(7, 5)]);
        assert!(kernel.is_empty());
    }

    #[test]
    fn kernel_and_certificate() {
        let a = m(&[&[1, 1], &[2, 2]]);
        match a.solve(&[rat(1, 1), rat(2, 1)]) {
            Solution::Solved { kernel, .. } => {
                assert_eq!(kernel.len(), 1);
                assert!(a.mul_vec(&kernel[0]).iter().all(Zero::is_zero));
            }
            other => panic!("{other:?}"),
        }
        let b = [rat(1, 1), rat(3, 1)];
        let Solution::Infeasible { certificate } = a.solve(&b) else {
            panic!("expected infeasible");
        };
        let ya = a.transpose().mul_vec(&certificate);
        assert!(ya.iter().all(Zero::is_zero));
        let yb: Rational = certificate.iter().zip(&b).map(|(y, b)| y * b).sum();
        assert!(!yb.is_zero());
    }

    #[test]
    fn empty_system() {
        let a = Matrix::zeros(0, 2);
        assert!(matches!(a.solve(&[]), Solution::Solved { ref kernel, .. } if kernel.len() == 2));
    }

    proptest! {
        #[test]
        fn inverse_is_two_sided(v in prop::collection::vec(-4i64..5, 9)) {
            let a = Matrix::from_rows(v.chunks(3).map(|r| r.iter().map(|&x| rat(x, 1)).collect()).collect());
            if let Some(inv) = a.inverse() {
                prop_assert_eq!(a.mul(&inv), Matrix::identity(3));
                prop_assert_eq!(inv.mul(&a), Matrix::identity(3));
                prop_assert_eq!(a.rank(), 3);
            } else {
                prop_assert!(a.rank() < 3);
            }
        }
    }
}
