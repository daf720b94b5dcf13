use std::ops::Mul;

use num_traits::{One, Zero};
use serde::Serialize;

use super::Rational;

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let data = (0..rows * cols).map(|idx| f(idx / cols, idx % cols)).collect();
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix rows");
        let n = rows.len();
        Self { rows: n, cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Leading `rows x cols` block.
    pub fn truncate(&self, rows: usize, cols: usize) -> Self {
        assert!(rows <= self.rows && cols <= self.cols);
        Self::from_fn(rows, cols, |i, j| self.get(i, j).clone())
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// Exact determinant by Gaussian elimination with row swaps.
    pub fn det(&self) -> Rational {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return Rational::zero();
            };
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col].clone();
            det *= &p;
            for r in col + 1..n {
                if a[r * n + col].is_zero() {
                    continue;
                }
                let factor = &a[r * n + col] / &p;
                for j in col..n {
                    let delta = &factor * &a[col * n + j];
                    a[r * n + j] -= delta;
                }
            }
        }
        det
    }

    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Rational {
        self.submatrix(rows, cols).det()
    }

    /// Largest entrywise difference as a rational (zero when equal).
    pub fn max_abs_diff(&self, other: &RatMatrix) -> Rational {
        use num_traits::Signed;
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(Rational::zero(), |acc, d| if d > acc { d } else { acc })
    }
}

impl Mul for &RatMatrix {
    type Output = RatMatrix;
    fn mul(self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = RatMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl Serialize for RatMatrix {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        crate::serial::rational_rows(&self.to_rows(), ser)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn m(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
    }

    #[test]
    fn determinants() {
        assert_eq!(m(&[&[1, 2], &[3, 1]]).det(), int(-5));
        assert_eq!(m(&[&[0, 1], &[1, 0]]).det(), int(-1));
        assert_eq!(m(&[&[1, 1], &[1, 1]]).det(), int(0));
        assert_eq!(RatMatrix::identity(4).det(), int(1));
    }

    #[test]
    fn product_and_transpose() {
        let a = m(&[&[1, 2], &[0, 1]]);
        let b = m(&[&[1, 0], &[3, 1]]);
        assert_eq!(&a * &b, m(&[&[7, 2], &[3, 1]]));
        assert_eq!(a.transpose(), m(&[&[1, 0], &[2, 1]]));
        assert_eq!(a.minor(&[0], &[1]), int(2));
    }
}
