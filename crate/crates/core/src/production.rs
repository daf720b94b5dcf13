//! The (m+2)-banded unit-lower-Hessenberg production matrix of the generalized
//! m-Stieltjes–Rogers polynomials, built two independent ways.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::alpha::AlphaSequence;
use crate::error::Result;
use crate::exact::{RatMatrix, Rational};

/// `N x N` truncation of a lower-Hessenberg matrix with unit superdiagonal and
/// `m` nonzero subdiagonals, stored as `diagonals[k][n] = h_{n+k,n}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BandedHessenberg {
    m: usize,
    size: usize,
    #[serde(serialize_with = "crate::serial::rational_rows")]
    diagonals: Vec<Vec<Rational>>,
}

impl BandedHessenberg {
    pub fn from_fn(m: usize, size: usize, mut entry: impl FnMut(usize, usize) -> Rational) -> Self {
        let diagonals = (0..=m)
            .map(|k| (0..size.saturating_sub(k)).map(|n| entry(n + k, n)).collect())
            .collect();
        Self { m, size, diagonals }
    }

    /// Reads the band of a dense matrix, or `None` if it has entries outside
    /// the band or a superdiagonal entry other than 1.
    pub fn from_dense(m: usize, dense: &RatMatrix) -> Option<Self> {
        let size = dense.rows();
        for i in 0..size {
            for j in 0..size {
                let v = dense.get(i, j);
                let ok = if j == i + 1 {
                    v.is_one()
                } else if j > i + 1 || i > j + m {
                    v.is_zero()
                } else {
                    true
                };
                if !ok {
                    return None;
                }
            }
        }
        Some(Self::from_fn(m, size, |i, j| dense.get(i, j).clone()))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// `h_{n+k,n}` for `0 ≤ k ≤ m`.
    pub fn band(&self, k: usize, n: usize) -> &Rational {
        &self.diagonals[k][n]
    }

    pub fn diagonal(&self, k: usize) -> &[Rational] {
        &self.diagonals[k]
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        assert!(i < self.size && j < self.size);
        if j == i + 1 {
            Rational::one()
        } else if j <= i && i - j <= self.m {
            self.diagonals[i - j][j].clone()
        } else {
            Rational::zero()
        }
    }

    pub fn truncate(&self, size: usize) -> Self {
        assert!(size <= self.size);
        Self::from_fn(self.m, size, |i, j| self.get(i, j))
    }

    pub fn to_dense(&self) -> RatMatrix {
        RatMatrix::from_fn(self.size, self.size, |i, j| self.get(i, j))
    }
}

/// Strictly decreasing `(k+1)`-tuples drawn from `0..=m`.
fn decreasing_tuples(m: usize, len: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, below: usize, len: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == len {
            out.push(prefix.clone());
            return;
        }
        for v in (0..below).rev() {
            prefix.push(v);
            extend(prefix, v, len, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), m + 1, len, &mut out);
    out
}

/// Entries `h_{n+k,n} = Σ_{m ≥ ℓ_0 > … > ℓ_k ≥ 0} ∏_j α_{(m+1)(n+j)+ℓ_j}`.
pub fn production_closed_form(m: usize, alphas: &AlphaSequence, size: usize) -> Result<BandedHessenberg> {
    let mut diagonals = Vec::with_capacity(m + 1);
    for k in 0..=m {
        let tuples = decreasing_tuples(m, k + 1);
        let mut diag = Vec::new();
        for n in 0..size.saturating_sub(k) {
            let mut entry = Rational::zero();
            for tuple in &tuples {
                let mut term = Rational::one();
                for (j, &l) in tuple.iter().enumerate() {
                    term *= alphas.try_get((m + 1) * (n + j) + l)?;
                    if term.is_zero() {
                        break;
                    }
                }
                entry += term;
            }
            diag.push(entry);
        }
        diagonals.push(diag);
    }
    Ok(BandedHessenberg { m, size, diagonals })
}

/// Product of `m` lower-bidiagonal factors and one upper-bidiagonal factor.
///
/// The factors are built at size `N + m + 1` and the product is truncated to
/// `N x N` afterwards, so no entry of the kept block loses a contribution.
pub fn production_bidiagonal(m: usize, alphas: &AlphaSequence, size: usize) -> Result<BandedHessenberg> {
    let big = size + m + 1;
    let step = m + 1;
    let mut product = RatMatrix::identity(big);
    for i in 0..m {
        let mut lower = RatMatrix::identity(big);
        for k in 0..big - 1 {
            lower.set(k + 1, k, alphas.try_get((k + 1) * step + i)?);
        }
        product = &product * &lower;
    }
    let mut upper = RatMatrix::zeros(big, big);
    for k in 0..big {
        upper.set(k, k, alphas.try_get(k * step + m)?);
        if k + 1 < big {
            upper.set(k, k + 1, Rational::one());
        }
    }
    product = &product * &upper;
    let block = product.truncate(size, size);
    Ok(BandedHessenberg::from_dense(m, &block).expect("bidiagonal product leaves the Hessenberg band"))
}

/// Matrix whose row `n` is row 0 of `Hⁿ`.
pub fn output_matrix(h: &BandedHessenberg, size: usize) -> RatMatrix {
    assert!(size <= h.size(), "output needs an {size}x{size} production block");
    let mut out = RatMatrix::zeros(size, size);
    let mut row = vec![Rational::zero(); size];
    row[0] = Rational::one();
    for n in 0..size {
        for (k, v) in row.iter().enumerate() {
            out.set(n, k, v.clone());
        }
        let next: Vec<Rational> = (0..size)
            .map(|k| {
                let lo = k.saturating_sub(1);
                let hi = (k + h.m()).min(size - 1);
                (lo..=hi).fold(Rational::zero(), |acc, i| {
                    if row[i].is_zero() {
                        acc
                    } else {
                        acc + &row[i] * h.get(i, k)
                    }
                })
            })
            .collect();
        row = next;
    }
    out
}
