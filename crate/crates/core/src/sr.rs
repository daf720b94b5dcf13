//! Generalized and modified m-Stieltjes–Rogers polynomials evaluated at a
//! concrete weight sequence, and the upper-triangular factor Λ with Ŝ = S·Λ.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::alpha::AlphaSequence;
use crate::error::Result;
use crate::exact::{RatMatrix, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SrKind {
    /// `S_{n,k}`: paths from `(0,0)` to `((m+1)n, (m+1)k)`.
    Generalized,
    /// `S^{(m;j)}_{n,k}`: paths from `(0,0)` to `((m+1)n+j, (m+1)k+j)`.
    TypeJ(usize),
    /// `Ŝ_{n,j}`: paths from `(0,0)` to `((m+1)n+j, j)`.
    Modified,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SrMatrix {
    pub m: usize,
    pub kind: SrKind,
    pub entries: RatMatrix,
}

/// Path-count table `g[x][h]` for all columns needed by an `N x N` truncation.
#[derive(Clone, Debug)]
pub struct SrTables {
    m: usize,
    size: usize,
    columns: Vec<Vec<Rational>>,
}

/// Runs the column-by-column recursion `g'[h] = g[h-1] + α_{h+m} g[h+m]`.
///
/// Heights are capped at `(m+1)N + m`; no path to an endpoint read by the
/// views below climbs that high.
pub fn sr_dp(m: usize, alphas: &AlphaSequence, size: usize) -> Result<SrTables> {
    assert!(size >= 1 && m >= 1);
    let last_col = (m + 1) * (size - 1) + (size - 1).max(m);
    let height_cap = (m + 1) * size + m;
    let weights: Vec<Rational> = (0..=height_cap + m).map(|j| alphas.try_get(j)).collect::<Result<_>>()?;

    let mut columns = Vec::with_capacity(last_col + 1);
    let mut current = vec![Rational::zero(); height_cap + 1];
    current[0] = Rational::one();
    columns.push(current.clone());
    for _ in 0..last_col {
        let next: Vec<Rational> = (0..=height_cap)
            .map(|h| {
                let mut v = if h > 0 { current[h - 1].clone() } else { Rational::zero() };
                if h + m <= height_cap {
                    let w = &weights[h + m];
                    if !w.is_zero() && !current[h + m].is_zero() {
                        v += w * &current[h + m];
                    }
                }
                v
            })
            .collect();
        columns.push(next.clone());
        current = next;
    }
    Ok(SrTables { m, size, columns })
}

impl SrTables {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn last_column(&self) -> usize {
        self.columns.len() - 1
    }

    /// Weighted path count from `(0,0)` to `(x,h)`; zero beyond the table.
    pub fn paths_to(&self, x: usize, h: usize) -> Rational {
        self.columns
            .get(x)
            .and_then(|col| col.get(h))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn generalized(&self) -> SrMatrix {
        self.type_j(0).with_kind(SrKind::Generalized)
    }

    pub fn type_j(&self, j: usize) -> SrMatrix {
        let step = self.m + 1;
        assert!(step * (self.size - 1) + j <= self.last_column(), "type {j} exceeds the table");
        let entries = RatMatrix::from_fn(self.size, self.size, |n, k| {
            if k > n {
                Rational::zero()
            } else {
                self.paths_to(step * n + j, step * k + j)
            }
        });
        SrMatrix { m: self.m, kind: SrKind::TypeJ(j), entries }
    }

    pub fn modified(&self) -> SrMatrix {
        let step = self.m + 1;
        let entries = RatMatrix::from_fn(self.size, self.size, |n, j| self.paths_to(step * n + j, j));
        SrMatrix { m: self.m, kind: SrKind::Modified, entries }
    }
}

impl SrMatrix {
    fn with_kind(mut self, kind: SrKind) -> Self {
        self.kind = kind;
        self
    }
}

/// Upper-triangular Λ from the nested sum
/// `λ_{i,j} = Σ_{j ≥ ℓ_1 ≥ … ≥ ℓ_i ≥ i} ∏_k α_{km+ℓ_k}`, with `λ_{0,j} = 1`.
pub fn lambda_matrix(m: usize, alphas: &AlphaSequence, size: usize) -> Result<RatMatrix> {
    let mut out = RatMatrix::zeros(size, size);
    for j in 0..size {
        out.set(0, j, Rational::one());
        for i in 1..=j {
            out.set(i, j, nested_sum(m, alphas, i, j)?);
        }
    }
    Ok(out)
}

fn nested_sum(m: usize, alphas: &AlphaSequence, depth: usize, upper: usize) -> Result<Rational> {
    // partial[l - depth] = sum over chains ℓ_1 ≥ … ≥ ℓ_k = l of the weight so far.
    let width = upper - depth + 1;
    let mut partial: Vec<Rational> = (depth..=upper).map(|l| alphas.try_get(m + l)).collect::<Result<_>>()?;
    for k in 2..=depth {
        let mut tail = Rational::zero();
        let mut next = vec![Rational::zero(); width];
        for idx in (0..width).rev() {
            tail += &partial[idx];
            next[idx] = alphas.try_get(k * m + depth + idx)? * &tail;
        }
        partial = next;
    }
    Ok(partial.into_iter().fold(Rational::zero(), |acc, v| acc + v))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorizationReport {
    pub holds: bool,
    #[serde(serialize_with = "crate::serial::rational")]
    pub max_discrepancy: Rational,
    pub first_mismatch: Option<(usize, usize)>,
}

pub fn compare_matrices(expected: &RatMatrix, actual: &RatMatrix) -> FactorizationReport {
    let first_mismatch = (0..expected.rows())
        .flat_map(|i| (0..expected.cols()).map(move |j| (i, j)))
        .find(|&(i, j)| expected.get(i, j) != actual.get(i, j));
    FactorizationReport {
        holds: first_mismatch.is_none(),
        max_discrepancy: expected.max_abs_diff(actual),
        first_mismatch,
    }
}

/// Checks `Ŝ = S·Λ` on the `N x N` truncation.
pub fn verify_factorization(m: usize, alphas: &AlphaSequence, size: usize) -> Result<FactorizationReport> {
    let tables = sr_dp(m, alphas, size)?;
    let lambda = lambda_matrix(m, alphas, size)?;
    Ok(check_factorization(&tables, &lambda))
}

pub fn check_factorization(tables: &SrTables, lambda: &RatMatrix) -> FactorizationReport {
    let product = &tables.generalized().entries * lambda;
    compare_matrices(&tables.modified().entries, &product)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, ratio};

    fn ones(m: usize) -> AlphaSequence {
        AlphaSequence::constant(m, int(1))
    }

    fn varied(m: usize) -> AlphaSequence {
        AlphaSequence::from_fn(m, |j| Ok(ratio(2 * j as i64 + 1, j as i64 + 3)))
    }

    #[test]
    fn catalan_column() {
        let t = sr_dp(1, &ones(1), 8).unwrap();
        let s = t.generalized().entries;
        let col: Vec<Rational> = (0..8).map(|n| s.get(n, 0).clone()).collect();
        let expected: Vec<Rational> = [1, 1, 2, 5, 14, 42, 132, 429].iter().map(|&v| int(v)).collect();
        assert_eq!(col, expected);
    }

    #[test]
    fn unit_diagonal_and_ones_row() {
        for m in 1..=3 {
            let t = sr_dp(m, &varied(m), 6).unwrap();
            let s = t.generalized().entries;
            let hat = t.modified().entries;
            for n in 0..6 {
                assert_eq!(s.get(n, n), &int(1));
                assert_eq!(hat.get(0, n), &int(1));
                assert_eq!(t.type_j(1).entries.get(n, n), &int(1));
            }
        }
    }

    #[test]
    fn lambda_structure() {
        let m = 2;
        let a = varied(m);
        let l = lambda_matrix(m, &a, 5).unwrap();
        for i in 0..5 {
            let diag = (1..=i).fold(int(1), |acc, k| acc * a.get(k * m + i));
            assert_eq!(l.get(i, i), &diag);
            for j in 0..i {
                assert_eq!(l.get(i, j), &int(0));
            }
        }
        let l1 = lambda_matrix(1, &varied(1), 3).unwrap();
        let a1 = varied(1);
        assert_eq!(l1.get(1, 2), &(a1.get(2) + a1.get(3)));
    }

    #[test]
    fn factorization_and_soundness() {
        assert!(verify_factorization(1, &ones(1), 6).unwrap().holds);
        assert!(verify_factorization(3, &varied(3), 6).unwrap().holds);
        let t = sr_dp(2, &varied(2), 5).unwrap();
        let mut l = lambda_matrix(2, &varied(2), 5).unwrap();
        l.set(1, 3, l.get(1, 3) + int(1));
        let report = check_factorization(&t, &l);
        assert!(!report.holds);
        assert_eq!(report.first_mismatch, Some((1, 3)));
    }
}
