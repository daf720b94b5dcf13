//! Exact total-positivity and oscillation tests for finite square matrices.

use itertools::Itertools;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{RatMatrix, Rational};

/// Largest size accepted by the brute-force minor enumeration.
pub const BRUTE_FORCE_LIMIT: usize = 12;

/// A minor `det M[rows, cols]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Minor {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    #[serde(serialize_with = "crate::serial::rational")]
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum TpVerdict {
    Tp,
    NotTp { witness: Minor },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TpMethod {
    Minors,
    Neville,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum OscillationFailure {
    NotTotallyPositive { witness: Minor },
    Singular,
    Superdiagonal { index: usize },
    Subdiagonal { index: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum OscillationVerdict {
    Oscillation,
    Fails { failure: OscillationFailure },
}

impl OscillationVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, Self::Oscillation)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TpReport {
    pub id: String,
    pub size: usize,
    /// Largest minor order covered by the verdict.
    pub max_order: usize,
    pub method: TpMethod,
    pub verdict: TpVerdict,
    pub oscillation: Option<OscillationVerdict>,
}

impl TpReport {
    pub fn is_tp(&self) -> bool {
        self.verdict == TpVerdict::Tp
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }
}

/// First negative minor of order `≤ max_order`, ordered by order, then rows,
/// then columns lexicographically.
fn first_negative_minor(m: &RatMatrix, max_order: usize) -> Option<Minor> {
    let n = m.rows();
    for order in 1..=max_order.min(n) {
        let pairs: Vec<(Vec<usize>, Vec<usize>)> = (0..n)
            .combinations(order)
            .flat_map(|rows| (0..n).combinations(order).map(move |cols| (rows.clone(), cols)))
            .collect();
        let hit = pairs.into_par_iter().find_map_first(|(rows, cols)| {
            let value = m.minor(&rows, &cols);
            value.is_negative().then_some(Minor { rows, cols, value })
        });
        if hit.is_some() {
            return hit;
        }
    }
    None
}

fn require_square(m: &RatMatrix) {
    assert!(m.is_square(), "total positivity is tested on square matrices");
}

/// All minors of order `≤ max_order` computed exactly.
pub fn is_totally_positive(m: &RatMatrix, max_order: usize) -> Result<TpReport> {
    require_square(m);
    let size = m.rows();
    if size > BRUTE_FORCE_LIMIT {
        return Err(Error::SizeExceeded { size, limit: BRUTE_FORCE_LIMIT });
    }
    let max_order = max_order.min(size);
    let verdict = match first_negative_minor(m, max_order) {
        Some(witness) => TpVerdict::NotTp { witness },
        None => TpVerdict::Tp,
    };
    Ok(TpReport { id: String::new(), size, max_order, method: TpMethod::Minors, verdict, oscillation: None })
}

/// Neville elimination without row exchanges: nonnegative pivots, positive
/// diagonal pivots, and a zero pivot only above zero pivots.
fn neville_passes(m: &RatMatrix) -> bool {
    let n = m.rows();
    let mut work = m.to_rows();
    for k in 0..n {
        if work[k][k].is_zero() {
            return false;
        }
        for i in k..n {
            if work[i][k].is_negative() {
                return false;
            }
            if i > k && work[i - 1][k].is_zero() && !work[i][k].is_zero() {
                return false;
            }
        }
        for i in (k + 1..n).rev() {
            if work[i][k].is_zero() {
                continue;
            }
            let factor = &work[i][k] / &work[i - 1][k];
            let (upper, lower) = work.split_at_mut(i);
            for (x, y) in lower[0][k..].iter_mut().zip(&upper[i - 1][k..]) {
                *x -= &factor * y;
            }
        }
    }
    true
}

/// Total positivity of every order by Neville elimination of `M` and `Mᵀ`.
///
/// The criterion covers nonsingular matrices; singular ones go through the
/// minor enumeration regardless of size. When elimination fails the witness is
/// the first negative minor in the same order as the brute-force test.
pub fn is_totally_positive_neville(m: &RatMatrix) -> TpReport {
    require_square(m);
    let size = m.rows();
    let report = |verdict| TpReport { id: String::new(), size, max_order: size, method: TpMethod::Neville, verdict, oscillation: None };
    let nonsingular = !m.det().is_zero();
    if nonsingular && neville_passes(m) && neville_passes(&m.transpose()) {
        return report(TpVerdict::Tp);
    }
    match first_negative_minor(m, size) {
        Some(witness) => report(TpVerdict::NotTp { witness }),
        None => report(TpVerdict::Tp),
    }
}

/// Totally positive, nonsingular, with positive super- and subdiagonals.
pub fn is_oscillation(m: &RatMatrix) -> OscillationVerdict {
    require_square(m);
    let fails = |failure| OscillationVerdict::Fails { failure };
    if let TpVerdict::NotTp { witness } = is_totally_positive_neville(m).verdict {
        return fails(OscillationFailure::NotTotallyPositive { witness });
    }
    if m.det().is_zero() {
        return fails(OscillationFailure::Singular);
    }
    let n = m.rows();
    if let Some(index) = (0..n.saturating_sub(1)).find(|&i| !m.get(i, i + 1).is_positive()) {
        return fails(OscillationFailure::Superdiagonal { index });
    }
    if let Some(index) = (0..n.saturating_sub(1)).find(|&i| !m.get(i + 1, i).is_positive()) {
        return fails(OscillationFailure::Subdiagonal { index });
    }
    OscillationVerdict::Oscillation
}

/// Neville verdict together with the oscillation verdict.
pub fn tp_report(m: &RatMatrix) -> TpReport {
    let mut report = is_totally_positive_neville(m);
    report.oscillation = Some(is_oscillation(m));
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alpha::AlphaSequence;
    use crate::exact::{int, ratio};
    use crate::production::production_closed_form;
    use crate::sr::sr_dp;

    fn ints(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
    }

    fn sample_alphas(m: usize) -> AlphaSequence {
        AlphaSequence::from_fn(m, |j| Ok(ratio((j % 5) as i64 + 1, (j % 3) as i64 + 2)))
    }

    #[test]
    fn identity_is_tp() {
        let id = RatMatrix::identity(4);
        assert!(is_totally_positive(&id, 4).unwrap().is_tp());
        assert!(is_totally_positive_neville(&id).is_tp());
    }

    #[test]
    fn two_by_two_witness() {
        let m = ints(&[&[1, 2], &[3, 1]]);
        let expected = TpVerdict::NotTp { witness: Minor { rows: vec![0, 1], cols: vec![0, 1], value: int(-5) } };
        assert_eq!(is_totally_positive(&m, 2).unwrap().verdict, expected);
        assert_eq!(is_totally_positive_neville(&m).verdict, expected);
    }

    #[test]
    fn size_cap() {
        let big = RatMatrix::identity(13);
        assert_eq!(is_totally_positive(&big, 2), Err(Error::SizeExceeded { size: 13, limit: 12 }));
        assert!(is_totally_positive_neville(&big).is_tp());
    }

    #[test]
    fn modified_sr_is_tp() {
        let tables = sr_dp(2, &sample_alphas(2), 8).unwrap();
        let s_hat = tables.modified().entries;
        assert!(is_totally_positive(&s_hat, 5).unwrap().is_tp());
        assert!(is_totally_positive_neville(&s_hat).is_tp());
    }

    #[test]
    fn production_truncations() {
        let h = production_closed_form(2, &sample_alphas(2), 20).unwrap().to_dense();
        assert!(is_totally_positive_neville(&h).is_tp());
        for n in 1..=12 {
            assert!(is_oscillation(&h.truncate(n, n)).holds(), "n={n}");
        }
    }

    #[test]
    fn oscillation_failures() {
        let singular = ints(&[&[1, 1], &[1, 1]]);
        assert_eq!(is_oscillation(&singular), OscillationVerdict::Fails { failure: OscillationFailure::Singular });
        let diagonal = ints(&[&[2, 0], &[0, 3]]);
        assert_eq!(is_oscillation(&diagonal), OscillationVerdict::Fails { failure: OscillationFailure::Superdiagonal { index: 0 } });
        let lower = ints(&[&[2, 1], &[0, 3]]);
        assert_eq!(is_oscillation(&lower), OscillationVerdict::Fails { failure: OscillationFailure::Subdiagonal { index: 0 } });
    }

    #[test]
    fn singular_tp_with_zero_pattern() {
        let m = ints(&[&[1, 1, 0], &[1, 1, 0], &[0, 1, 1]]);
        assert!(is_totally_positive(&m, 3).unwrap().is_tp());
        assert!(is_totally_positive_neville(&m).is_tp());
    }

    #[test]
    fn negative_entry_found_first() {
        let m = ints(&[&[1, 0, 0], &[0, 1, -1], &[0, 0, 1]]);
        let report = is_totally_positive_neville(&m);
        assert_eq!(report.verdict, TpVerdict::NotTp { witness: Minor { rows: vec![1], cols: vec![2], value: int(-1) } });
    }
}
