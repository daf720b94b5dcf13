//! Zeros of the polynomials as eigenvalues of Hessenberg truncations: exact
//! characteristic polynomials, certified real-root isolation, interlacing,
//! and the large-degree asymptotic checks in [`asymptotics`].

pub mod asymptotics;

use std::cmp::Ordering;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{int, to_f64, Poly, RatMatrix, Rational};

/// Degrees up to which the Sturm sequence is used as a fallback isolator.
pub const STURM_LIMIT: usize = 48;

/// Refinement rounds allowed when ordering roots of two different sets.
const MAX_ORDERING_ROUNDS: usize = 400;

/// Positive integer multiple of a rational polynomial, for exact sign tests.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(poly: &Poly) -> Self {
        let mut coeffs = poly.primitive_integer();
        if poly.leading().is_negative() {
            coeffs.iter_mut().for_each(|c| *c = -&*c);
        }
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn to_poly(&self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| Rational::from_integer(c.clone())).collect())
    }

    /// Sign of `p(x)`, computed as the sign of `q^deg · p(x)` with integer Horner.
    pub fn sign_at(&self, x: &Rational) -> Ordering {
        let Some(last) = self.coeffs.last() else {
            return Ordering::Equal;
        };
        let (num, den) = (x.numer(), x.denom());
        let dyadic = (den & (den - BigInt::one())).is_zero();
        let shift = den.bits() as usize - 1;
        let mut acc = last.clone();
        let mut den_power = BigInt::one();
        for (k, c) in self.coeffs.iter().rev().skip(1).enumerate() {
            acc *= num;
            if dyadic {
                acc += c << (shift * (k + 1));
            } else {
                den_power *= den;
                acc += c * &den_power;
            }
        }
        acc.sign_ordering()
    }
}

trait SignOrdering {
    fn sign_ordering(&self) -> Ordering;
}

impl SignOrdering for BigInt {
    fn sign_ordering(&self) -> Ordering {
        self.cmp(&BigInt::zero())
    }
}

/// `det(xI - H)` for a lower Hessenberg `H`, by expansion along the last column.
pub fn charpoly_hessenberg(h: &RatMatrix) -> Poly {
    assert!(h.is_square());
    let n = h.rows();
    for i in 0..n {
        for j in i + 2..n {
            assert!(h.get(i, j).is_zero(), "matrix is not lower Hessenberg at ({i}, {j})");
        }
    }
    let mut polys = vec![Poly::constant(Rational::one())];
    for k in 0..n {
        let diagonal = Poly::new(vec![-h.get(k, k).clone(), Rational::one()]);
        let mut next = &diagonal * &polys[k];
        let mut chain = Rational::one();
        for i in (0..k).rev() {
            chain *= h.get(i, i + 1);
            if chain.is_zero() {
                break;
            }
            let entry = h.get(k, i);
            if !entry.is_zero() {
                next = &next - &polys[i].scale(&(entry * &chain));
            }
        }
        polys.push(next);
    }
    polys.pop().expect("nonempty")
}

/// Isolating intervals for the real roots of a squarefree polynomial.
///
/// Each interval `(lo, hi)` has `lo < hi`, contains exactly one root, and
/// neither endpoint is a root.
#[derive(Clone, Debug, Serialize)]
pub struct ZeroSet {
    pub n: usize,
    #[serde(serialize_with = "crate::serial::rational_pairs")]
    pub intervals: Vec<(Rational, Rational)>,
    pub midpoints: Vec<f64>,
    #[serde(skip)]
    poly: Arc<IntPoly>,
}

impl ZeroSet {
    fn build(poly: Arc<IntPoly>, mut intervals: Vec<(Rational, Rational)>) -> Self {
        intervals.sort_by(|x, y| x.0.cmp(&y.0));
        let mut set = Self { n: poly.degree(), intervals, midpoints: Vec::new(), poly };
        set.update_midpoints();
        set
    }

    fn update_midpoints(&mut self) {
        self.midpoints = self.intervals.iter().map(|(lo, hi)| to_f64(&((lo + hi) / int(2)))).collect();
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }

    /// Halves interval `i`, keeping the half that holds the root.
    pub fn bisect(&mut self, i: usize) {
        let (lo, hi) = self.intervals[i].clone();
        self.intervals[i] = bisect_once(&self.poly, &lo, &hi);
        let (lo, hi) = &self.intervals[i];
        self.midpoints[i] = to_f64(&((lo + hi) / int(2)));
    }

    /// Refines every interval to width at most `tol`.
    pub fn refine(&mut self, tol: &Rational) {
        let poly = Arc::clone(&self.poly);
        self.intervals.par_iter_mut().for_each(|iv| {
            while &iv.1 - &iv.0 > *tol {
                *iv = bisect_once(&poly, &iv.0, &iv.1);
            }
        });
        self.update_midpoints();
    }

    /// Exact comparison of root `i` with the point `x`.
    pub fn compare_root(&self, i: usize, x: &Rational) -> Ordering {
        let (lo, hi) = &self.intervals[i];
        if x <= lo {
            return Ordering::Greater;
        }
        if x >= hi {
            return Ordering::Less;
        }
        let at_x = self.poly.sign_at(x);
        if at_x == Ordering::Equal {
            return Ordering::Equal;
        }
        if at_x == self.poly.sign_at(lo) {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    /// Whether every root lies in the open interval `(lo, hi)`.
    pub fn all_within(&self, lo: &Rational, hi: &Rational) -> bool {
        (0..self.len()).all(|i| self.compare_root(i, lo) == Ordering::Greater && self.compare_root(i, hi) == Ordering::Less)
    }

    /// Whether the intervals are pairwise disjoint and increasing.
    pub fn is_ordered(&self) -> bool {
        self.intervals.windows(2).all(|w| w[0].1 <= w[1].0)
    }
}

fn sign_change(poly: &IntPoly, lo: &Rational, hi: &Rational) -> bool {
    let (a, b) = (poly.sign_at(lo), poly.sign_at(hi));
    a != Ordering::Equal && b != Ordering::Equal && a != b
}

/// A point of `(lo, hi)` near the middle that is not a root of `poly`.
fn split_point(poly: &IntPoly, lo: &Rational, hi: &Rational) -> Rational {
    let width = hi - lo;
    for k in [8i64, 7, 9, 6, 10, 5, 11, 4, 12, 3, 13, 2, 14, 1, 15] {
        let x = lo + &width * Rational::new(k.into(), 16.into());
        if poly.sign_at(&x) != Ordering::Equal {
            return x;
        }
    }
    unreachable!("a nonzero polynomial has at most {} roots", poly.degree())
}

fn bisect_once(poly: &IntPoly, lo: &Rational, hi: &Rational) -> (Rational, Rational) {
    let mid = (lo + hi) / int(2);
    match poly.sign_at(&mid) {
        Ordering::Equal => {
            let quarter = (hi - lo) / int(4);
            (&mid - &quarter, &mid + quarter)
        }
        s if s == poly.sign_at(lo) => (mid, hi.clone()),
        _ => (lo.clone(), mid),
    }
}

/// Power of two strictly above every root modulus (Cauchy bound).
fn root_bound(poly: &Poly) -> Rational {
    let lead = poly.leading().abs();
    let max = poly.coeffs().iter().map(|c| c.abs() / &lead).max().unwrap_or_else(Rational::zero);
    let limit = max + Rational::one();
    let mut bound = int(1);
    while bound <= limit {
        bound *= int(2);
    }
    bound
}

fn sturm_sequence(poly: &Poly) -> Vec<IntPoly> {
    let mut seq = vec![poly.clone(), poly.derivative()];
    while let Some(last) = seq.last().filter(|p| p.degree().unwrap_or(0) > 0) {
        let (_, rem) = seq[seq.len() - 2].div_rem(last);
        if rem.is_zero() {
            break;
        }
        let next = IntPoly::new(&-&rem).to_poly();
        seq.push(next);
    }
    seq.iter().map(IntPoly::new).collect()
}

fn sign_variations(seq: &[IntPoly], x: &Rational) -> usize {
    let signs: Vec<Ordering> = seq.iter().map(|p| p.sign_at(x)).filter(|s| *s != Ordering::Equal).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

fn require_squarefree(poly: &Poly) -> Result<()> {
    if poly.degree().unwrap_or(0) == 0 {
        return Ok(());
    }
    if poly.gcd(&poly.derivative()).degree().unwrap_or(0) > 0 {
        return Err(Error::NotSquarefree);
    }
    Ok(())
}

/// Sturm-sequence isolation of all real roots, refined to width `tol`.
pub fn isolate_real_roots(poly: &Poly, tol: &Rational) -> Result<ZeroSet> {
    assert!(!poly.is_zero(), "zero polynomial has no isolated roots");
    require_squarefree(poly)?;
    let int_poly = Arc::new(IntPoly::new(poly));
    let seq = sturm_sequence(poly);
    let bound = root_bound(poly);
    let mut found = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((lo, hi)) = stack.pop() {
        let count = sign_variations(&seq, &lo) - sign_variations(&seq, &hi);
        match count {
            0 => {}
            1 => found.push((lo, hi)),
            _ => {
                let mid = split_point(&int_poly, &lo, &hi);
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
        }
    }
    let mut set = ZeroSet::build(int_poly, found);
    set.refine(tol);
    Ok(set)
}

/// Certified isolation from approximate roots: if `p` changes sign between
/// consecutive separators of the sorted hints, all `deg p` roots are real,
/// simple, and isolated. Returns `None` when the hints do not certify.
pub fn isolate_with_hints(poly: &Poly, hints: &[f64], tol: &Rational) -> Option<ZeroSet> {
    let degree = poly.degree()?;
    if hints.len() != degree || hints.iter().any(|h| !h.is_finite()) {
        return None;
    }
    let mut sorted = hints.to_vec();
    sorted.sort_by(f64::total_cmp);
    let int_poly = Arc::new(IntPoly::new(poly));
    let dyadic = |v: f64| Rational::from_float(v).expect("finite");
    let first = sorted[0];
    let last = sorted[degree - 1];
    let mut separators = Vec::with_capacity(degree + 1);
    separators.push(if first > 0.0 { Rational::zero() } else { dyadic(first - 1.0 - first.abs()) });
    for w in sorted.windows(2) {
        let mid = dyadic(w[0] + (w[1] - w[0]) / 2.0);
        if separators.last().is_some_and(|s| &mid <= s) {
            return None;
        }
        separators.push(mid);
    }
    separators.push(dyadic(last + 1.0 + last.abs()));
    let signs: Vec<Ordering> = separators.par_iter().map(|x| int_poly.sign_at(x)).collect();
    if signs.iter().any(|s| *s == Ordering::Equal) || signs.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    let half_tol = to_f64(tol) / 2.0;
    let intervals: Vec<(Rational, Rational)> = separators
        .windows(2)
        .zip(&sorted)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(w, &hint)| {
            let (lo, hi) = (&w[0], &w[1]);
            let tight = (dyadic(hint - half_tol), dyadic(hint + half_tol));
            if &tight.0 > lo && &tight.1 < hi && &tight.0 < &tight.1 && sign_change(&int_poly, &tight.0, &tight.1) {
                tight
            } else {
                (lo.clone(), hi.clone())
            }
        })
        .collect();
    let mut set = ZeroSet::build(int_poly, intervals);
    set.refine(tol);
    Some(set)
}

/// Lower Hessenberg matrix in `f64`, stored by nonzero entries per row.
struct FloatHessenberg {
    rows: Vec<Vec<(usize, f64)>>,
    upper: Vec<f64>,
}

impl FloatHessenberg {
    fn new(h: &RatMatrix) -> Self {
        let n = h.rows();
        let rows = (0..n)
            .map(|i| (0..=i).filter(|&j| !h.get(i, j).is_zero()).map(|j| (j, to_f64(h.get(i, j)))).collect())
            .collect();
        let upper = (0..n.saturating_sub(1)).map(|i| to_f64(h.get(i, i + 1))).collect();
        Self { rows, upper }
    }

    fn size(&self) -> usize {
        self.rows.len()
    }

    /// A positive multiple of `det(xI - H_k)` for the leading `k x k` block.
    fn scaled_charpoly(&self, k: usize, x: f64) -> f64 {
        let mut p = Vec::with_capacity(k + 1);
        p.push(1.0f64);
        for i in 0..k {
            let mut v = x * p[i];
            for &(j, value) in &self.rows[i] {
                let chain: f64 = self.upper[j..i].iter().product();
                v -= value * chain * p[j];
            }
            p.push(v);
            let size = v.abs();
            if size > 1e150 || (size < 1e-150 && size > 0.0) {
                p.iter_mut().for_each(|e| *e /= size);
            }
        }
        p[k]
    }

    /// Bound on the spectral radius of every leading block: largest absolute row sum.
    fn radius_bound(&self) -> f64 {
        let n = self.size();
        (0..n)
            .map(|i| self.rows[i].iter().map(|(_, v)| v.abs()).sum::<f64>() + self.upper.get(i).map_or(0.0, |u| u.abs()))
            .fold(0.0, f64::max)
    }

    /// Root of block `k` in `(lo, hi)` by bisection on the sign, if the ends differ in sign.
    fn bisect_root(&self, k: usize, mut lo: f64, mut hi: f64) -> Option<f64> {
        let mut f_lo = self.scaled_charpoly(k, lo).signum();
        let f_hi = self.scaled_charpoly(k, hi).signum();
        if f_lo == 0.0 || f_hi == 0.0 || f_lo == f_hi {
            return None;
        }
        for _ in 0..2200 {
            let mid = lo + (hi - lo) / 2.0;
            if mid <= lo || mid >= hi {
                break;
            }
            let f_mid = self.scaled_charpoly(k, mid).signum();
            if f_mid == 0.0 {
                return Some(mid);
            }
            if f_mid == f_lo {
                lo = mid;
                f_lo = f_mid;
            } else {
                hi = mid;
            }
        }
        Some(lo + (hi - lo) / 2.0)
    }
}

/// Approximate zeros of `det(xI - H)` found block by block: the roots of the
/// leading `(k-1) x (k-1)` block bracket those of the `k x k` block. Returns
/// `None` if a bracket shows no sign change, as happens without interlacing.
pub fn interlacing_hints(h: &RatMatrix) -> Option<Vec<f64>> {
    let float_h = FloatHessenberg::new(h);
    let bound = float_h.radius_bound() * 1.01 + 1.0;
    let mut roots: Vec<f64> = Vec::new();
    for k in 1..=float_h.size() {
        let mut fences = Vec::with_capacity(k + 1);
        fences.push(-bound);
        fences.extend_from_slice(&roots);
        fences.push(bound);
        roots = fences
            .par_windows(2)
            .map(|w| float_h.bisect_root(k, w[0], w[1]))
            .collect::<Option<Vec<f64>>>()?;
    }
    Some(roots)
}

/// Approximate eigenvalues of `H` from the balanced real Schur form.
pub fn eigenvalue_hints(h: &RatMatrix) -> Option<Vec<f64>> {
    let n = h.rows();
    let mut dense = DMatrix::from_fn(n, n, |i, j| to_f64(h.get(i, j)));
    nalgebra::linalg::balancing::balance_parlett_reinsch(&mut dense);
    let schur = dense.try_schur(f64::EPSILON, 100 * n.max(10))?;
    let mut hints: Vec<f64> = schur.complex_eigenvalues().iter().map(|z| z.re).collect();
    hints.sort_by(f64::total_cmp);
    Some(hints)
}

/// Zeros of `det(xI - H)`: float hints certified by exact sign changes,
/// with Sturm isolation as the fallback for moderate degrees.
pub fn hessenberg_zeros(h: &RatMatrix, tol: &Rational) -> Result<ZeroSet> {
    let poly = charpoly_hessenberg(h);
    zeros_with_matrix(&poly, h, tol)
}

/// As [`hessenberg_zeros`] when the characteristic polynomial is already known.
pub fn zeros_with_matrix(poly: &Poly, h: &RatMatrix, tol: &Rational) -> Result<ZeroSet> {
    let certified = interlacing_hints(h)
        .and_then(|hints| isolate_with_hints(poly, &hints, tol))
        .or_else(|| eigenvalue_hints(h).and_then(|hints| isolate_with_hints(poly, &hints, tol)));
    if let Some(set) = certified {
        return Ok(set);
    }
    let degree = poly.degree().unwrap_or(0);
    if degree <= STURM_LIMIT {
        return isolate_real_roots(poly, tol);
    }
    Err(Error::PrecisionExhausted { steps: degree })
}

/// Strict interlacing `y_1 < x_1 < y_2 < … < x_n < y_{n+1}` for roots `x` of
/// degree `n` and `y` of degree `n+1`, in the order the sets list them.
pub fn check_interlacing(lower: &ZeroSet, upper: &ZeroSet) -> Result<bool> {
    if upper.len() != lower.len() + 1 {
        return Ok(false);
    }
    let mut sets = [lower.clone(), upper.clone()];
    let chain: Vec<(usize, usize)> = (0..upper.len())
        .flat_map(|i| std::iter::once((1, i)).chain((i < lower.len()).then_some((0, i))))
        .collect();
    for pair in chain.windows(2) {
        let ((sa, ia), (sb, ib)) = (pair[0], pair[1]);
        match strictly_less(&mut sets, (sa, ia), (sb, ib))? {
            true => {}
            false => return Ok(false),
        }
    }
    Ok(true)
}

fn strictly_less(sets: &mut [ZeroSet; 2], a: (usize, usize), b: (usize, usize)) -> Result<bool> {
    let mut checked_common = false;
    for round in 0..MAX_ORDERING_ROUNDS {
        let (alo, ahi) = sets[a.0].intervals[a.1].clone();
        let (blo, bhi) = sets[b.0].intervals[b.1].clone();
        if ahi <= blo {
            return Ok(true);
        }
        if bhi <= alo {
            return Ok(false);
        }
        if a.0 == b.0 {
            return Ok(false);
        }
        if round >= 64 && !checked_common {
            checked_common = true;
            let g = sets[0].poly.to_poly().gcd(&sets[1].poly.to_poly());
            if g.degree().unwrap_or(0) > 0 {
                let shared = isolate_real_roots(&g, &Rational::new(1.into(), 1024.into()))?;
                let a_hits = (0..shared.len()).any(|k| overlaps(&shared.intervals[k], &(alo.clone(), ahi.clone())));
                if a_hits {
                    return Ok(false);
                }
            }
        }
        if &ahi - &alo >= &bhi - &blo {
            sets[a.0].bisect(a.1);
        } else {
            sets[b.0].bisect(b.1);
        }
    }
    Err(Error::PrecisionExhausted { steps: MAX_ORDERING_ROUNDS })
}

fn overlaps(x: &(Rational, Rational), y: &(Rational, Rational)) -> bool {
    x.0 < y.1 && y.0 < x.1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use crate::mop::{constant_case, polys_explicit, recurrence_coeffs, polys_via_recurrence};
    use crate::production::production_closed_form;
    use crate::bcf::HypergeometricParams;

    fn tol() -> Rational {
        Rational::new(1.into(), BigInt::one() << 40)
    }

    #[test]
    fn charpoly_first_step() {
        let h = RatMatrix::from_rows(vec![vec![ratio(3, 2)]]);
        assert_eq!(charpoly_hessenberg(&h), Poly::new(vec![ratio(-3, 2), int(1)]));
    }

    #[test]
    fn charpoly_matches_recurrence() {
        let p = HypergeometricParams::with_unit_last(2, 1, vec![1], vec![ratio(1, 3), ratio(2, 5)], vec![ratio(9, 4)]).unwrap();
        let h = production_closed_form(2, &p.alpha_sequence(), 10).unwrap().to_dense();
        let polys = polys_explicit(&p, 10).unwrap();
        for n in 0..=10 {
            assert_eq!(charpoly_hessenberg(&h.truncate(n, n)), *polys.get(n));
        }
    }

    #[test]
    fn sturm_unit_roots() {
        let set = isolate_real_roots(&Poly::new(vec![int(-1), int(0), int(1)]), &ratio(1, 1 << 30)).unwrap();
        assert_eq!(set.len(), 2);
        assert!((set.midpoints[0] + 1.0).abs() < 1e-9 && (set.midpoints[1] - 1.0).abs() < 1e-9);
        assert_eq!(set.compare_root(1, &int(1)), Ordering::Equal);
    }

    #[test]
    fn repeated_root_rejected() {
        let p = Poly::from_roots(&[int(1), int(1), int(2)]);
        assert!(matches!(isolate_real_roots(&p, &tol()), Err(Error::NotSquarefree)));
    }

    #[test]
    fn constant_case_quarter_roots() {
        let cc = constant_case(1, 2).unwrap();
        let set = isolate_real_roots(cc.polys.get(2), &tol()).unwrap();
        assert_eq!(set.compare_root(0, &ratio(1, 4)), Ordering::Equal);
        assert_eq!(set.compare_root(1, &ratio(3, 4)), Ordering::Equal);
        assert!((set.midpoints[0] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn hints_agree_with_sturm() {
        let p = HypergeometricParams::with_unit_last(2, 1, vec![2], vec![ratio(1, 2), ratio(3, 4)], vec![ratio(3, 2)]).unwrap();
        let rc = recurrence_coeffs(&p, 14).unwrap();
        let poly = polys_via_recurrence(&rc, 14).polys.pop().unwrap();
        let h = production_closed_form(2, &p.alpha_sequence(), 14).unwrap().to_dense();
        let hinted = isolate_with_hints(&poly, &eigenvalue_hints(&h).unwrap(), &tol()).expect("certified");
        let sturm = isolate_real_roots(&poly, &tol()).unwrap();
        for (x, y) in hinted.midpoints.iter().zip(&sturm.midpoints) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn bad_hints_do_not_certify() {
        let p = Poly::from_roots(&[int(1), int(2), int(3)]);
        assert!(isolate_with_hints(&p, &[1.0, 1.1, 1.2], &tol()).is_none());
        assert!(isolate_with_hints(&p, &[1.0, 2.0, 3.0], &tol()).is_some());
        assert!(isolate_with_hints(&p, &[1.0, 1.1, 3.0], &tol()).is_some());
    }

    #[test]
    fn interlacing_constant_case() {
        let cc = constant_case(1, 3).unwrap();
        let z1 = isolate_real_roots(cc.polys.get(1), &tol()).unwrap();
        let z2 = isolate_real_roots(cc.polys.get(2), &tol()).unwrap();
        assert!(check_interlacing(&z1, &z2).unwrap());
        let z3 = isolate_real_roots(cc.polys.get(3), &tol()).unwrap();
        assert!(check_interlacing(&z2, &z3).unwrap());
        let mut shuffled = z3.clone();
        shuffled.intervals.swap(0, 2);
        assert!(!check_interlacing(&z2, &shuffled).unwrap());
        assert!(!check_interlacing(&z1, &z3).unwrap());
    }

    #[test]
    fn common_root_breaks_interlacing() {
        let a = isolate_real_roots(&Poly::from_roots(&[int(1), int(3)]), &tol()).unwrap();
        let b = isolate_real_roots(&Poly::from_roots(&[int(0), int(1), int(4)]), &tol()).unwrap();
        assert!(!check_interlacing(&a, &b).unwrap());
    }
}
