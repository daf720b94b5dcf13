//! Multiple orthogonal polynomials on the step-line attached to a
//! hypergeometric family with `a_{r+1} = 1`.
//!
//! Two constructions are kept apart on purpose: [`polys_via_recurrence`] runs
//! the `(m+1)`-term recurrence whose coefficients come from the continued
//! fraction, while [`polys_explicit`] expands the terminating hypergeometric
//! formula directly from the parameters.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::bcf::HypergeometricParams;
use crate::error::{Error, Result};
use crate::exact::{binomial, ceil_div, factorial, int, pochhammer, ratio, series_hypergeometric, Poly, RatMatrix, Rational};
use crate::production::{production_closed_form, BandedHessenberg};

/// Monic polynomials `P_0, …, P_N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolySeq {
    pub m: usize,
    pub polys: Vec<Poly>,
}

impl PolySeq {
    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn get(&self, n: usize) -> &Poly {
        &self.polys[n]
    }

    /// Lower-triangular matrix whose row `n` lists the coefficients of `P_n`.
    pub fn coefficient_matrix(&self) -> RatMatrix {
        let size = self.polys.len();
        RatMatrix::from_fn(size, size, |n, k| self.polys[n].coeff(k))
    }
}

/// `γ_n^{[k]}` for `0 ≤ k ≤ m`, stored as `gamma[k][n]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecurrenceCoeffs {
    pub m: usize,
    #[serde(serialize_with = "crate::serial::rational_rows")]
    pub gamma: Vec<Vec<Rational>>,
}

impl RecurrenceCoeffs {
    pub fn get(&self, k: usize, n: usize) -> &Rational {
        &self.gamma[k][n]
    }

    /// Number of indices `n` available for every `k`.
    pub fn depth(&self) -> usize {
        self.gamma.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Reads `γ_n^{[k]} = h_{n+k,n}` off a production matrix.
    pub fn from_production(h: &BandedHessenberg) -> Self {
        let gamma = (0..=h.m()).map(|k| h.diagonal(k).to_vec()).collect();
        Self { m: h.m(), gamma }
    }
}

fn require_unit_last(p: &HypergeometricParams) -> Result<()> {
    if p.has_unit_last() {
        Ok(())
    } else {
        Err(Error::InvalidParams("orthogonal polynomials need a_{r+1} = 1".into()))
    }
}

/// Recurrence coefficients `γ_n^{[k]}` for `n < count`, from the continued fraction.
pub fn recurrence_coeffs(p: &HypergeometricParams, count: usize) -> Result<RecurrenceCoeffs> {
    require_unit_last(p)?;
    let m = p.m();
    let h = production_closed_form(m, &p.alpha_sequence(), count + m)?;
    let mut rc = RecurrenceCoeffs::from_production(&h);
    for row in &mut rc.gamma {
        row.truncate(count);
    }
    Ok(rc)
}

/// `P_0..=P_N` from `P_{n+1} = x P_n - Σ_{k=0}^{min(m,n)} γ_{n-k}^{[k]} P_{n-k}`.
pub fn polys_via_recurrence(rc: &RecurrenceCoeffs, max_degree: usize) -> PolySeq {
    assert!(max_degree <= rc.depth(), "recurrence table too short for degree {max_degree}");
    let mut polys = vec![Poly::constant(Rational::one())];
    for n in 0..max_degree {
        let mut next = polys[n].mul_x();
        for k in 0..=rc.m.min(n) {
            next = &next - &polys[n - k].scale(rc.get(k, n - k));
        }
        polys.push(next);
    }
    PolySeq { m: rc.m, polys }
}

/// Lower parameters `b_j^{(n-1)}` that enter the degree-`n` polynomial.
pub fn lower_params_for_degree(p: &HypergeometricParams, n: usize) -> Vec<Rational> {
    let m = p.m() as i64;
    (0..p.s)
        .map(|j| {
            let anchor = if p.r_ge_s() { p.selector[j] } else { j + 1 } as i64;
            &p.b[j] + int(ceil_div(n as i64 - anchor, m))
        })
        .collect()
}

/// `P_n(x) = Σ_k (-1)^k C(n,k) ∏(a_i+n-k)_k / ∏(b_j^{(n-1)}+n-k)_k x^{n-k}`.
pub fn explicit_poly(p: &HypergeometricParams, n: usize) -> Result<Poly> {
    require_unit_last(p)?;
    let lower = lower_params_for_degree(p, n);
    for (j, c) in lower.iter().enumerate() {
        if pochhammer(c, n).is_zero() {
            return Err(Error::Pole { index: n as i64, factor: format!("(b_{}^({}))_{n}", j + 1, n as i64 - 1) });
        }
    }
    let mut coeffs = vec![Rational::zero(); n + 1];
    for k in 0..=n {
        let shift = int((n - k) as i64);
        let mut c = Rational::from_integer(binomial(n as i64, k as i64));
        if k % 2 == 1 {
            c = -c;
        }
        for a in &p.a[..p.r] {
            c *= pochhammer(&(a + &shift), k);
        }
        for b in &lower {
            c /= pochhammer(&(b + &shift), k);
        }
        coeffs[n - k] = c;
    }
    Ok(Poly::new(coeffs))
}

pub fn polys_explicit(p: &HypergeometricParams, max_degree: usize) -> Result<PolySeq> {
    let polys = (0..=max_degree).map(|n| explicit_poly(p, n)).collect::<Result<_>>()?;
    Ok(PolySeq { m: p.m(), polys })
}

/// Moments `⟨v_ℓ, x^t⟩` of the `m` orthogonality functionals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FunctionalVector {
    pub m: usize,
    #[serde(serialize_with = "crate::serial::rational_rows")]
    pub moments: Vec<Vec<Rational>>,
}

/// Parameters of `v_ℓ`: `a_i` and `b_j` are raised by one exactly when their
/// selector position is at most `ℓ`.
pub fn functional_params(p: &HypergeometricParams, ell: usize) -> (Vec<Rational>, Vec<Rational>) {
    let bump = |v: &Rational, position: usize| if position <= ell { v + Rational::one() } else { v.clone() };
    let (a_pos, b_pos): (Vec<usize>, Vec<usize>) = if p.r_ge_s() {
        ((1..=p.r).collect(), p.selector.clone())
    } else {
        (p.selector.clone(), (1..=p.s).collect())
    };
    let a = p.a[..p.r].iter().zip(&a_pos).map(|(v, &pos)| bump(v, pos)).collect();
    let b = p.b.iter().zip(&b_pos).map(|(v, &pos)| bump(v, pos)).collect();
    (a, b)
}

impl FunctionalVector {
    /// Moments up to power `max_power` for every functional.
    pub fn new(p: &HypergeometricParams, max_power: usize) -> Result<Self> {
        require_unit_last(p)?;
        let m = p.m();
        let mut moments = Vec::with_capacity(m);
        for ell in 0..m {
            let (a, b) = functional_params(p, ell);
            let mut row = vec![Rational::one()];
            for t in 0..max_power {
                let tt = int(t as i64);
                let mut step = Rational::one();
                for ai in &a {
                    step *= ai + &tt;
                }
                for (j, bj) in b.iter().enumerate() {
                    let f = bj + &tt;
                    if f.is_zero() {
                        return Err(Error::Pole { index: t as i64 + 1, factor: format!("moment {ell}: b_{} + {t}", j + 1) });
                    }
                    step /= f;
                }
                let next = &row[t] * step;
                row.push(next);
            }
            moments.push(row);
        }
        Ok(Self { m, moments })
    }

    pub fn moment(&self, ell: usize, power: usize) -> &Rational {
        &self.moments[ell][power]
    }
}

/// `⟨v_ℓ, x^k P⟩` by expanding `P` in monomials.
pub fn apply_functional(fv: &FunctionalVector, ell: usize, k: usize, poly: &Poly) -> Rational {
    poly.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .fold(Rational::zero(), |acc, (j, c)| acc + c * fv.moment(ell, k + j))
}

/// Value of `⟨v_ℓ, x^k P_n⟩` at `n = mk + ℓ`, in closed form.
///
/// After cancelling lower against upper parameters the functional reduces to a
/// terminating series at 1 that sums by the Minton-type formulas: either all
/// lower parameters cancel, or exactly one survives as a pair `d`, `d + 1`.
pub fn orthogonality_closed_form(p: &HypergeometricParams, ell: usize, k: usize) -> Result<Rational> {
    require_unit_last(p)?;
    let m = p.m();
    assert!(ell < m);
    let n = m * k + ell;
    let kk = int(k as i64);
    let a = &p.a[..p.r];
    let (a_ell, b_ell) = functional_params(p, ell);
    let c = lower_params_for_degree(p, n);
    let steps: Vec<usize> = a_ell
        .iter()
        .zip(a)
        .map(|(x, y)| {
            let diff = x + &kk - y;
            usize::try_from(diff.to_integer()).expect("upper shifts are nonnegative integers")
        })
        .collect();

    let mut value = if n % 2 == 0 { Rational::one() } else { -Rational::one() };
    for (x, y) in a.iter().zip(&a_ell) {
        value *= pochhammer(x, n) * pochhammer(y, k);
    }
    for (x, y) in c.iter().zip(&b_ell) {
        value /= pochhammer(x, n) * pochhammer(y, k);
    }

    let survivors: Vec<usize> = (0..p.s).filter(|&j| c[j] != &b_ell[j] + &kk).collect();
    let nfact = Rational::from_integer(factorial(n));
    let series = match survivors.as_slice() {
        [] => {
            if steps.iter().sum::<usize>() != n {
                return Err(Error::Inconsistent(format!("upper shifts do not add up to {n}")));
            }
            let sign = if n % 2 == 0 { int(1) } else { int(-1) };
            let den = a.iter().zip(&steps).fold(Rational::one(), |acc, (x, &s)| acc * pochhammer(x, s));
            sign * nfact / den
        }
        [j] => {
            let d = c[*j].clone();
            if d != &b_ell[*j] + &kk - Rational::one() {
                return Err(Error::Inconsistent(format!("lower parameter {} shifted by more than one", j + 1)));
            }
            let mut num = nfact;
            let mut den = pochhammer(&(&d + Rational::one()), n);
            for (x, &s) in a.iter().zip(&steps) {
                num *= pochhammer(&(x - &d), s);
                den *= pochhammer(x, s);
            }
            num / den
        }
        _ => return Err(Error::Inconsistent("more than one lower parameter survives".into())),
    };
    Ok(value * series)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OrthogonalityReport {
    pub passed: bool,
    pub checked: usize,
    /// `(n, ℓ, k)` triples that failed.
    pub failures: Vec<(usize, usize, usize)>,
}

/// Checks `⟨v_ℓ, x^k P_n⟩ = 0` for `n > mk+ℓ` and the closed-form nonzero value at
/// `n = mk+ℓ`, for all `n ≤ max_degree`.
pub fn orthogonality_report(p: &HypergeometricParams, polys: &PolySeq, max_degree: usize) -> Result<OrthogonalityReport> {
    let m = p.m();
    let fv = FunctionalVector::new(p, 2 * max_degree + 1)?;
    let mut report = OrthogonalityReport::default();
    for n in 0..=max_degree {
        for ell in 0..m {
            for k in 0..=n {
                let level = m * k + ell;
                if level > n {
                    break;
                }
                let value = apply_functional(&fv, ell, k, polys.get(n));
                let ok = if level < n {
                    value.is_zero()
                } else {
                    !value.is_zero() && value == orthogonality_closed_form(p, ell, k)?
                };
                report.checked += 1;
                if !ok {
                    report.failures.push((n, ell, k));
                }
            }
        }
    }
    report.passed = report.failures.is_empty();
    Ok(report)
}

/// `S_{n,k} = C(n,k) ∏(a_i+k)_{n-k} / ∏(b_j^{(k)}+k)_{n-k}`.
pub fn generalized_sr_closed_form(p: &HypergeometricParams, size: usize) -> Result<RatMatrix> {
    require_unit_last(p)?;
    let mut out = RatMatrix::zeros(size, size);
    for k in 0..size {
        let kk = int(k as i64);
        let lower = lower_params_for_degree(p, k + 1);
        for n in k..size {
            let mut v = Rational::from_integer(binomial(n as i64, k as i64));
            for a in &p.a[..p.r] {
                v *= pochhammer(&(a + &kk), n - k);
            }
            for (j, b) in lower.iter().enumerate() {
                let den = pochhammer(&(b + &kk), n - k);
                if den.is_zero() {
                    return Err(Error::Pole { index: k as i64, factor: format!("(b_{}^({k}) + {k})_{}", j + 1, n - k) });
                }
                v /= den;
            }
            out.set(n, k, v);
        }
    }
    Ok(out)
}

/// Coefficient reversal `x^n P_n(1/x)` against the terminating series
/// `_{r+1}F_s(-n, 1-n-a_i; 1-n-b_j^{(n-1)}; (-1)^{r+s} x)`.
pub fn reciprocal_check(p: &HypergeometricParams, n: usize) -> Result<bool> {
    let poly = explicit_poly(p, n)?;
    let shift = int(1 - n as i64);
    let mut upper = vec![int(-(n as i64))];
    upper.extend(p.a[..p.r].iter().map(|a| &shift - a));
    let lower: Vec<Rational> = lower_params_for_degree(p, n).iter().map(|b| &shift - b).collect();
    let series = series_hypergeometric(&upper, &lower, n)?;
    let sign = if (p.r + p.s) % 2 == 0 { int(1) } else { int(-1) };
    let mut power = Rational::one();
    let mut coeffs = Vec::with_capacity(n + 1);
    for c in series.coeffs() {
        coeffs.push(c * &power);
        power *= &sign;
    }
    Ok(Poly::new(coeffs) == poly.reversed(n))
}

/// `[∏_i (xD + a_i)] D P = [∏_j (xD + b_j^{(n-1)})] (xD - n) P`.
pub fn ode_holds(p: &HypergeometricParams, n: usize, poly: &Poly) -> bool {
    let lhs = p.a[..p.r].iter().fold(poly.derivative(), |acc, a| acc.euler_shift(a));
    let start = poly.euler_shift(&int(-(n as i64)));
    let rhs = lower_params_for_degree(p, n).iter().fold(start, |acc, b| acc.euler_shift(b));
    lhs == rhs
}

pub fn ode_check(p: &HypergeometricParams, n: usize) -> Result<bool> {
    Ok(ode_holds(p, n, &explicit_poly(p, n)?))
}

/// Parameters whose degree-`(n-1)` polynomial is `P_n' / n`.
pub fn derivative_shift_params(p: &HypergeometricParams) -> Result<HypergeometricParams> {
    let one = Rational::one();
    let a: Vec<Rational> = p.a[..p.r].iter().map(|v| v + &one).collect();
    let rotated = || {
        let mut b: Vec<Rational> = p.b[1..].iter().map(|v| v + &one).collect();
        b.push(&p.b[0] + int(2));
        b
    };
    let (selector, b) = if p.r_ge_s() {
        if p.s > 0 && p.selector[0] == 1 {
            let mut sel: Vec<usize> = p.selector[1..].iter().map(|l| l - 1).collect();
            sel.push(p.r);
            (sel, rotated())
        } else {
            (p.selector.iter().map(|l| l - 1).collect(), p.b.iter().map(|v| v + &one).collect())
        }
    } else {
        (p.selector.clone(), rotated())
    };
    HypergeometricParams::with_unit_last(p.r, p.s, selector, a, b)
}

pub fn derivative_shift_check(p: &HypergeometricParams, n: usize) -> Result<bool> {
    if n == 0 {
        return Ok(explicit_poly(p, 0)?.derivative().is_zero());
    }
    let shifted = derivative_shift_params(p)?;
    let lhs = explicit_poly(p, n)?.derivative();
    let rhs = explicit_poly(&shifted, n - 1)?.scale(&int(n as i64));
    Ok(lhs == rhs)
}

/// The family with constant recurrence coefficients:
/// `s = r`, `λ = (1..r)`, `a_i = (r+1+i)/(r+1)`, `b_i = (r+1+i)/r`.
pub fn constant_case_params(r: usize) -> HypergeometricParams {
    assert!(r >= 1);
    let ri = r as i64;
    let a = (1..=ri).map(|i| ratio(ri + 1 + i, ri + 1)).collect();
    let b = (1..=ri).map(|i| ratio(ri + 1 + i, ri)).collect();
    HypergeometricParams::with_unit_last(r, r, (1..=r).collect(), a, b).expect("valid constant-case parameters")
}

/// `r^r / (r+1)^{r+1}`.
pub fn constant_case_scale(r: usize) -> Rational {
    let ri = r as i64;
    Rational::new(num_traits::pow(int(ri), r).to_integer(), num_traits::pow(int(ri + 1), r + 1).to_integer())
}

/// The limiting value `C(r+1, k+1) (r^r/(r+1)^{r+1})^{k+1}`.
pub fn constant_case_gamma(r: usize, k: usize) -> Rational {
    Rational::from_integer(binomial(r as i64 + 1, k as i64 + 1)) * num_traits::pow(constant_case_scale(r), k + 1)
}

/// `(r^r/(r+1)^{r+1})^n C((r+1)(n+1)+k, n) / (n+1)`.
pub fn fuss_catalan_moment(r: usize, k: usize, n: usize) -> Rational {
    let count = binomial(((r + 1) * (n + 1) + k) as i64, n as i64);
    num_traits::pow(constant_case_scale(r), n) * Rational::new(count, (n as i64 + 1).into())
}

/// `C(n+r, r) (-r^r/(r+1)^{r+1})^n _{r+1}F_r(-n, (n+r+1)/r, …, (n+2r)/r; (r+2)/(r+1), …, (2r+1)/(r+1); x)`.
pub fn constant_case_poly(r: usize, n: usize) -> Result<Poly> {
    let (ri, ni) = (r as i64, n as i64);
    let mut upper = vec![int(-ni)];
    upper.extend((1..=ri).map(|i| ratio(ni + ri + i, ri)));
    let lower: Vec<Rational> = (1..=ri).map(|i| ratio(ri + 1 + i, ri + 1)).collect();
    let series = series_hypergeometric(&upper, &lower, n)?;
    let prefactor = Rational::from_integer(binomial(ni + ri, ri)) * num_traits::pow(-constant_case_scale(r), n);
    Ok(Poly::new(series.coeffs().to_vec()).scale(&prefactor))
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstantCase {
    pub r: usize,
    pub params: HypergeometricParams,
    pub recurrence: RecurrenceCoeffs,
    pub polys: PolySeq,
    pub functionals: FunctionalVector,
}

/// Parameters, recurrence, polynomials up to `max_degree`, and moments for the
/// constant-coefficient family; the moments are checked against the
/// Fuss–Catalan formula before returning.
pub fn constant_case(r: usize, max_degree: usize) -> Result<ConstantCase> {
    let params = constant_case_params(r);
    let recurrence = recurrence_coeffs(&params, max_degree)?;
    let polys = polys_via_recurrence(&recurrence, max_degree);
    let functionals = FunctionalVector::new(&params, max_degree)?;
    for k in 0..r {
        for n in 0..=max_degree {
            if functionals.moment(k, n) != &fuss_catalan_moment(r, k, n) {
                return Err(Error::Inconsistent(format!("moment ({k}, {n}) of the constant case")));
            }
        }
    }
    Ok(ConstantCase { r, params, recurrence, polys, functionals })
}

/// Jacobi–Piñeiro parameters: `s = r`, `b_i = a_{i+1}` for `i < r`, `b_r = a_1 + 1`.
pub fn jacobi_pineiro_params(a: &[Rational]) -> Result<HypergeometricParams> {
    let r = a.len();
    if r == 0 {
        return Err(Error::InvalidParams("Jacobi–Piñeiro needs at least one parameter".into()));
    }
    if let Some(i) = (1..r).find(|&i| a[i] <= a[i - 1]) {
        return Err(Error::WindowViolation { position: i + 1 });
    }
    if a[r - 1] >= &a[0] + Rational::one() {
        return Err(Error::WindowViolation { position: r });
    }
    let mut b: Vec<Rational> = a[1..].to_vec();
    b.push(&a[0] + Rational::one());
    HypergeometricParams::with_unit_last(r, r, (1..=r).collect(), a.to_vec(), b)
}

/// `∫_0^1 x^n · a x^{a-1} dx = a / (n + a)` with `a = a_{j+1}`.
pub fn jacobi_pineiro_moment(a: &[Rational], j: usize, n: usize) -> Rational {
    &a[j] / (int(n as i64) + &a[j])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bcf::{positivity_certificate, Positivity};
    use crate::exact::{parse_rational, terminating_hypergeometric};

    fn qs(vs: &[&str]) -> Vec<Rational> {
        vs.iter().map(|v| parse_rational(v).unwrap()).collect()
    }

    fn sample(r: usize, s: usize, sel: &[usize]) -> HypergeometricParams {
        let a = qs(&["1/3", "2/5", "4/7"]);
        let b = qs(&["9/4", "11/3", "13/5"]);
        HypergeometricParams::with_unit_last(r, s, sel.to_vec(), a[..r].to_vec(), b[..s].to_vec()).unwrap()
    }

    #[test]
    fn laguerre_type_second_polynomial() {
        let p = HypergeometricParams::with_unit_last(1, 0, vec![], qs(&["1"]), vec![]).unwrap();
        let rc = recurrence_coeffs(&p, 3).unwrap();
        let polys = polys_via_recurrence(&rc, 2);
        assert_eq!(polys.get(1), &Poly::new(vec![int(-1), int(1)]));
        assert_eq!(polys.get(2), &Poly::new(vec![int(2), int(-4), int(1)]));
    }

    #[test]
    fn first_gamma_is_first_alpha() {
        let p = sample(2, 1, &[2]);
        let rc = recurrence_coeffs(&p, 4).unwrap();
        assert_eq!(rc.get(0, 0), &p.checked_coefficient(0).unwrap());
    }

    #[test]
    fn recurrence_equals_explicit() {
        for (r, s, sel) in [(2, 2, vec![1, 2]), (2, 1, vec![1]), (1, 2, vec![2]), (0, 2, vec![])] {
            let p = sample(r, s, &sel);
            let rc = recurrence_coeffs(&p, 7).unwrap();
            assert_eq!(polys_via_recurrence(&rc, 7), polys_explicit(&p, 7).unwrap(), "({r},{s}) {sel:?}");
        }
    }

    #[test]
    fn explicit_basics() {
        let p = sample(2, 2, &[1, 2]);
        let seq = polys_explicit(&p, 5).unwrap();
        assert_eq!(seq.get(0), &Poly::constant(int(1)));
        assert!(seq.polys.iter().all(|q| q.leading() == int(1)));
    }

    #[test]
    fn orthogonality_small() {
        for (r, s, sel) in [(2, 2, vec![1, 2]), (2, 1, vec![2]), (3, 1, vec![1]), (1, 2, vec![1])] {
            let p = sample(r, s, &sel);
            let polys = polys_explicit(&p, 7).unwrap();
            let report = orthogonality_report(&p, &polys, 7).unwrap();
            assert!(report.passed, "({r},{s}) {sel:?}: {:?}", report.failures);
        }
    }

    #[test]
    fn functional_starts_at_one() {
        let p = sample(2, 2, &[1, 2]);
        let fv = FunctionalVector::new(&p, 3).unwrap();
        for ell in 0..2 {
            assert_eq!(apply_functional(&fv, ell, 0, &Poly::constant(int(1))), int(1));
        }
    }

    #[test]
    fn duality() {
        let p = sample(2, 1, &[1]);
        let t = polys_explicit(&p, 6).unwrap().coefficient_matrix();
        let s = generalized_sr_closed_form(&p, 7).unwrap();
        assert_eq!(&t * &s, RatMatrix::identity(7));
    }

    #[test]
    fn ode_and_shift() {
        let p = sample(2, 1, &[2]);
        assert!(ode_check(&p, 0).unwrap());
        assert!(ode_check(&p, 5).unwrap());
        let mut broken = explicit_poly(&p, 5).unwrap().coeffs().to_vec();
        broken[2] += int(1);
        assert!(!ode_holds(&p, 5, &Poly::new(broken)));
        assert!(derivative_shift_check(&sample(2, 2, &[1, 2]), 4).unwrap());
        assert!(derivative_shift_check(&sample(3, 1, &[1]), 4).unwrap());
        assert!(derivative_shift_check(&sample(3, 2, &[2, 3]), 4).unwrap());
        assert!(derivative_shift_check(&sample(1, 2, &[1]), 4).unwrap());
        assert!(derivative_shift_check(&p, 1).unwrap());
    }

    #[test]
    fn constant_case_small() {
        let cc = constant_case(1, 4).unwrap();
        assert_eq!(cc.functionals.moment(0, 0), &int(1));
        assert_eq!(cc.functionals.moment(0, 1), &ratio(1, 2));
        for n in 0..4 {
            assert_eq!(cc.recurrence.get(0, n), &constant_case_gamma(1, 0));
        }
        assert_eq!(cc.polys.get(2), &Poly::new(vec![ratio(3, 16), int(-1), int(1)]));
        for r in 1..=3 {
            for n in 0..6 {
                assert_eq!(constant_case_poly(r, n).unwrap(), explicit_poly(&constant_case_params(r), n).unwrap());
            }
        }
    }

    #[test]
    fn chebyshev_relation() {
        let cc = constant_case(1, 6).unwrap();
        let (mut prev, mut cur) = (Poly::constant(int(1)), Poly::new(vec![int(0), int(2)]));
        for n in 1..=6 {
            let mapped = cc.polys.get(n).compose_affine(&ratio(1, 2), &ratio(-1, 2)).scale(&num_traits::pow(int(-4), n));
            assert_eq!(mapped, cur, "n={n}");
            let next = &cur.mul_x().scale(&int(2)) - &prev;
            prev = cur;
            cur = next;
        }
    }

    #[test]
    fn jacobi_pineiro() {
        let a = qs(&["1/2", "3/4"]);
        let p = jacobi_pineiro_params(&a).unwrap();
        let fv = FunctionalVector::new(&p, 6).unwrap();
        for j in 0..2 {
            for n in 0..=6 {
                assert_eq!(fv.moment(j, n), &jacobi_pineiro_moment(&a, j, n));
            }
        }
        assert_eq!(fv.moment(0, 1), &ratio(1, 3));
        assert_eq!(positivity_certificate(&p).unwrap(), Positivity::AllPositive);
        assert_eq!(jacobi_pineiro_params(&qs(&["1/2", "2"])), Err(Error::WindowViolation { position: 2 }));
        assert_eq!(jacobi_pineiro_params(&qs(&["1/2", "1/3"])), Err(Error::WindowViolation { position: 2 }));
    }

    #[test]
    fn reciprocal_and_invariance() {
        let p = sample(2, 1, &[1]);
        for n in 0..6 {
            assert!(reciprocal_check(&p, n).unwrap());
        }
        let swapped = HypergeometricParams::with_unit_last(2, 1, vec![1], qs(&["2/5", "1/3"]), qs(&["9/4"])).unwrap();
        assert_eq!(polys_explicit(&p, 6).unwrap(), polys_explicit(&swapped, 6).unwrap());
    }

    /// `⟨v_ℓ, x^k P_n⟩` written as one terminating series at 1.
    fn functional_as_series(p: &HypergeometricParams, ell: usize, k: usize, n: usize) -> Rational {
        let a = &p.a[..p.r];
        let (a_ell, b_ell) = functional_params(p, ell);
        let c = lower_params_for_degree(p, n);
        let kk = int(k as i64);
        let mut num = vec![int(-(n as i64))];
        num.extend(c.iter().cloned());
        num.extend(a_ell.iter().map(|v| v + &kk));
        let mut den = a.to_vec();
        den.extend(b_ell.iter().map(|v| v + &kk));
        let mut pre = if n % 2 == 0 { int(1) } else { int(-1) };
        for (x, y) in a.iter().zip(&a_ell) {
            pre *= pochhammer(x, n) * pochhammer(y, k);
        }
        for (x, y) in c.iter().zip(&b_ell) {
            pre /= pochhammer(x, n) * pochhammer(y, k);
        }
        pre * terminating_hypergeometric(&num, &den, n, &int(1)).unwrap()
    }

    #[test]
    fn functional_matches_series_at_one() {
        for (r, s, sel) in [(2, 2, vec![1, 2]), (2, 1, vec![2]), (3, 1, vec![1]), (1, 2, vec![1]), (1, 3, vec![1])] {
            let p = sample(r, s, &sel);
            let m = p.m();
            let fv = FunctionalVector::new(&p, 24).unwrap();
            for n in 0..=9 {
                let poly = explicit_poly(&p, n).unwrap();
                for ell in 0..m {
                    for k in 0..=3 {
                        assert_eq!(apply_functional(&fv, ell, k, &poly), functional_as_series(&p, ell, k, n), "({r},{s}) n={n} ell={ell} k={k}");
                    }
                }
            }
        }
    }

    /// The nonzero orthogonality values as displayed in closed form, read
    /// literally: `ζ`, `η` count parameters with selector position `≤ ℓ`.
    fn displayed_value(p: &HypergeometricParams, ell: usize, k: usize, corrected: bool) -> Rational {
        let m = p.m();
        let n = m * k + ell;
        let a = &p.a[..p.r];
        let (sigma, lambda): (Vec<usize>, Vec<usize>) =
            if p.r_ge_s() { ((1..=p.r).collect(), p.selector.clone()) } else { (p.selector.clone(), (1..=p.s).collect()) };
        let zeta = sigma.iter().filter(|&&x| x <= ell).count();
        let top = if ell == 0 { m } else { ell };
        let nfact = Rational::from_integer(factorial(n));
        let one = Rational::one();
        let kk = int(k as i64);
        match lambda.iter().position(|&l| l == top) {
            None => {
                let mut v = nfact;
                for (i, x) in a.iter().enumerate() {
                    v *= if i < zeta { pochhammer(&(x + &one), n - 1) } else { pochhammer(x, n) };
                }
                let (_, b_ell) = functional_params(p, ell);
                for (x, y) in lower_params_for_degree(p, n).iter().zip(&b_ell) {
                    v /= pochhammer(x, n) * pochhammer(y, k);
                }
                v
            }
            Some(j) => {
                let b_eta = if ell == 0 { &p.b[j] - &one } else { p.b[j].clone() };
                let exponent = (m - p.r) * k + ell - zeta;
                let mut v = if exponent % 2 == 0 { nfact } else { -nfact };
                for (i, x) in a.iter().enumerate() {
                    v *= if corrected && i < zeta { pochhammer(&(x + &one), n - 1) } else { pochhammer(x, n) };
                    v *= if i < zeta { pochhammer(&(&b_eta - x), k + 1) } else { pochhammer(&(&b_eta - x + &one), k) };
                }
                v /= pochhammer(&(&b_eta + &kk), n);
                let eta = lambda.iter().filter(|&&l| l <= ell).count();
                let split = if corrected { eta } else { zeta };
                for (jj, y) in p.b.iter().enumerate() {
                    v /= if jj < split { pochhammer(&(y + &one), n + k) } else { pochhammer(y, n + k) };
                }
                v
            }
        }
    }

    #[test]
    fn displayed_values_against_computed() {
        for (r, s, sel) in [(2, 2, vec![1, 2]), (2, 1, vec![1]), (2, 1, vec![2]), (3, 1, vec![2]), (1, 2, vec![1]), (1, 2, vec![2])] {
            let p = sample(r, s, &sel);
            let selector_le = |ell: usize| if p.r_ge_s() { ell.min(p.r) } else { sel.iter().filter(|&&x| x <= ell).count() };
            for ell in 0..p.m() {
                for k in 0..3 {
                    let exact = orthogonality_closed_form(&p, ell, k).unwrap();
                    assert_eq!(displayed_value(&p, ell, k, true), exact, "({r},{s}) {sel:?} ell={ell} k={k}");
                    let as_shown = displayed_value(&p, ell, k, false);
                    if p.r_ge_s() {
                        let second_branch = ell > 0 && p.selector.contains(&ell);
                        let missing: Rational = if second_branch { p.a[..selector_le(ell)].iter().product() } else { int(1) };
                        assert_eq!(as_shown, exact * missing);
                    }
                }
            }
        }
    }
}
