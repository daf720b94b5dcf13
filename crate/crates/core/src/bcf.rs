//! Branched continued fractions for ratios of contiguous hypergeometric series.
//!
//! A family is fixed by `(r, s)`, a selector and parameters `a_1..a_{r+1}`,
//! `b_1..b_s`. With `m = max(r, s)` the series
//! `g_k = _{r+1}F_s(a^{(k)}; b^{(k)}; t)` satisfy
//! `g_k - g_{k-1} = α_{k+m} t g_{k+m}`, and the `α` computed here are the
//! coefficients of that relation.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::alpha::AlphaSequence;
use crate::error::{Error, Result};
use crate::exact::{binomial, ceil_div, cyclic, int, pochhammer, series_hypergeometric, PowerSeries, Rational};
use crate::sr::sr_dp;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypergeometricParams {
    pub r: usize,
    pub s: usize,
    /// `λ_1 < … < λ_s` in `1..=r` when `r ≥ s`, otherwise `σ_1 < … < σ_r` in `1..=s`.
    pub selector: Vec<usize>,
    #[serde(serialize_with = "crate::serial::rationals")]
    pub a: Vec<Rational>,
    #[serde(serialize_with = "crate::serial::rationals")]
    pub b: Vec<Rational>,
    /// Use `α_m = a_1⋯a_r / (b_1⋯b_s)` instead of the default first coefficient.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub plain_first_coefficient: bool,
}

impl HypergeometricParams {
    /// `a` holds all `r + 1` upper parameters.
    pub fn new(r: usize, s: usize, selector: Vec<usize>, a: Vec<Rational>, b: Vec<Rational>) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidParams(msg));
        if r == 0 && s == 0 {
            return invalid("(r, s) = (0, 0) has no continued fraction".into());
        }
        if a.len() != r + 1 {
            return invalid(format!("expected {} upper parameters, got {}", r + 1, a.len()));
        }
        if b.len() != s {
            return invalid(format!("expected {s} lower parameters, got {}", b.len()));
        }
        let (len, range) = if r >= s { (s, r) } else { (r, s) };
        if selector.len() != len {
            return invalid(format!("selector needs {len} entries, got {}", selector.len()));
        }
        if selector.windows(2).any(|w| w[0] >= w[1]) || selector.iter().any(|&v| v == 0 || v > range) {
            return invalid(format!("selector {selector:?} must increase strictly within 1..={range}"));
        }
        Ok(Self { r, s, selector, a, b, plain_first_coefficient: false })
    }

    /// Family with `a_{r+1} = 1`, the case that produces orthogonal polynomials.
    /// `a` holds `a_1..a_r`.
    pub fn with_unit_last(r: usize, s: usize, selector: Vec<usize>, mut a: Vec<Rational>, b: Vec<Rational>) -> Result<Self> {
        a.push(Rational::one());
        Self::new(r, s, selector, a, b)
    }

    pub fn plain_first(mut self) -> Self {
        self.plain_first_coefficient = true;
        self
    }

    pub fn m(&self) -> usize {
        self.r.max(self.s)
    }

    pub fn r_ge_s(&self) -> bool {
        self.r >= self.s
    }

    pub fn has_unit_last(&self) -> bool {
        self.a[self.r].is_one()
    }

    /// 1-based position `l` with `λ_l = v` (only when `r ≥ s`).
    fn lambda_position(&self, v: i64) -> Option<usize> {
        debug_assert!(self.r_ge_s());
        self.selector.iter().position(|&l| l as i64 == v).map(|p| p + 1)
    }

    /// `σ_i` for `1 ≤ i ≤ r + 1`, with `σ_{r+1} = s + 1` (only when `r < s`).
    fn sigma(&self, i: usize) -> usize {
        if i == self.r + 1 {
            self.s + 1
        } else {
            self.selector[i - 1]
        }
    }

    /// 1-based `l ≤ r + 1` with `σ_l = v` (only when `r < s`).
    fn sigma_position(&self, v: i64) -> Option<usize> {
        (1..=self.r + 1).find(|&i| self.sigma(i) as i64 == v)
    }

    /// Shifted parameters `(a^{(k)}, b^{(k)})` for `k ≥ -1`.
    pub fn shifted(&self, k: i64) -> (Vec<Rational>, Vec<Rational>) {
        assert!(k >= -1);
        let (r, s) = (self.r as i64, self.s as i64);
        if self.r_ge_s() {
            let a = (0..self.a.len())
                .map(|i| &self.a[i] + int(ceil_div(k + 1 - (i as i64 + 1), r + 1)))
                .collect();
            let b = (0..self.b.len())
                .map(|j| &self.b[j] + int(ceil_div(k + 1 - self.selector[j] as i64, r)))
                .collect();
            (a, b)
        } else {
            let a = (0..self.a.len())
                .map(|i| &self.a[i] + int(ceil_div(k + 1 - self.sigma(i + 1) as i64, s + 1)))
                .collect();
            let b = (0..self.b.len())
                .map(|j| &self.b[j] + int(ceil_div(k + 1 - (j as i64 + 1), s)))
                .collect();
            (a, b)
        }
    }

    /// `a'_k`, defined for every `k` when `r ≥ s` and for `[k]_{s+1} ∈ Σ` otherwise.
    pub fn a_prime(&self, k: i64) -> Option<Rational> {
        if self.r_ge_s() {
            let r = self.r as i64;
            let i = cyclic(k, r + 1) as usize;
            Some(&self.a[i - 1] + int(ceil_div(k, r + 1)))
        } else {
            let s = self.s as i64;
            let l = self.sigma_position(cyclic(k, s + 1))?;
            Some(&self.a[l - 1] + int(ceil_div(k, s + 1)))
        }
    }

    /// `b'_k`, defined for `[k]_r ∈ Λ` when `r ≥ s` and for every `k` otherwise.
    pub fn b_prime(&self, k: i64) -> Option<Rational> {
        if self.r_ge_s() {
            let r = self.r as i64;
            let l = self.lambda_position(cyclic(k, r))?;
            Some(&self.b[l - 1] + int(ceil_div(k, r)))
        } else {
            let s = self.s as i64;
            let j = cyclic(k, s) as usize;
            Some(&self.b[j - 1] + int(ceil_div(k, s)))
        }
    }

    /// `α_{k+m}` from the shifted parameters.
    pub fn coefficient(&self, k: usize) -> Result<Rational> {
        if k == 0 && self.plain_first_coefficient {
            let num = product(self.a[..self.r].iter().cloned());
            let den = product(self.b.iter().cloned());
            nonzero(&den, 0, "b_1⋯b_s")?;
            return Ok(num / den);
        }
        let ki = k as i64;
        let (a, b) = self.shifted(ki);
        for (j, bj) in b.iter().enumerate() {
            nonzero(bj, ki, &format!("b_{}^({k})", j + 1))?;
        }
        let prod_b = product(b.iter().cloned());
        if self.r_ge_s() {
            let r = self.r as i64;
            let skip = cyclic(ki, r + 1) as usize - 1;
            let prod_a = product(a.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, v)| v.clone()));
            match self.lambda_position(cyclic(ki, r)) {
                None => Ok(prod_a / prod_b),
                Some(l) => {
                    let bl = &b[l - 1];
                    let shifted_down = bl - Rational::one();
                    nonzero(&shifted_down, ki, &format!("b_{l}^({k}) - 1"))?;
                    Ok((bl - &a[skip]) * prod_a / (shifted_down * prod_b))
                }
            }
        } else {
            let s = self.s as i64;
            let bj = &b[cyclic(ki, s) as usize - 1];
            let shifted_down = bj - Rational::one();
            nonzero(&shifted_down, ki, &format!("b_{}^({k}) - 1", cyclic(ki, s)))?;
            let den = shifted_down * prod_b;
            match self.sigma_position(cyclic(ki, s + 1)) {
                None => Ok(-product(a.iter().cloned()) / den),
                Some(l) => {
                    let rest = product(a.iter().enumerate().filter(|&(i, _)| i != l - 1).map(|(_, v)| v.clone()));
                    Ok((bj - &a[l - 1]) * rest / den)
                }
            }
        }
    }

    /// `α_{k+m}` from the primed sequences `a'`, `b'`.
    pub fn coefficient_primed(&self, k: usize) -> Result<Rational> {
        let ki = k as i64;
        let bp = |j: i64| -> Result<Rational> {
            let v = self.b_prime(j).expect("b' requested outside its domain");
            nonzero(&v, ki, &format!("b'_{j}"))?;
            Ok(v)
        };
        if self.r_ge_s() {
            let r = self.r as i64;
            let in_lambda = |j: i64| self.lambda_position(cyclic(j, r)).is_some();
            let num = product((1..=r).map(|i| self.a_prime(ki - i).unwrap()));
            if in_lambda(ki) {
                let mut den = Rational::one();
                for i in (0..=r).filter(|&i| in_lambda(ki - i)) {
                    den *= bp(ki - i)?;
                }
                let lead = self.b_prime(ki).unwrap() - self.a_prime(ki).unwrap();
                Ok(lead * num / den)
            } else {
                let mut den = Rational::one();
                for i in (1..r).filter(|&i| in_lambda(ki - i)) {
                    den *= bp(ki - i)?;
                }
                Ok(num / den)
            }
        } else {
            let s = self.s as i64;
            let in_sigma = |j: i64| self.sigma_position(cyclic(j, s + 1)).is_some();
            let num = product((1..=s).filter(|&i| in_sigma(ki - i)).map(|i| self.a_prime(ki - i).unwrap()));
            let mut den = Rational::one();
            for i in 0..=s {
                den *= bp(ki - i)?;
            }
            if in_sigma(ki) {
                let lead = self.b_prime(ki).unwrap() - self.a_prime(ki).unwrap();
                Ok(lead * num / den)
            } else {
                Ok(-num / den)
            }
        }
    }

    /// `α_{k+m}`, computed both ways and required to agree. The shift identity
    /// `b'_k - 1 = b'_{k-m}` is checked alongside whenever `b'_k` exists.
    pub fn checked_coefficient(&self, k: usize) -> Result<Rational> {
        let value = self.coefficient(k)?;
        if k == 0 && self.plain_first_coefficient {
            return Ok(value);
        }
        let primed = self.coefficient_primed(k)?;
        if primed != value {
            return Err(Error::Inconsistent(format!("α_{} is {value} but the primed form gives {primed}", k + self.m())));
        }
        let ki = k as i64;
        if let (Some(now), Some(before)) = (self.b_prime(ki), self.b_prime(ki - self.m() as i64)) {
            if now - Rational::one() != before {
                return Err(Error::Inconsistent(format!("b'_{ki} - 1 differs from b'_{}", ki - self.m() as i64)));
            }
        }
        Ok(value)
    }

    /// Lazily generated `α_m, α_{m+1}, …`.
    pub fn alpha_sequence(&self) -> AlphaSequence {
        let params = self.clone();
        let m = self.m();
        AlphaSequence::from_fn(m, move |j| params.checked_coefficient(j - m))
    }
}

fn product(values: impl Iterator<Item = Rational>) -> Rational {
    values.fold(Rational::one(), |acc, v| acc * v)
}

fn nonzero(value: &Rational, index: i64, name: &str) -> Result<()> {
    if value.is_zero() {
        Err(Error::Pole { index, factor: name.to_string() })
    } else {
        Ok(())
    }
}

/// `α_m, …, α_{m+count}` (inclusive), each checked in primed and unprimed form.
pub fn bcf_coefficients(p: &HypergeometricParams, count: usize) -> Result<Vec<Rational>> {
    (0..=count).map(|k| p.checked_coefficient(k)).collect()
}

pub fn shifted_params(p: &HypergeometricParams, k: i64) -> (Vec<Rational>, Vec<Rational>) {
    p.shifted(k)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// Index of the upper parameter `a_i`.
    pub i: usize,
    /// Index of the lower parameter `b_j`.
    pub j: usize,
    /// Which family of inequalities failed: 1 for the pairwise bounds, 2 for the last-parameter ratio.
    pub condition: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Positivity {
    AllPositive,
    /// Every coefficient is `≥ 0`; `boundary` is the first inequality met with equality.
    AllNonnegative { boundary: Witness },
    Fails { witness: Witness },
}

impl Positivity {
    pub fn is_positive(&self) -> bool {
        matches!(self, Positivity::AllPositive)
    }
}

/// Decides the sign of every coefficient from inequalities on the parameters
/// (positive parameters, `r ≥ s`).
pub fn positivity_certificate(p: &HypergeometricParams) -> Result<Positivity> {
    if !p.r_ge_s() {
        return Err(Error::InvalidRegime { r: p.r, s: p.s });
    }
    if p.a.iter().chain(&p.b).any(|v| !v.is_positive()) {
        return Err(Error::InvalidParams("positivity certificate needs positive parameters".into()));
    }
    let mut boundary = None;
    for j in 1..=p.s {
        let lambda = p.selector[j - 1];
        for i in 1..=p.r + 1 {
            let bound = if i <= lambda { p.a[i - 1].clone() } else { &p.a[i - 1] - Rational::one() };
            let witness = Witness { i, j, condition: 1 };
            let gap = &p.b[j - 1] - bound;
            if gap.is_negative() {
                return Ok(Positivity::Fails { witness });
            }
            if gap.is_zero() && boundary.is_none() {
                boundary = Some(witness);
            }
        }
    }
    if p.s > 0 && p.selector[p.s - 1] == p.r {
        let bs = &p.b[p.s - 1];
        let witness = Witness { i: p.r + 1, j: p.s, condition: 2 };
        let denom = bs - Rational::one();
        if denom.is_zero() {
            return Ok(Positivity::Fails { witness });
        }
        let ratio = (bs - &p.a[p.r]) / denom;
        if ratio.is_negative() {
            return Ok(Positivity::Fails { witness });
        }
        if ratio.is_zero() && boundary.is_none() {
            boundary = Some(witness);
        }
    }
    Ok(match boundary {
        None => Positivity::AllPositive,
        Some(boundary) => Positivity::AllNonnegative { boundary },
    })
}

/// `g_k(t)` truncated after `t^order`, for `k ≥ -1`.
pub fn g_series(p: &HypergeometricParams, k: i64, order: usize) -> Result<PowerSeries> {
    if k == -1 && p.plain_first_coefficient {
        // g_{-1} is whatever makes the first relation hold with the altered α_m.
        let g0 = g_series(p, 0, order)?;
        let gm = g_series(p, p.m() as i64, order)?;
        return Ok(&g0 - &gm.shift().scale(&p.coefficient(0)?));
    }
    let (a, b) = p.shifted(k);
    series_hypergeometric(&a, &b, order)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerGaussReport {
    pub passed: bool,
    /// First `(k, power)` where `g_k - g_{k-1} - α_{k+m} t g_{k+m}` is nonzero;
    /// `k = -1` flags the comparison of `g_0 / g_{-1}` with the path counts.
    pub first_failure: Option<(i64, usize)>,
}

/// Checks `g_k - g_{k-1} = α_{k+m} t g_{k+m}` for `0 ≤ k ≤ max_k` modulo
/// `t^{order+1}`, and that `g_0 / g_{-1}` counts weighted m-Dyck paths.
pub fn verify_euler_gauss(p: &HypergeometricParams, max_k: usize, order: usize) -> Result<EulerGaussReport> {
    verify_euler_gauss_with(p, &p.alpha_sequence(), max_k, order)
}

/// As [`verify_euler_gauss`] with caller-supplied coefficients.
pub fn verify_euler_gauss_with(
    p: &HypergeometricParams,
    alphas: &AlphaSequence,
    max_k: usize,
    order: usize,
) -> Result<EulerGaussReport> {
    let m = p.m();
    let series: Vec<PowerSeries> = (-1..=(max_k + m) as i64)
        .map(|k| g_series(p, k, order))
        .collect::<Result<_>>()?;
    let g = |k: i64| &series[(k + 1) as usize];
    for k in 0..=max_k as i64 {
        let lhs = g(k) - g(k - 1);
        let rhs = g(k + m as i64).shift().scale(&alphas.try_get(k as usize + m)?);
        if let Some(power) = (0..=order).find(|&n| lhs.coeff(n) != rhs.coeff(n)) {
            return Ok(EulerGaussReport { passed: false, first_failure: Some((k, power)) });
        }
    }
    let f0 = g(0).div(g(-1))?;
    let counts = sr_dp(m, alphas, order + 1)?.generalized().entries;
    if let Some(power) = (0..=order).find(|&n| f0.coeff(n) != counts.get(n, 0)) {
        return Ok(EulerGaussReport { passed: false, first_failure: Some((-1, power)) });
    }
    Ok(EulerGaussReport { passed: true, first_failure: None })
}

/// `Ŝ_{n,k}` in closed form for a family with `a_{r+1} = 1`:
/// `C(n + ⌈(k-m)/(m+1)⌉, n) ∏(a_i^{(k)})_n / ∏(b_j^{(k)})_n`.
/// For `k < m` this is the `n`-th moment of the `k`-th functional.
pub fn moments(p: &HypergeometricParams, k: usize, n: usize) -> Result<Rational> {
    if !p.has_unit_last() {
        return Err(Error::InvalidParams("moments need a_{r+1} = 1".into()));
    }
    let m = p.m() as i64;
    let (a, b) = p.shifted(k as i64);
    let lift = ceil_div(k as i64 - m, m + 1);
    let mut value = Rational::from_integer(binomial(n as i64 + lift, n as i64));
    for ai in &a[..p.r] {
        value *= pochhammer(ai, n);
    }
    for (j, bj) in b.iter().enumerate() {
        let den = pochhammer(bj, n);
        nonzero(&den, n as i64, &format!("(b_{}^({k}))_{n}", j + 1))?;
        value /= den;
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse_rational, ratio};

    fn q(v: &str) -> Rational {
        parse_rational(v).unwrap()
    }

    fn qs(vs: &[&str]) -> Vec<Rational> {
        vs.iter().map(|v| q(v)).collect()
    }

    #[test]
    fn validation() {
        assert!(HypergeometricParams::new(0, 0, vec![], qs(&["1"]), vec![]).is_err());
        assert!(HypergeometricParams::new(2, 1, vec![3], qs(&["1", "2", "3"]), qs(&["4"])).is_err());
        assert!(HypergeometricParams::new(2, 2, vec![2, 1], qs(&["1", "2", "3"]), qs(&["4", "5"])).is_err());
        assert!(HypergeometricParams::new(1, 2, vec![2], qs(&["1", "2"]), qs(&["4", "5"])).is_ok());
    }

    #[test]
    fn shift_examples() {
        let p = HypergeometricParams::with_unit_last(2, 2, vec![1, 2], qs(&["1/2", "3/4"]), qs(&["2", "5/2"])).unwrap();
        let (a, _) = p.shifted(-1);
        assert_eq!(a[2], int(0));
        assert_eq!(p.shifted(0), (p.a.clone(), p.b.clone()));
        let p = HypergeometricParams::with_unit_last(3, 1, vec![2], qs(&["1/2", "3/4", "5/6"]), qs(&["7/3"])).unwrap();
        for k in 0..3 {
            let (a, b) = p.shifted(k);
            for i in 0..3 {
                let bump = if (i as i64) < k { 1 } else { 0 };
                assert_eq!(a[i], &p.a[i] + int(bump));
            }
            let bump = if 2 <= k { 1 } else { 0 };
            assert_eq!(b[0], &p.b[0] + int(bump));
        }
    }

    #[test]
    fn gauss_ratio_coefficients() {
        let (a1, a2, b) = (q("1/3"), q("5/7"), q("9/4"));
        let p = HypergeometricParams::new(1, 1, vec![1], vec![a1.clone(), a2.clone()], vec![b.clone()]).unwrap();
        let alpha = bcf_coefficients(&p, 8).unwrap();
        for k in 0..4 {
            let kk = int(k);
            let odd = (&a1 + &kk) * (&b - &a2 + &kk) / ((&b + int(2 * k) - int(1)) * (&b + int(2 * k)));
            let even = (&a2 + &kk) * (&b - &a1 + &kk) / ((&b + int(2 * k)) * (&b + int(2 * k) + int(1)));
            assert_eq!(alpha[2 * k as usize], odd);
            assert_eq!(alpha[2 * k as usize + 1], even);
        }
    }

    #[test]
    fn pole_is_reported_with_index() {
        let p = HypergeometricParams::new(1, 1, vec![1], qs(&["1/2", "1/3"]), qs(&["-2"])).unwrap();
        let err = bcf_coefficients(&p, 6).unwrap_err();
        assert!(matches!(err, Error::Pole { .. }), "{err:?}");
    }

    #[test]
    fn certificate_examples() {
        let p = HypergeometricParams::with_unit_last(2, 2, vec![1, 2], qs(&["1/2", "3/4"]), qs(&["2", "5/2"])).unwrap();
        assert_eq!(positivity_certificate(&p).unwrap(), Positivity::AllPositive);
        let p = HypergeometricParams::new(1, 1, vec![1], qs(&["3/2", "1"]), qs(&["3/2"])).unwrap();
        let boundary = Witness { i: 1, j: 1, condition: 1 };
        assert_eq!(positivity_certificate(&p).unwrap(), Positivity::AllNonnegative { boundary });
        let p = HypergeometricParams::new(1, 2, vec![1], qs(&["1", "1"]), qs(&["2", "3"])).unwrap();
        assert_eq!(positivity_certificate(&p), Err(Error::InvalidRegime { r: 1, s: 2 }));
        let p = HypergeometricParams::new(1, 1, vec![1], qs(&["3", "1"]), qs(&["2"])).unwrap();
        assert_eq!(positivity_certificate(&p).unwrap(), Positivity::Fails { witness: Witness { i: 1, j: 1, condition: 1 } });
    }

    #[test]
    fn certificate_reduces_with_unit_last() {
        // With a_{r+1} = 1 the conditions read b_j > a_i - ⌈(i - λ_j)/r⌉.
        let r = 3;
        for &(lambda, bval) in &[(1usize, "3/4"), (2, "5/4"), (3, "9/10"), (3, "2")] {
            let p = HypergeometricParams::with_unit_last(r, 1, vec![lambda], qs(&["1/2", "2/3", "3/4"]), qs(&[bval])).unwrap();
            let reduced = (1..=r + 1).all(|i| {
                let shift = ceil_div(i as i64 - lambda as i64, r as i64);
                p.b[0] > &p.a[i - 1] - int(shift)
            });
            let cond2 = lambda != r || !p.b[0].is_one();
            assert_eq!(positivity_certificate(&p).unwrap().is_positive(), reduced && cond2, "λ={lambda}, b={bval}");
        }
    }

    #[test]
    fn positive_certificate_gives_positive_prefix() {
        let p = HypergeometricParams::with_unit_last(2, 1, vec![2], qs(&["1/2", "3/4"]), qs(&["2"])).unwrap();
        assert!(positivity_certificate(&p).unwrap().is_positive());
        assert!(bcf_coefficients(&p, 30).unwrap().iter().all(Signed::is_positive));
    }

    #[test]
    fn euler_gauss_and_its_soundness() {
        let p = HypergeometricParams::new(2, 2, vec![1, 2], qs(&["1/3", "2/5", "3/7"]), qs(&["9/4", "11/3"])).unwrap();
        assert!(verify_euler_gauss(&p, 6, 8).unwrap().passed);
        for lambda in [1, 2] {
            let p = HypergeometricParams::new(2, 1, vec![lambda], qs(&["1/3", "2/5", "3/7"]), qs(&["9/4"])).unwrap();
            assert!(verify_euler_gauss(&p, 6, 8).unwrap().passed);
        }
        let bad = p.alpha_sequence().with_override(p.m(), int(7));
        let report = verify_euler_gauss_with(&p, &bad, 6, 8).unwrap();
        assert_eq!(report.first_failure.map(|f| f.0), Some(0));
    }

    #[test]
    fn plain_first_coefficient_only_moves_g_minus_one() {
        let p = HypergeometricParams::new(2, 2, vec![1, 2], qs(&["1/3", "2/5", "3/7"]), qs(&["9/4", "11/3"])).unwrap();
        let alt = p.clone().plain_first();
        assert_eq!(alt.coefficient(0).unwrap(), q("1/3") * q("2/5") / (q("9/4") * q("11/3")));
        assert_eq!(bcf_coefficients(&alt, 6).unwrap()[1..], bcf_coefficients(&p, 6).unwrap()[1..]);
        assert!(verify_euler_gauss(&alt, 6, 8).unwrap().passed);
    }

    #[test]
    fn moment_values() {
        let p = HypergeometricParams::with_unit_last(2, 2, vec![1, 2], qs(&["1/2", "3/4"]), qs(&["2", "5/2"])).unwrap();
        for k in 0..=2 {
            assert_eq!(moments(&p, k, 0).unwrap(), int(1));
        }
        let expected = pochhammer(&q("1/2"), 3) * pochhammer(&q("3/4"), 3) / (pochhammer(&q("2"), 3) * pochhammer(&q("5/2"), 3));
        assert_eq!(moments(&p, 0, 3).unwrap(), expected);
        assert_eq!(g_series(&p, -1, 4).unwrap(), PowerSeries::one(4));
        let g0 = g_series(&p, 0, 4).unwrap();
        assert_eq!(g0.coeff(3), &expected);
        assert_eq!(moments(&p, 0, 1).unwrap(), ratio(3, 40));
    }

    #[test]
    fn euler_gauss_across_regimes() {
        let a = qs(&["1/3", "2/5", "3/7", "4/9"]);
        let b = qs(&["9/4", "11/3", "13/5"]);
        let cases: &[(usize, usize, &[usize])] =
            &[(1, 0, &[]), (0, 1, &[]), (0, 2, &[]), (1, 2, &[1]), (1, 2, &[2]), (1, 3, &[2]), (3, 1, &[1]), (3, 1, &[3]), (3, 2, &[1, 3])];
        for &(r, s, sel) in cases {
            let p = HypergeometricParams::new(r, s, sel.to_vec(), a[..=r].to_vec(), b[..s].to_vec()).unwrap();
            let report = verify_euler_gauss(&p, 6, 8).unwrap();
            assert!(report.passed, "({r},{s}) {sel:?}: {report:?}");
        }
    }

    #[test]
    fn moments_are_modified_sr_columns() {
        let p = HypergeometricParams::with_unit_last(1, 2, vec![2], qs(&["1/3"]), qs(&["9/4", "11/3"])).unwrap();
        let hat = sr_dp(p.m(), &p.alpha_sequence(), 6).unwrap().modified().entries;
        for k in 0..=p.m() {
            for n in 0..6 {
                assert_eq!(&moments(&p, k, n).unwrap(), hat.get(n, k), "k={k} n={n}");
            }
        }
    }
}
