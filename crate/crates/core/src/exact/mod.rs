//! Exact rational scalars, Pochhammer kernels, hypergeometric sums, and the
//! polynomial, series and dense-matrix containers used throughout the crate.

mod matrix;
mod poly;
mod series;

pub use matrix::RatMatrix;
pub use poly::Poly;
pub use series::PowerSeries;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator. Displays and parses as `p/q` (or `p`).
pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let value: Rational = text
        .parse()
        .map_err(|_| Error::InvalidParams(format!("not a rational: {text:?}")))?;
    Ok(value)
}

pub fn parse_rational_list(text: &str) -> Result<Vec<Rational>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(parse_rational).collect()
}

/// Nearest `f64`, computed from the exact value (no intermediate overflow).
pub fn to_f64(x: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    if let Some(v) = x.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let (n, d) = (x.numer(), x.denom());
    let shift = n.bits() as i64 - d.bits() as i64;
    let scaled = if shift > 0 {
        Rational::new(n.clone(), d.clone() << (shift as usize))
    } else {
        Rational::new(n.clone() << ((-shift) as usize), d.clone())
    };
    scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
}

/// Returns `Some(k)` when `x` is the integer `k`.
pub fn as_integer(x: &Rational) -> Option<BigInt> {
    x.is_integer().then(|| x.to_integer())
}

/// Rising factorial `z (z+1) ... (z+n-1)`.
pub fn pochhammer(z: &Rational, n: usize) -> Rational {
    let mut acc = Rational::one();
    let mut factor = z.clone();
    for _ in 0..n {
        acc *= &factor;
        factor += Rational::one();
    }
    acc
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Binomial coefficient `C(n, k)` for `n >= 0`; zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Ceiling of `num / den` for `den > 0`, correct for negative numerators.
pub fn ceil_div(num: i64, den: i64) -> i64 {
    debug_assert!(den > 0);
    -(-num).div_euclid(den)
}

/// The cyclic representative `((k-1) mod n) + 1`, always in `1..=n`.
pub fn cyclic(k: i64, n: i64) -> i64 {
    (k - 1).rem_euclid(n) + 1
}

/// Index of the first parameter that is a nonpositive integer `-j` with `j < limit`.
fn first_pole(den: &[Rational], limit: usize) -> Option<(usize, usize)> {
    den.iter().enumerate().find_map(|(i, b)| {
        let k = as_integer(b)?;
        if k.is_positive() {
            return None;
        }
        let depth: usize = (-k).try_into().ok()?;
        (depth < limit).then_some((i, depth + 1))
    })
}

/// Finite sum of the first `degree + 1` terms of the generalized
/// hypergeometric series at `z`. The caller places `-degree` among `num`.
pub fn terminating_hypergeometric(
    num: &[Rational],
    den: &[Rational],
    degree: usize,
    z: &Rational,
) -> Result<Rational> {
    if let Some((i, k)) = first_pole(den, degree) {
        return Err(Error::Pole {
            index: k as i64,
            factor: format!("denominator parameter {} = {}", i + 1, den[i]),
        });
    }
    let mut term = Rational::one();
    let mut total = Rational::one();
    for k in 0..degree {
        let kk = int(k as i64);
        let mut step = z.clone() / int(k as i64 + 1);
        for a in num {
            step *= a + &kk;
        }
        for b in den {
            step /= b + &kk;
        }
        term *= step;
        if term.is_zero() {
            break;
        }
        total += &term;
    }
    Ok(total)
}

/// Truncated power series of the generalized hypergeometric function in `t`,
/// keeping coefficients of `t^0 .. t^order`.
pub fn series_hypergeometric(num: &[Rational], den: &[Rational], order: usize) -> Result<PowerSeries> {
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut term = Rational::one();
    coeffs.push(term.clone());
    for n in 0..order {
        if term.is_zero() {
            coeffs.push(Rational::zero());
            continue;
        }
        let nn = int(n as i64);
        let mut numer = Rational::one();
        for a in num {
            numer *= a + &nn;
        }
        if numer.is_zero() {
            term = Rational::zero();
            coeffs.push(Rational::zero());
            continue;
        }
        let mut denom = int(n as i64 + 1);
        for (i, b) in den.iter().enumerate() {
            let f = b + &nn;
            if f.is_zero() {
                return Err(Error::Pole {
                    index: n as i64 + 1,
                    factor: format!("denominator parameter {} = {}", i + 1, b),
                });
            }
            denom *= f;
        }
        term = term * numer / denom;
        coeffs.push(term.clone());
    }
    Ok(PowerSeries::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(text: &str) -> Rational {
        parse_rational(text).unwrap()
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(&r("7/3"), 0), int(1));
        assert_eq!(pochhammer(&int(1), 4), int(24));
        assert_eq!(pochhammer(&r("1/2"), 2), r("3/4"));
        assert_eq!(pochhammer(&int(-2), 3), int(0));
    }

    #[test]
    fn rational_text_round_trip() {
        assert_eq!(r("6/4").to_string(), "3/2");
        assert_eq!(r("-4/2").to_string(), "-2");
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn ceiling_and_cycle() {
        assert_eq!(ceil_div(-3, 2), -1);
        assert_eq!(ceil_div(3, 2), 2);
        assert_eq!(ceil_div(0, 5), 0);
        assert_eq!(cyclic(0, 3), 3);
        assert_eq!(cyclic(-1, 3), 2);
        assert_eq!(cyclic(4, 3), 1);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(5, 7), BigInt::from(0));
        assert_eq!(binomial(0, 0), BigInt::from(1));
    }

    #[test]
    fn terminating_examples() {
        let v = terminating_hypergeometric(&[int(-2)], &[], 2, &int(1)).unwrap();
        assert_eq!(v, int(0));
        let b = r("5/2");
        let v = terminating_hypergeometric(&[int(-3), b.clone()], &[b], 3, &int(2)).unwrap();
        assert_eq!(v, int(-1));
        let v = terminating_hypergeometric(&[int(-2), int(4), int(5)], &[int(3), int(4)], 2, &int(1)).unwrap();
        assert_eq!(v, r("1/6"));
    }

    #[test]
    fn terminating_detects_poles() {
        let err = terminating_hypergeometric(&[int(-3)], &[int(-1)], 3, &int(1)).unwrap_err();
        assert!(matches!(err, Error::Pole { index: 2, .. }));
        // -n with a lower parameter -n is fine: the pole sits past the last term.
        assert!(terminating_hypergeometric(&[int(-2)], &[int(-2)], 2, &int(1)).is_ok());
    }

    #[test]
    fn series_examples() {
        let e = series_hypergeometric(&[], &[], 3).unwrap();
        assert_eq!(e.coeffs(), &[int(1), int(1), r("1/2"), r("1/6")]);
        let g = series_hypergeometric(&[int(1), int(1)], &[int(1)], 3).unwrap();
        assert_eq!(g.coeffs(), &[int(1), int(1), int(1), int(1)]);
        let h = series_hypergeometric(&[r("1/2"), int(1)], &[], 2).unwrap();
        assert_eq!(h.coeffs(), &[int(1), r("1/2"), r("3/4")]);
    }

    #[test]
    fn series_pole_is_indexed() {
        let err = series_hypergeometric(&[int(1)], &[int(-1)], 4).unwrap_err();
        assert!(matches!(err, Error::Pole { index: 2, .. }));
    }

    #[test]
    fn float_conversion_of_huge_values() {
        let big = Rational::new(BigInt::from(3) << 2000usize, BigInt::from(1) << 2000usize);
        assert_eq!(to_f64(&big), 3.0);
    }
}
