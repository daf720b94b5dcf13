use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::Serialize;

use super::{int, Rational};

/// Dense univariate polynomial with rational coefficients, lowest degree first.
/// The zero polynomial has no coefficients; otherwise the last one is nonzero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Poly {
    #[serde(serialize_with = "crate::serial::rationals")]
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    /// `x - root`.
    pub fn linear(root: &Rational) -> Self {
        Self::new(vec![-root.clone(), Rational::one()])
    }

    pub fn from_roots(roots: &[Rational]) -> Self {
        roots.iter().fold(Self::constant(Rational::one()), |acc, z| &acc * &Self::linear(z))
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + super::to_f64(c))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|v| v * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&(Rational::one() / self.leading()))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * int(k as i64))
                .collect(),
        )
    }

    pub fn mul_x(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rational::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(coeffs)
    }

    /// Applies `x d/dx + c`, which scales the coefficient of `x^k` by `k + c`.
    pub fn euler_shift(&self, c: &Rational) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, v)| v * (int(k as i64) + c))
                .collect(),
        )
    }

    /// Substitutes `x -> offset + slope * x`.
    pub fn compose_affine(&self, offset: &Rational, slope: &Rational) -> Self {
        let inner = Self::new(vec![offset.clone(), slope.clone()]);
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * &inner) + &Self::constant(c.clone()))
    }

    /// Coefficients reversed as a polynomial of formal degree `n`: `x^n p(1/x)`.
    pub fn reversed(&self, n: usize) -> Self {
        assert!(self.degree().map_or(true, |d| d <= n));
        Self::new((0..=n).map(|k| self.coeff(n - k)).collect())
    }

    /// Euclidean division, returning `(quotient, remainder)`.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let d = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let Some(top) = self.degree().filter(|&t| t >= d) else {
            return (Self::zero(), self.clone());
        };
        let mut quot = vec![Rational::zero(); top - d + 1];
        for k in (0..=top - d).rev() {
            let q = &rem[k + d] / &lead;
            if q.is_zero() {
                continue;
            }
            for (j, c) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &q * c;
            }
            quot[k] = q;
        }
        rem.truncate(d);
        (Self::new(quot), Self::new(rem))
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Primitive integer multiple with positive leading coefficient.
    pub fn primitive_integer(&self) -> Vec<num_bigint::BigInt> {
        use num_integer::Integer;
        use num_traits::Signed;
        let lcm = self
            .coeffs
            .iter()
            .fold(num_bigint::BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<_> = self.coeffs.iter().map(|c| (c * &lcm).to_integer()).collect();
        let g = ints.iter().fold(num_bigint::BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if self.leading().is_negative() { -1 } else { 1 };
        if g.is_zero() {
            return ints;
        }
        ints.into_iter().map(|c| c * sign / &g).collect()
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("({c})"),
                1 => format!("({c})x"),
                _ => format!("({c})x^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    #[test]
    fn arithmetic_and_evaluation() {
        let p = Poly::from_roots(&[int(1), int(-1)]);
        assert_eq!(p.coeffs(), &[int(-1), int(0), int(1)]);
        assert_eq!(p.eval(&int(3)), int(8));
        assert_eq!(p.derivative(), Poly::new(vec![int(0), int(2)]));
        assert_eq!((&p - &p), Poly::zero());
        assert_eq!(p.degree(), Some(2));
    }

    #[test]
    fn division_and_gcd() {
        let a = Poly::from_roots(&[int(1), int(2), ratio(1, 3)]);
        let b = Poly::from_roots(&[int(2), int(5)]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert_eq!(a.gcd(&b), Poly::linear(&int(2)));
    }

    #[test]
    fn affine_composition() {
        let p = Poly::new(vec![int(0), int(0), int(1)]);
        let q = p.compose_affine(&int(1), &int(2));
        assert_eq!(q.coeffs(), &[int(1), int(4), int(4)]);
    }

    #[test]
    fn euler_operator_and_reversal() {
        let p = Poly::new(vec![int(1), int(1), int(1)]);
        assert_eq!(p.euler_shift(&int(1)).coeffs(), &[int(1), int(2), int(3)]);
        assert_eq!(Poly::x().reversed(3).coeffs(), &[int(0), int(0), int(1)]);
    }

    #[test]
    fn primitive_form() {
        let p = Poly::new(vec![ratio(-1, 2), ratio(3, 4)]);
        let ints: Vec<i64> = p.primitive_integer().iter().map(|c| c.try_into().unwrap()).collect();
        assert_eq!(ints, vec![-2, 3]);
    }
}
