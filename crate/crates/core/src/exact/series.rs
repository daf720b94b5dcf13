use std::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};
use serde::Serialize;

use super::Rational;
use crate::error::{Error, Result};

/// Formal power series in `t` truncated after `t^order`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerSeries {
    #[serde(serialize_with = "crate::serial::rationals")]
    coeffs: Vec<Rational>,
}

impl PowerSeries {
    /// Builds a series whose order is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a power series keeps at least t^0");
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(vec![Rational::zero(); order + 1])
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Rational::one();
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &Rational {
        &self.coeffs[n]
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order());
        Self::new(self.coeffs[..=order].to_vec())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Multiplication by `t`, keeping the same order.
    pub fn shift(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        coeffs.push(Rational::zero());
        coeffs.extend(self.coeffs[..self.order()].iter().cloned());
        Self::new(coeffs)
    }

    /// Quotient `self / divisor`; the divisor must have a nonzero constant term.
    pub fn div(&self, divisor: &PowerSeries) -> Result<Self> {
        let c0 = divisor.coeffs[0].clone();
        if c0.is_zero() {
            return Err(Error::NonUnitDivisor);
        }
        let order = self.order().min(divisor.order());
        let mut q: Vec<Rational> = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut acc = self.coeffs[n].clone();
            for (k, qk) in q.iter().enumerate() {
                acc -= qk * &divisor.coeffs[n - k];
            }
            q.push(acc / &c0);
        }
        Ok(Self::new(q))
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;
    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        let order = self.order().min(rhs.order());
        PowerSeries::new((0..=order).map(|n| &self.coeffs[n] + &rhs.coeffs[n]).collect())
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;
    fn sub(self, rhs: &PowerSeries) -> PowerSeries {
        let order = self.order().min(rhs.order());
        PowerSeries::new((0..=order).map(|n| &self.coeffs[n] - &rhs.coeffs[n]).collect())
    }
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;
    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        let order = self.order().min(rhs.order());
        let coeffs = (0..=order)
            .map(|n| {
                (0..=n).fold(Rational::zero(), |acc, k| acc + &self.coeffs[k] * &rhs.coeffs[n - k])
            })
            .collect();
        PowerSeries::new(coeffs)
    }
}
