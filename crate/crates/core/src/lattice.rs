//! Brute-force enumeration of partial m-Dyck paths.
//!
//! Steps are rises `(1, 1)` and m-falls `(1, -m)`; heights never go negative.
//! A fall leaving height `i` carries weight `α_i`. Everything here is a plain
//! depth-first search with an explicit stack, used as the reference for the
//! dynamic-programming and closed-form computations elsewhere.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::alpha::AlphaSequence;
use crate::error::{Error, Result};
use crate::exact::Rational;

pub const DEFAULT_CAP: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PathSpec {
    pub m: usize,
    pub start: (usize, usize),
    pub end: (usize, usize),
}

impl PathSpec {
    pub fn new(m: usize, start: (usize, usize), end: (usize, usize)) -> Self {
        assert!(m >= 1);
        Self { m, start, end }
    }

    fn length(&self) -> Option<usize> {
        self.end.0.checked_sub(self.start.0)
    }

    /// Whether `end` is still reachable from `(x, h)`.
    fn reachable_from(&self, x: usize, h: usize) -> bool {
        let Some(steps) = self.end.0.checked_sub(x) else { return false };
        let steps = steps as i64;
        let climb = self.end.1 as i64 - h as i64;
        let falls = steps - climb;
        falls >= 0 && falls % (self.m as i64 + 1) == 0 && steps - falls / (self.m as i64 + 1) >= 0
    }
}

fn check_cap(spec: &PathSpec, cap: usize) -> Result<()> {
    match spec.length() {
        Some(len) if len > cap => Err(Error::CapExceeded { len, cap }),
        _ => Ok(()),
    }
}

/// Every path from `spec.start` to `spec.end`, each given as its list of heights.
pub fn enumerate_paths(spec: &PathSpec, cap: usize) -> Result<Vec<Vec<usize>>> {
    check_cap(spec, cap)?;
    let mut paths = Vec::new();
    if !spec.reachable_from(spec.start.0, spec.start.1) {
        return Ok(paths);
    }
    let mut stack = vec![vec![spec.start.1]];
    while let Some(path) = stack.pop() {
        let x = spec.start.0 + path.len() - 1;
        let h = *path.last().unwrap();
        if x == spec.end.0 {
            paths.push(path);
            continue;
        }
        if h >= spec.m && spec.reachable_from(x + 1, h - spec.m) {
            let mut next = path.clone();
            next.push(h - spec.m);
            stack.push(next);
        }
        if spec.reachable_from(x + 1, h + 1) {
            let mut next = path;
            next.push(h + 1);
            stack.push(next);
        }
    }
    Ok(paths)
}

/// Sum over paths of the product of fall weights, accumulated during the search.
pub fn oracle_weight_sum(spec: &PathSpec, alphas: &AlphaSequence, cap: usize) -> Result<Rational> {
    check_cap(spec, cap)?;
    let mut total = Rational::zero();
    if !spec.reachable_from(spec.start.0, spec.start.1) {
        return Ok(total);
    }
    let mut stack = vec![(spec.start.0, spec.start.1, Rational::one())];
    while let Some((x, h, weight)) = stack.pop() {
        if x == spec.end.0 {
            total += weight;
            continue;
        }
        if h >= spec.m && spec.reachable_from(x + 1, h - spec.m) {
            stack.push((x + 1, h - spec.m, &weight * alphas.try_get(h)?));
        }
        if spec.reachable_from(x + 1, h + 1) {
            stack.push((x + 1, h + 1, weight));
        }
    }
    Ok(total)
}

/// Weight sums for every endpoint reachable from `start` in at most `max_len`
/// steps, from a single search.
///
/// Weights are rescaled to integers over the common denominator of the α that
/// can occur, so the inner loop runs on machine integers and only falls back to
/// big integers if a sum overflows.
pub fn weight_sums_from(
    m: usize,
    start: (usize, usize),
    max_len: usize,
    alphas: &AlphaSequence,
    cap: usize,
) -> Result<BTreeMap<(usize, usize), Rational>> {
    if max_len > cap {
        return Err(Error::CapExceeded { len: max_len, cap });
    }
    let top = start.1 + max_len;
    let weights: Vec<Rational> = (0..=top).map(|h| alphas.try_get(h)).collect::<Result<_>>()?;
    let denom = weights.iter().fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
    let scaled: Vec<BigInt> = weights.iter().map(|w| (w * &denom).to_integer()).collect();

    let sums = match search::<u128>(m, start, max_len, &scaled) {
        Some(sums) => sums.into_iter().map(|(k, v)| (k, BigInt::from(v))).collect(),
        None => search::<BigInt>(m, start, max_len, &scaled).expect("big integers do not overflow"),
    };
    Ok(sums
        .into_iter()
        .map(|((x, h), numer)| {
            let falls = ((x - start.0) as i64 - (h as i64 - start.1 as i64)) / (m as i64 + 1);
            let scale = num_traits::pow(denom.clone(), falls as usize);
            ((x, h), Rational::new(numer, scale))
        })
        .collect())
}

trait Weight: Clone + Sized {
    fn unit() -> Self;
    fn times(&self, factor: &BigInt) -> Option<Self>;
    fn accumulate(&mut self, other: &Self) -> Option<()>;
}

impl Weight for u128 {
    fn unit() -> Self {
        1
    }
    fn times(&self, factor: &BigInt) -> Option<Self> {
        self.checked_mul(u128::try_from(factor).ok()?)
    }
    fn accumulate(&mut self, other: &Self) -> Option<()> {
        *self = self.checked_add(*other)?;
        Some(())
    }
}

impl Weight for BigInt {
    fn unit() -> Self {
        BigInt::one()
    }
    fn times(&self, factor: &BigInt) -> Option<Self> {
        Some(self * factor)
    }
    fn accumulate(&mut self, other: &Self) -> Option<()> {
        *self += other;
        Some(())
    }
}

fn search<W: Weight>(
    m: usize,
    start: (usize, usize),
    max_len: usize,
    scaled: &[BigInt],
) -> Option<BTreeMap<(usize, usize), W>> {
    let mut sums: BTreeMap<(usize, usize), W> = BTreeMap::new();
    let mut stack = vec![(start.0, start.1, W::unit())];
    while let Some((x, h, weight)) = stack.pop() {
        match sums.get_mut(&(x, h)) {
            Some(acc) => acc.accumulate(&weight)?,
            None => {
                sums.insert((x, h), weight.clone());
            }
        }
        if x - start.0 == max_len {
            continue;
        }
        if h >= m && !scaled[h].is_zero() {
            stack.push((x + 1, h - m, weight.times(&scaled[h])?));
        }
        stack.push((x + 1, h + 1, weight));
    }
    Some(sums)
}
