//! Weight sequences `α_m, α_{m+1}, …` attached to the m-falls of a path.

use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::Zero;

use crate::error::Result;
use crate::exact::Rational;

type Generator = dyn Fn(usize) -> Result<Rational> + Send + Sync;

/// Lazily generated, memoized weights. Index `j` addresses `α_j`; indices below
/// `m` read as zero, matching the padding used by the production-matrix formulas.
#[derive(Clone)]
pub struct AlphaSequence {
    m: usize,
    generator: Arc<Generator>,
    cache: Arc<Mutex<Vec<Rational>>>,
}

impl AlphaSequence {
    /// `generator(j)` must return `α_j` for every `j >= m`.
    pub fn from_fn(m: usize, generator: impl Fn(usize) -> Result<Rational> + Send + Sync + 'static) -> Self {
        assert!(m >= 1, "m must be positive");
        Self { m, generator: Arc::new(generator), cache: Arc::new(Mutex::new(Vec::new())) }
    }

    /// Finite sequence `α_m, …, α_{m+len-1}`; reads past the end are zero.
    pub fn from_values(m: usize, values: Vec<Rational>) -> Self {
        let seq = Self::from_fn(m, move |_| Ok(Rational::zero()));
        *seq.cache.lock().unwrap() = values;
        seq
    }

    pub fn constant(m: usize, value: Rational) -> Self {
        Self::from_fn(m, move |_| Ok(value.clone()))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `α_j`, generating and caching any missing prefix.
    pub fn try_get(&self, j: usize) -> Result<Rational> {
        if j < self.m {
            return Ok(Rational::zero());
        }
        let offset = j - self.m;
        let mut cache = self.cache.lock().unwrap();
        while cache.len() <= offset {
            let next = (self.generator)(self.m + cache.len())?;
            cache.push(next);
        }
        Ok(cache[offset].clone())
    }

    /// Like [`try_get`](Self::try_get) but panics on a generator error.
    pub fn get(&self, j: usize) -> Rational {
        self.try_get(j).unwrap_or_else(|e| panic!("α_{j} unavailable: {e}"))
    }

    /// `α_m, …, α_{m+count-1}`.
    pub fn prefix(&self, count: usize) -> Result<Vec<Rational>> {
        (self.m..self.m + count).map(|j| self.try_get(j)).collect()
    }

    /// Copy with `α_j` replaced by `value`.
    pub fn with_override(&self, j: usize, value: Rational) -> Self {
        let base = self.clone();
        Self::from_fn(self.m, move |i| if i == j { Ok(value.clone()) } else { base.try_get(i) })
    }
}

impl fmt::Debug for AlphaSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cached = self.cache.lock().unwrap().len();
        f.debug_struct("AlphaSequence").field("m", &self.m).field("cached", &cached).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;
    use std::sync::atomic::{AtomicUsize, Ordering};

    #[test]
    fn padding_and_memoization() {
        let calls = Arc::new(AtomicUsize::new(0));
        let counter = calls.clone();
        let seq = AlphaSequence::from_fn(2, move |j| {
            counter.fetch_add(1, Ordering::SeqCst);
            Ok(int(j as i64))
        });
        assert_eq!(seq.get(1), int(0));
        assert_eq!(seq.get(4), int(4));
        assert_eq!(seq.get(3), int(3));
        assert_eq!(calls.load(Ordering::SeqCst), 3);
    }

    #[test]
    fn finite_values_pad_with_zero() {
        let seq = AlphaSequence::from_values(1, vec![int(5), int(6)]);
        assert_eq!(seq.prefix(3).unwrap(), vec![int(5), int(6), int(0)]);
        assert_eq!(seq.with_override(2, int(9)).get(2), int(9));
    }
}
