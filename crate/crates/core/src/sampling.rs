//! Seeded random inputs for parameter sweeps.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alpha::AlphaSequence;
use crate::bcf::{positivity_certificate, HypergeometricParams};
use crate::exact::{int, ratio, Rational};

/// `(r, s, selector)` triples covering both regimes and every selector choice
/// for `m ≤ 3` used by the cross-validation sweeps.
pub fn regime_grid() -> Vec<(usize, usize, Vec<usize>)> {
    vec![
        (1, 0, vec![]),
        (1, 1, vec![1]),
        (2, 0, vec![]),
        (2, 1, vec![1]),
        (2, 1, vec![2]),
        (2, 2, vec![1, 2]),
        (3, 1, vec![1]),
        (3, 1, vec![2]),
        (3, 1, vec![3]),
        (1, 2, vec![1]),
        (1, 2, vec![2]),
    ]
}

fn non_integer(rng: &mut ChaCha8Rng, max_value: i64) -> Rational {
    loop {
        let den = rng.gen_range(2..=9i64);
        let num = rng.gen_range(1..=max_value * den);
        if num % den != 0 {
            return ratio(num, den);
        }
    }
}

/// Infinite sequence of positive non-integer rationals below 4; `α_j` depends
/// only on `(seed, j)`.
pub fn random_alphas(m: usize, seed: u64) -> AlphaSequence {
    AlphaSequence::from_fn(m, move |j| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ j as u64);
        Ok(non_integer(&mut rng, 4))
    })
}

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn next_seed(&mut self) -> u64 {
        self.rng.gen()
    }

    /// Positive non-integer rational below `max_value`.
    pub fn rational(&mut self, max_value: i64) -> Rational {
        non_integer(&mut self.rng, max_value)
    }

    /// Generic parameters with `a_{r+1} = 1`: `a_i < 2`, `b_j < 4`, and no
    /// integer among the `a_i`, `b_j`, or their pairwise differences, so no
    /// closed-form value vanishes by accident.
    pub fn params(&mut self, r: usize, s: usize, selector: &[usize]) -> HypergeometricParams {
        loop {
            let a: Vec<Rational> = (0..r).map(|_| self.rational(2)).collect();
            let b: Vec<Rational> = (0..s).map(|_| self.rational(4)).collect();
            let values: Vec<&Rational> = a.iter().chain(&b).collect();
            let generic = values.iter().tuple_combinations().all(|(x, y)| !(*x - *y).is_integer());
            if generic {
                return HypergeometricParams::with_unit_last(r, s, selector.to_vec(), a, b).expect("grid selectors are valid");
            }
        }
    }

    /// Parameters with an all-positive certificate, by rejection.
    pub fn positive_params(&mut self, r: usize, s: usize, selector: &[usize]) -> HypergeometricParams {
        assert!(r >= s, "positivity is certified only for r ≥ s");
        loop {
            let a: Vec<Rational> = (0..r).map(|_| self.rational(1)).collect();
            let b: Vec<Rational> = (0..s).map(|_| self.rational(3) + int(1)).collect();
            let p = HypergeometricParams::with_unit_last(r, s, selector.to_vec(), a, b).expect("grid selectors are valid");
            if positivity_certificate(&p).is_ok_and(|c| c.is_positive()) {
                return p;
            }
        }
    }
}
