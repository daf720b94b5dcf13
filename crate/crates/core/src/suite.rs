//! The cross-validation suite behind `verify`: every exact identity checked
//! against an independent construction over a seeded sweep.

use std::cmp::Ordering;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::alpha::AlphaSequence;
use crate::bcf::{bcf_coefficients, moments, verify_euler_gauss, HypergeometricParams};
use crate::exact::{int, ratio, RatMatrix, Rational};
use crate::lattice::{weight_sums_from, DEFAULT_CAP};
use crate::mop::{
    constant_case, constant_case_gamma, derivative_shift_check, explicit_poly, ode_check, orthogonality_report,
    polys_explicit, polys_via_recurrence, recurrence_coeffs,
};
use crate::production::{output_matrix, production_bidiagonal, production_closed_form};
use crate::sampling::{random_alphas, regime_grid, Sampler};
use crate::sr::{sr_dp, verify_factorization};
use crate::tp::{is_oscillation, is_totally_positive};
use crate::zeros::{charpoly_hessenberg, check_interlacing, isolate_real_roots, ZeroSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteOptions {
    pub quick: bool,
    /// Overrides the polynomial degree bound of the polynomial checks.
    pub size: Option<usize>,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { quick: false, size: None, seed: 0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub check: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Sizes of one suite run.
#[derive(Clone, Debug)]
struct Sizes {
    oracle_draws: usize,
    path_len: usize,
    factor_draws: usize,
    factor_size: usize,
    production_size: usize,
    euler_gauss: (usize, usize),
    moment_degree: usize,
    poly_degree: usize,
    ortho_degree: usize,
    duality_size: usize,
    ode_degree: usize,
    constant_degree: usize,
    zero_degree: usize,
    tp_size: usize,
    tp_order: usize,
    oscillation_size: usize,
}

impl Sizes {
    fn new(options: &SuiteOptions) -> Self {
        let mut sizes = if options.quick {
            Self {
                oracle_draws: 3,
                path_len: 14,
                factor_draws: 2,
                factor_size: 6,
                production_size: 7,
                euler_gauss: (4, 6),
                moment_degree: 6,
                poly_degree: 8,
                ortho_degree: 7,
                duality_size: 7,
                ode_degree: 6,
                constant_degree: 6,
                zero_degree: 10,
                tp_size: 6,
                tp_order: 4,
                oscillation_size: 8,
            }
        } else {
            Self {
                oracle_draws: 20,
                path_len: DEFAULT_CAP,
                factor_draws: 10,
                factor_size: 8,
                production_size: 10,
                euler_gauss: (6, 10),
                moment_degree: 8,
                poly_degree: 12,
                ortho_degree: 9,
                duality_size: 10,
                ode_degree: 8,
                constant_degree: 10,
                zero_degree: 14,
                tp_size: 8,
                tp_order: 5,
                oscillation_size: 12,
            }
        };
        if let Some(n) = options.size {
            sizes.poly_degree = n;
            sizes.ortho_degree = n;
            sizes.duality_size = n;
            sizes.ode_degree = n;
            sizes.zero_degree = n;
        }
        sizes
    }
}

type CheckResult = std::result::Result<(), String>;

fn ensure(condition: bool, witness: impl FnOnce() -> String) -> CheckResult {
    if condition {
        Ok(())
    } else {
        Err(witness())
    }
}

fn grid_label(p: &HypergeometricParams) -> String {
    let a: Vec<String> = p.a[..p.r].iter().map(ToString::to_string).collect();
    let b: Vec<String> = p.b.iter().map(ToString::to_string).collect();
    format!("(r,s)=({},{}) λ={:?} a={:?} b={:?}", p.r, p.s, p.selector, a, b)
}

/// One generic parameter point per grid regime, drawn from `seed`.
fn grid_params(seed: u64) -> Vec<HypergeometricParams> {
    let mut sampler = Sampler::new(seed);
    regime_grid().into_iter().map(|(r, s, sel)| sampler.params(r, s, &sel)).collect()
}

/// Grid regimes with `r ≥ s`, each with an all-positive parameter point.
fn positive_grid_params(seed: u64) -> Vec<HypergeometricParams> {
    let mut sampler = Sampler::new(seed);
    regime_grid()
        .into_iter()
        .filter(|(r, s, _)| r >= s)
        .map(|(r, s, sel)| sampler.positive_params(r, s, &sel))
        .collect()
}

fn on_grid(params: &[HypergeometricParams], check: impl Fn(&HypergeometricParams) -> CheckResult + Sync) -> CheckResult {
    params
        .par_iter()
        .map(|p| check(p).map_err(|w| format!("{}: {w}", grid_label(p))))
        .find_first(Result::is_err)
        .unwrap_or(Ok(()))
}

fn draw_seeds(seed: u64, count: usize) -> Vec<u64> {
    let mut sampler = Sampler::new(seed);
    (0..count).map(|_| sampler.next_seed()).collect()
}

fn lattice_oracle(sizes: &Sizes, seed: u64) -> CheckResult {
    let jobs: Vec<(usize, u64)> =
        (1..=3).flat_map(|m| draw_seeds(seed ^ m as u64, sizes.oracle_draws).into_iter().map(move |s| (m, s))).collect();
    jobs.par_iter()
        .map(|&(m, draw)| {
            let alphas = random_alphas(m, draw);
            let len = sizes.path_len;
            let sums = weight_sums_from(m, (0, 0), len, &alphas, len).map_err(|e| e.to_string())?;
            let size = len / (m + 1) + 2;
            let tables = sr_dp(m, &alphas, size).map_err(|e| e.to_string())?;
            for x in 0..=len {
                for h in 0..=x {
                    let expected = sums.get(&(x, h)).cloned().unwrap_or_else(Rational::zero);
                    let actual = tables.paths_to(x, h);
                    ensure(actual == expected, || format!("m={m} draw={draw} endpoint ({x},{h}): dp {actual} vs paths {expected}"))?;
                }
            }
            Ok(())
        })
        .find_first(Result::is_err)
        .unwrap_or(Ok(()))
}

fn catalan() -> CheckResult {
    let expected = [1, 1, 2, 5, 14, 42, 132, 429];
    let tables = sr_dp(1, &AlphaSequence::constant(1, int(1)), expected.len()).map_err(|e| e.to_string())?;
    let column = tables.generalized().entries;
    for (n, &c) in expected.iter().enumerate() {
        ensure(column.get(n, 0) == &int(c), || format!("S_{n},0 = {} instead of {c}", column.get(n, 0)))?;
    }
    Ok(())
}

fn factorization(sizes: &Sizes, seed: u64) -> CheckResult {
    for m in 1..=3 {
        for draw in draw_seeds(seed ^ m as u64, sizes.factor_draws) {
            let report = verify_factorization(m, &random_alphas(m, draw), sizes.factor_size).map_err(|e| e.to_string())?;
            ensure(report.holds, || format!("m={m} draw={draw}: first mismatch {:?}", report.first_mismatch))?;
        }
    }
    Ok(())
}

fn production(sizes: &Sizes, seed: u64) -> CheckResult {
    let n = sizes.production_size;
    for m in 1..=4 {
        for draw in draw_seeds(seed ^ m as u64, 2) {
            let alphas = random_alphas(m, draw);
            let closed = production_closed_form(m, &alphas, n).map_err(|e| e.to_string())?;
            let bidiagonal = production_bidiagonal(m, &alphas, n).map_err(|e| e.to_string())?;
            ensure(closed == bidiagonal, || format!("m={m} draw={draw}: closed form differs from bidiagonal product"))?;
            let s = sr_dp(m, &alphas, n).map_err(|e| e.to_string())?.generalized().entries;
            ensure(output_matrix(&closed, n) == s, || format!("m={m} draw={draw}: output matrix differs from S"))?;
        }
    }
    Ok(())
}

/// The three classical `m = 1` coefficient displays.
fn classical_displays(seed: u64) -> CheckResult {
    let mut sampler = Sampler::new(seed);
    for _ in 0..4 {
        let (a1, a2, b) = (sampler.rational(3), sampler.rational(3), sampler.rational(3) + int(1));
        let two = |k: i64| int(2 * k);
        let gauss = HypergeometricParams::new(1, 1, vec![1], vec![a1.clone(), a2.clone()], vec![b.clone()]).map_err(|e| e.to_string())?;
        let kummer = HypergeometricParams::new(1, 0, vec![], vec![a1.clone(), a2.clone()], vec![]).map_err(|e| e.to_string())?;
        let confluent = HypergeometricParams::new(0, 1, vec![], vec![a1.clone()], vec![b.clone()]).map_err(|e| e.to_string())?;
        let coeffs = |p: &HypergeometricParams| bcf_coefficients(p, 9).map_err(|e| e.to_string());
        let (g, k2, c) = (coeffs(&gauss)?, coeffs(&kummer)?, coeffs(&confluent)?);
        for k in 0..5i64 {
            let kk = int(k);
            let (odd, even) = (2 * k as usize, 2 * k as usize + 1);
            let gauss_odd = (&a1 + &kk) * (&b - &a2 + &kk) / ((&b + two(k) - int(1)) * (&b + two(k)));
            let gauss_even = (&a2 + &kk) * (&b - &a1 + &kk) / ((&b + two(k)) * (&b + two(k) + int(1)));
            let conf_odd = (&b - &a1 + &kk) / ((&b + two(k) - int(1)) * (&b + two(k)));
            let conf_even = -(&a1 + &kk) / ((&b + two(k)) * (&b + two(k) + int(1)));
            ensure(g[odd] == gauss_odd && g[even] == gauss_even, || format!("(1,1) at k={k}"))?;
            ensure(k2[odd] == &a1 + &kk && k2[even] == &a2 + &kk, || format!("(1,0) at k={k}"))?;
            ensure(c[odd] == conf_odd && c[even] == conf_even, || format!("(0,1) at k={k}"))?;
        }
    }
    Ok(())
}

fn euler_gauss(sizes: &Sizes, params: &[HypergeometricParams]) -> CheckResult {
    let (max_k, order) = sizes.euler_gauss;
    on_grid(params, |p| {
        let report = verify_euler_gauss(p, max_k, order).map_err(|e| e.to_string())?;
        ensure(report.passed, || format!("first failure (k, power) = {:?}", report.first_failure))
    })
}

fn moments_check(sizes: &Sizes, params: &[HypergeometricParams]) -> CheckResult {
    let n_max = sizes.moment_degree;
    on_grid(params, |p| {
        let hat = sr_dp(p.m(), &p.alpha_sequence(), n_max + 1).map_err(|e| e.to_string())?.modified().entries;
        for k in 0..=p.m() {
            for n in 0..=n_max {
                let closed = moments(p, k, n).map_err(|e| e.to_string())?;
                ensure(&closed == hat.get(n, k), || format!("moment k={k} n={n}"))?;
            }
        }
        Ok(())
    })
}

fn cross_construction(sizes: &Sizes, params: &[HypergeometricParams]) -> CheckResult {
    let n_max = sizes.poly_degree;
    on_grid(params, |p| {
        let rc = recurrence_coeffs(p, n_max).map_err(|e| e.to_string())?;
        let recurrence = polys_via_recurrence(&rc, n_max);
        let explicit = polys_explicit(p, n_max).map_err(|e| e.to_string())?;
        let h = production_closed_form(p.m(), &p.alpha_sequence(), n_max).map_err(|e| e.to_string())?.to_dense();
        for n in 0..=n_max {
            ensure(recurrence.get(n) == explicit.get(n), || format!("recurrence and explicit differ at n={n}"))?;
            let charpoly = charpoly_hessenberg(&h.truncate(n, n));
            ensure(&charpoly == explicit.get(n), || format!("characteristic polynomial differs at n={n}"))?;
        }
        Ok(())
    })
}

fn orthogonality(sizes: &Sizes, params: &[HypergeometricParams]) -> CheckResult {
    let n_max = sizes.ortho_degree;
    on_grid(params, |p| {
        let polys = polys_explicit(p, n_max).map_err(|e| e.to_string())?;
        let report = orthogonality_report(p, &polys, n_max).map_err(|e| e.to_string())?;
        ensure(report.passed, || format!("(n, ℓ, k) = {:?}", report.failures.first()))
    })
}

fn duality(sizes: &Sizes, params: &[HypergeometricParams]) -> CheckResult {
    let n = sizes.duality_size;
    on_grid(params, |p| {
        let t = polys_explicit(p, n - 1).map_err(|e| e.to_string())?.coefficient_matrix();
        let s = sr_dp(p.m(), &p.alpha_sequence(), n).map_err(|e| e.to_string())?.generalized().entries;
        let product = &t * &s;
        ensure(product == RatMatrix::identity(n), || format!("T·S - I has max entry {}", product.max_abs_diff(&RatMatrix::identity(n))))
    })
}

fn ode_shift(sizes: &Sizes, params: &[HypergeometricParams]) -> CheckResult {
    on_grid(params, |p| {
        for n in 0..=sizes.ode_degree {
            ensure(ode_check(p, n).map_err(|e| e.to_string())?, || format!("differential equation at n={n}"))?;
            ensure(derivative_shift_check(p, n).map_err(|e| e.to_string())?, || format!("derivative shift at n={n}"))?;
        }
        Ok(())
    })
}

fn constant_case_check(sizes: &Sizes) -> CheckResult {
    let n_max = sizes.constant_degree;
    for r in 1..=4 {
        let cc = constant_case(r, n_max).map_err(|e| format!("r={r}: {e}"))?;
        for k in 0..=r {
            let expected = constant_case_gamma(r, k);
            for n in 0..n_max {
                ensure(cc.recurrence.get(k, n) == &expected, || format!("r={r} γ^[{k}]_{n} = {}", cc.recurrence.get(k, n)))?;
            }
        }
    }
    let p2 = explicit_poly(&crate::mop::constant_case_params(1), 2).map_err(|e| e.to_string())?;
    for root in [ratio(1, 4), ratio(3, 4)] {
        ensure(p2.eval(&root).is_zero(), || format!("P_2 does not vanish at {root}"))?;
    }
    Ok(())
}

fn isolate(p: &HypergeometricParams, n: usize) -> std::result::Result<ZeroSet, String> {
    let poly = explicit_poly(p, n).map_err(|e| e.to_string())?;
    let set = isolate_real_roots(&poly, &ratio(1, 1 << 20)).map_err(|e| format!("n={n}: {e}"))?;
    ensure(set.len() == n, || format!("n={n}: only {} real zeros", set.len()))?;
    Ok(set)
}

fn zeros(sizes: &Sizes, params: &[HypergeometricParams]) -> CheckResult {
    on_grid(params, |p| {
        let mut previous: Option<ZeroSet> = None;
        for n in 1..=sizes.zero_degree {
            let set = isolate(p, n)?;
            ensure(set.compare_root(0, &Rational::zero()) == Ordering::Greater, || format!("n={n}: a zero is not positive"))?;
            if p.r == p.s {
                ensure(set.all_within(&Rational::zero(), &Rational::one()), || format!("n={n}: a zero lies outside (0,1)"))?;
            }
            if let Some(lower) = &previous {
                let interlaced = check_interlacing(lower, &set).map_err(|e| e.to_string())?;
                ensure(interlaced, || format!("zeros of degrees {} and {n} do not interlace", n - 1))?;
            }
            previous = Some(set);
        }
        Ok(())
    })
}

fn total_positivity(sizes: &Sizes, seed: u64) -> CheckResult {
    for m in 1..=3 {
        let alphas = random_alphas(m, seed ^ m as u64);
        let hat = sr_dp(m, &alphas, sizes.tp_size).map_err(|e| e.to_string())?.modified().entries;
        let h = production_closed_form(m, &alphas, sizes.oscillation_size.max(sizes.tp_size)).map_err(|e| e.to_string())?.to_dense();
        for (name, matrix) in [("modified S", &hat), ("production matrix", &h.truncate(sizes.tp_size, sizes.tp_size))] {
            let report = is_totally_positive(matrix, sizes.tp_order).map_err(|e| e.to_string())?;
            ensure(report.is_tp(), || format!("m={m} {name}: {:?}", report.verdict))?;
        }
        for n in 1..=sizes.oscillation_size {
            let verdict = is_oscillation(&h.truncate(n, n));
            ensure(verdict.holds(), || format!("m={m} H_{n}: {verdict:?}"))?;
        }
    }
    Ok(())
}

/// Runs every check; outcomes come back in a fixed order.
pub fn run_suite(options: &SuiteOptions) -> Vec<CheckOutcome> {
    let sizes = Sizes::new(options);
    let seed = options.seed;
    let grid = grid_params(seed);
    let positive = positive_grid_params(seed.wrapping_add(1));
    let checks: Vec<(&str, Box<dyn Fn() -> CheckResult + Sync + '_>)> = vec![
        ("lattice-oracle", Box::new(|| lattice_oracle(&sizes, seed))),
        ("catalan", Box::new(catalan)),
        ("factorization", Box::new(|| factorization(&sizes, seed))),
        ("production", Box::new(|| production(&sizes, seed))),
        ("classical-displays", Box::new(|| classical_displays(seed))),
        ("euler-gauss", Box::new(|| euler_gauss(&sizes, &grid))),
        ("moments", Box::new(|| moments_check(&sizes, &grid))),
        ("cross-construction", Box::new(|| cross_construction(&sizes, &grid))),
        ("orthogonality", Box::new(|| orthogonality(&sizes, &grid))),
        ("duality", Box::new(|| duality(&sizes, &grid))),
        ("ode-shift", Box::new(|| ode_shift(&sizes, &grid))),
        ("constant-case", Box::new(|| constant_case_check(&sizes))),
        ("zeros", Box::new(|| zeros(&sizes, &positive))),
        ("total-positivity", Box::new(|| total_positivity(&sizes, seed))),
    ];
    checks
        .par_iter()
        .map(|(name, check)| {
            let result = check();
            CheckOutcome {
                check: (*name).to_string(),
                status: if result.is_ok() { Status::Pass } else { Status::Fail },
                witness: result.err(),
            }
        })
        .collect()
}
