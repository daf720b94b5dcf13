//! Large-degree checks: recurrence-coefficient limits, the largest-zero bound,
//! Mehler–Heine scaling near the origin, and the limiting zero distribution.
//! Everything here reports in `f64`; exact values are converted at the end.

use std::f64::consts::PI;

use itertools::Itertools;
use num_bigint::BigInt;
use serde::Serialize;

use super::hessenberg_zeros;
use crate::bcf::HypergeometricParams;
use crate::error::{Error, Result};
use crate::exact::{cyclic, int, terminating_hypergeometric, to_f64, Rational};
use crate::mop::{lower_params_for_degree, RecurrenceCoeffs};
use crate::production::production_closed_form;

fn require_r_ge_s(p: &HypergeometricParams) -> Result<()> {
    if p.r_ge_s() && p.r > 0 {
        Ok(())
    } else {
        Err(Error::InvalidRegime { r: p.r, s: p.s })
    }
}

/// Limit constant `C_j^{[k]}` of `γ_n^{[k]} / n^{(r-s)(k+1)}` along `n ≡ j (mod r)`.
pub fn limit_constant(p: &HypergeometricParams, j: usize, k: usize) -> Result<f64> {
    require_r_ge_s(p)?;
    let (r, s) = (p.r, p.s);
    let in_selector = |v: i64| p.selector.contains(&(cyclic(v, r as i64) as usize));
    let base = r as f64 + 1.0;
    let total: f64 = (0..=r)
        .combinations(k + 1)
        .map(|ascending| {
            let hits = ascending.iter().rev().enumerate().filter(|&(i, &l)| in_selector((j + l + i) as i64)).count();
            base.powi(-(hits as i32))
        })
        .sum();
    Ok((r as f64 / base).powi((s * (k + 1)) as i32) * total)
}

/// `γ_n^{[k]}` divided by its predicted leading behaviour, for `0 ≤ k ≤ r`.
#[derive(Clone, Debug, Serialize)]
pub struct RecurrenceLimitReport {
    pub n: usize,
    pub ratios: Vec<f64>,
    pub max_deviation: f64,
}

pub fn recurrence_limit_report(p: &HypergeometricParams, rc: &RecurrenceCoeffs, n: usize) -> Result<RecurrenceLimitReport> {
    require_r_ge_s(p)?;
    let r = p.r;
    let j = cyclic(n as i64, r as i64) as usize;
    let ratios = (0..=r)
        .map(|k| {
            let growth = (n as f64).powi(((r - p.s) * (k + 1)) as i32);
            Ok(to_f64(rc.get(k, n)) / (limit_constant(p, j, k)? * growth))
        })
        .collect::<Result<Vec<f64>>>()?;
    let max_deviation = ratios.iter().map(|q| (q - 1.0).abs()).fold(0.0, f64::max);
    Ok(RecurrenceLimitReport { n, ratios, max_deviation })
}

/// Coefficient profile `γ^{[k]}` and scale `f_n` in `|γ_n^{[k]}| ≲ γ^{[k]} f_n^{k+1}`.
#[derive(Clone, Debug, Serialize)]
pub struct AsymptoticProfile {
    pub gamma: Vec<f64>,
    pub scale: f64,
}

/// Profile at degree `n` with `f_n = n^{r-s}` and `γ^{[k]} = max_j C_j^{[k]}`.
pub fn asymptotic_profile(p: &HypergeometricParams, n: usize) -> Result<AsymptoticProfile> {
    require_r_ge_s(p)?;
    let gamma = (0..=p.r)
        .map(|k| (1..=p.r).map(|j| limit_constant(p, j, k)).try_fold(0.0f64, |acc, c| Ok::<_, Error>(acc.max(c?))))
        .collect::<Result<Vec<f64>>>()?;
    Ok(AsymptoticProfile { gamma, scale: (n as f64).powi((p.r - p.s) as i32) })
}

/// `min_{t > 0} (t + Σ_k γ^{[k]} / t^k) · f_n` on a logarithmic grid, then
/// golden-section refinement around the best grid point.
pub fn largest_zero_bound(profile: &AsymptoticProfile) -> f64 {
    let objective = |t: f64| t + profile.gamma.iter().enumerate().map(|(k, g)| g / t.powi(k as i32)).sum::<f64>();
    let grid: Vec<f64> = (0..=4000).map(|i| 10f64.powf(-8.0 + 16.0 * i as f64 / 4000.0)).collect();
    let best = (0..grid.len()).min_by(|&a, &b| objective(grid[a]).total_cmp(&objective(grid[b]))).expect("nonempty grid");
    let (mut lo, mut hi) = (grid[best.saturating_sub(1)], grid[(best + 1).min(grid.len() - 1)]);
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let a = hi - ratio * (hi - lo);
        let b = lo + ratio * (hi - lo);
        if objective(a) < objective(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    objective((lo + hi) / 2.0) * profile.scale
}

/// Finite-degree bound `min_t max_i (t + Σ_k γ_{i-k}^{[k]} t^{-k})` on the
/// zeros of `P_n`, from row sums of `D^{-1} H_n D` with `D = diag(t^i)`.
pub fn row_sum_bound(rc: &RecurrenceCoeffs, n: usize) -> f64 {
    let gamma: Vec<Vec<f64>> = rc.gamma.iter().map(|row| row.iter().take(n).map(to_f64).collect()).collect();
    let objective = |t: f64| {
        (0..n)
            .map(|i| {
                let up = if i + 1 < n { t } else { 0.0 };
                up + (0..gamma.len()).filter(|&k| k <= i).map(|k| gamma[k][i - k].abs() / t.powi(k as i32)).sum::<f64>()
            })
            .fold(0.0, f64::max)
    };
    (0..=2000).map(|i| objective(10f64.powf(-8.0 + 16.0 * i as f64 / 2000.0))).fold(f64::INFINITY, f64::min)
}

#[derive(Clone, Debug, Serialize)]
pub struct MehlerHeineRow {
    pub n: usize,
    pub scaled: f64,
    pub limit: f64,
    pub error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MehlerHeineReport {
    #[serde(serialize_with = "crate::serial::rational")]
    pub z: Rational,
    pub rows: Vec<MehlerHeineRow>,
    pub decreasing: bool,
}

/// `₀F_r(; a; w)` summed until the terms are negligible.
fn confluent_limit(a: &[f64], w: f64) -> f64 {
    let (mut term, mut sum) = (1.0f64, 1.0f64);
    for k in 0..10_000 {
        let kf = k as f64;
        term *= w / ((kf + 1.0) * a.iter().map(|ai| ai + kf).product::<f64>());
        sum += term;
        if term.abs() <= 1e-18 * sum.abs().max(1e-300) && kf > w.abs() {
            break;
        }
    }
    sum
}

/// Compares the renormalized `P_n(z/n^{s+1})`, evaluated exactly as a
/// terminating series, with the limit `₀F_r(; a; -z/r^s)`.
pub fn mehler_heine_check(p: &HypergeometricParams, z: &Rational, ns: &[usize]) -> Result<MehlerHeineReport> {
    require_r_ge_s(p)?;
    let a = &p.a[..p.r];
    let a_float: Vec<f64> = a.iter().map(to_f64).collect();
    let limit = confluent_limit(&a_float, -to_f64(z) / (p.r as f64).powi(p.s as i32));
    let rows = ns
        .iter()
        .map(|&n| {
            let mut num = vec![int(-(n as i64))];
            num.extend(lower_params_for_degree(p, n));
            let point = z / Rational::from_integer(BigInt::from(n).pow((p.s + 1) as u32));
            let scaled = to_f64(&terminating_hypergeometric(&num, a, n, &point)?);
            Ok(MehlerHeineRow { n, scaled, limit, error: (scaled - limit).abs() })
        })
        .collect::<Result<Vec<_>>>()?;
    let decreasing = rows.windows(2).all(|w| w[1].error < w[0].error);
    Ok(MehlerHeineReport { z: z.clone(), rows, decreasing })
}

/// Point `x(φ)` of the limiting zero distribution.
pub fn distribution_point(r: usize, phi: f64) -> f64 {
    let rf = r as f64;
    let numerator = rf.powi(r as i32) * ((rf + 1.0) * phi).sin().powi(r as i32 + 1);
    numerator / ((rf + 1.0).powi(r as i32 + 1) * phi.sin() * (rf * phi).sin().powi(r as i32))
}

/// Density `ν_r` at `x(φ)`.
pub fn distribution_density(r: usize, phi: f64) -> f64 {
    let rf = r as f64;
    let (s1, sr, sr1) = (phi.sin(), (rf * phi).sin(), ((rf + 1.0) * phi).sin());
    let denominator = (rf + 1.0).powi(2) * sr * sr - 2.0 * rf * (rf + 1.0) * sr1 * sr * phi.cos() + rf * rf * sr1 * sr1;
    (rf + 1.0) * s1 * sr * sr1 / (PI * distribution_point(r, phi) * denominator)
}

/// `ν_r(x(φ)) |x'(φ)|`, the density of the distribution in the variable `φ`.
pub fn phi_density(r: usize, phi: f64) -> f64 {
    let rf = r as f64;
    let cot = |t: f64| t.cos() / t.sin();
    let log_derivative = (rf + 1.0).powi(2) * cot((rf + 1.0) * phi) - cot(phi) - rf * rf * cot(rf * phi);
    distribution_density(r, phi) * distribution_point(r, phi) * log_derivative.abs()
}

/// Closed form of the `r = 2` density in `x`.
pub fn density_r2(x: f64) -> f64 {
    let root = (1.0 - x).sqrt();
    3f64.sqrt() / (4.0 * PI) * ((1.0 + root).cbrt() + (1.0 - root).cbrt()) / (x.powf(2.0 / 3.0) * root)
}

/// Tabulated model distribution function on `[0, 1]`.
#[derive(Clone, Debug, Serialize)]
pub struct ModelCdf {
    pub r: usize,
    /// Increasing abscissae.
    pub xs: Vec<f64>,
    pub values: Vec<f64>,
    /// Integral of the density over the whole parameter range.
    pub total_mass: f64,
}

pub const MODEL_PANELS: usize = 10_000;

/// Trapezoid rule in `φ` over `(0, π/(r+1))` with [`MODEL_PANELS`] panels.
pub fn model_cdf(r: usize) -> Result<ModelCdf> {
    let end = PI / (r as f64 + 1.0);
    let h = end / MODEL_PANELS as f64;
    let mut points: Vec<f64> = (0..=MODEL_PANELS).map(|i| distribution_point(r, i as f64 * h)).collect();
    points[0] = 1.0;
    points[MODEL_PANELS] = 0.0;
    if let Some(i) = points.windows(2).position(|w| w[1] >= w[0]) {
        return Err(Error::Inconsistent(format!("x(φ) is not decreasing at grid node {}", i + 1)));
    }
    // the endpoint limits are finite; extrapolate instead of evaluating 0/0 forms
    let mut densities: Vec<f64> = (0..=MODEL_PANELS).map(|i| phi_density(r, i as f64 * h)).collect();
    densities[0] = 2.0 * densities[1] - densities[2];
    densities[MODEL_PANELS] = 2.0 * densities[MODEL_PANELS - 1] - densities[MODEL_PANELS - 2];
    let mut cumulative = vec![0.0f64];
    for w in densities.windows(2) {
        cumulative.push(cumulative.last().unwrap() + h * (w[0] + w[1]) / 2.0);
    }
    let total_mass = *cumulative.last().unwrap();
    let mut xs: Vec<f64> = points.clone();
    let mut values: Vec<f64> = cumulative.iter().map(|c| 1.0 - c).collect();
    xs.reverse();
    values.reverse();
    Ok(ModelCdf { r, xs, values, total_mass })
}

impl ModelCdf {
    pub fn eval(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x >= 1.0 {
            return 1.0;
        }
        let i = self.xs.partition_point(|&v| v <= x).clamp(1, self.xs.len() - 1);
        let (x0, x1) = (self.xs[i - 1], self.xs[i]);
        let (f0, f1) = (self.values[i - 1], self.values[i]);
        let t = if x1 > x0 { (x - x0) / (x1 - x0) } else { 0.0 };
        (f0 + t * (f1 - f0)).clamp(0.0, 1.0)
    }
}

/// Sorted zeros against the model distribution.
#[derive(Clone, Debug, Serialize)]
pub struct ZeroDistribution {
    pub r: usize,
    pub zeros: Vec<f64>,
    #[serde(skip)]
    pub model: ModelCdf,
}

impl ZeroDistribution {
    pub fn new(r: usize, mut zeros: Vec<f64>) -> Result<Self> {
        zeros.sort_by(f64::total_cmp);
        Ok(Self { r, zeros, model: model_cdf(r)? })
    }

    /// Kolmogorov–Smirnov distance between the empirical and model distributions.
    pub fn ks_statistic(&self) -> f64 {
        let n = self.zeros.len() as f64;
        self.zeros
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = self.model.eval(x);
                (f - i as f64 / n).abs().max((f - (i + 1) as f64 / n).abs())
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DistributionReport {
    pub r: usize,
    pub n: usize,
    pub ks: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub all_in_unit_interval: bool,
}

/// KS distance between the zeros of `P_n` and `ν_r` for parameters with `s = r`.
pub fn zero_distribution_check(p: &HypergeometricParams, n: usize, tolerance: f64) -> Result<DistributionReport> {
    if p.s != p.r || p.r == 0 {
        return Err(Error::InvalidRegime { r: p.r, s: p.s });
    }
    let h = production_closed_form(p.m(), &p.alpha_sequence(), n)?.to_dense();
    let zeros = hessenberg_zeros(&h, &Rational::new(1.into(), BigInt::from(1) << 40))?;
    let all_in_unit_interval = zeros.all_within(&int(0), &int(1));
    let ks = ZeroDistribution::new(p.r, zeros.midpoints.clone())?.ks_statistic();
    Ok(DistributionReport { r: p.r, n, ks, tolerance, passed: ks <= tolerance, all_in_unit_interval })
}
