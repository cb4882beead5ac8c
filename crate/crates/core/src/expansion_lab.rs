//! Empirical convergence rates for the `1/n` expansion of the hard-edge
//! distribution and of the kernels behind it.
//!
//! Each claim is turned into a residual that should decay like a fixed
//! power of `n`; [`fit_slope`] measures that power on a log-log scale.

use rayon::prelude::*;

use crate::distributions::{finite_distribution, limit_density, limit_distribution, DensityMethod};
use crate::error::{domain, Result};
use crate::kernels::{bessel_kernel_entire, correction_kernel, EntireKernel, LaguerreKernel, Scaling};
use crate::specfun::{bessel_entire, laguerre, RealOrder};

/// Matrix orders used when none are given.
pub const DEFAULT_N_LIST: [usize; 4] = [50, 100, 200, 400];

/// Quadrature nodes used for rate studies.
pub const DEFAULT_M: usize = 60;

/// Acceptance window for an `O(n^-2)` residual.
pub const SECOND_ORDER_WINDOW: (f64, f64) = (-2.3, -1.7);

/// Acceptance window for an `O(n^-1)` residual.
pub const FIRST_ORDER_WINDOW: (f64, f64) = (-1.3, -0.7);

/// Residuals at or below this level are solver noise, not signal.
pub const NOISE_FLOOR: f64 = 1e-12;

/// Ordinary least squares of `ln r` on `ln n`: `(slope, standard error)`.
pub fn fit_slope(pairs: &[(f64, f64)]) -> Result<(f64, f64)> {
    if pairs.len() < 4 {
        return domain(format!("slope fit needs at least 4 points, got {}", pairs.len()));
    }
    if let Some(&(n, r)) = pairs.iter().find(|(n, r)| !(*r > 0.0) || !(*n > 0.0)) {
        return domain(format!("degenerate data: non-positive point ({n}, {r})"));
    }
    let k = pairs.len() as f64;
    let xs: Vec<f64> = pairs.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.1.ln()).collect();
    let xm = xs.iter().sum::<f64>() / k;
    let ym = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - xm).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    if sxx == 0.0 {
        return domain("degenerate data: all abscissae equal");
    }
    let slope = sxy / sxx;
    let intercept = ym - slope * xm;
    let ssr: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let stderr = (ssr / (k - 2.0) / sxx).sqrt();
    Ok((slope, stderr))
}

/// Residuals of one claim over a list of matrix orders, with the fitted
/// log-log slope.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionReport {
    pub a: f64,
    /// Evaluation point (`s` for distributions, `z` for Mehler–Heine,
    /// the grid extent for kernels).
    pub point: f64,
    pub n_list: Vec<usize>,
    pub residuals: Vec<f64>,
    /// Largest determinant error estimate that entered the residuals.
    pub max_error_estimate: f64,
    /// `None` when the residuals are at the noise floor.
    pub fitted_slope: Option<f64>,
    pub slope_stderr: Option<f64>,
}

impl ExpansionReport {
    fn build(a: f64, point: f64, n_list: &[usize], results: Vec<(f64, f64)>) -> Result<Self> {
        let residuals: Vec<f64> = results.iter().map(|r| r.0).collect();
        let max_error_estimate = results.iter().map(|r| r.1).fold(0.0, f64::max);
        let (fitted_slope, slope_stderr) = if residuals.iter().all(|&r| r > NOISE_FLOOR) {
            let pairs: Vec<(f64, f64)> = n_list
                .iter()
                .map(|&n| n as f64)
                .zip(residuals.iter().copied())
                .collect();
            let (s, e) = fit_slope(&pairs)?;
            (Some(s), Some(e))
        } else {
            (None, None)
        };
        Ok(Self {
            a,
            point,
            n_list: n_list.to_vec(),
            residuals,
            max_error_estimate,
            fitted_slope,
            slope_stderr,
        })
    }

    /// Residuals at solver precision; no slope is fitted.
    pub fn is_degenerate(&self) -> bool {
        self.fitted_slope.is_none()
    }

    /// Quadrature error is not negligible against the smallest residual.
    pub fn quadrature_limited(&self) -> bool {
        let smallest = self.residuals.iter().copied().fold(f64::INFINITY, f64::min);
        self.max_error_estimate >= 1e-3 * smallest
    }

    pub fn slope_within(&self, window: (f64, f64)) -> bool {
        self.fitted_slope.is_some_and(|s| s >= window.0 && s <= window.1)
    }
}

fn check_n_list(n_list: &[usize]) -> Result<()> {
    if n_list.len() < 4 {
        return domain(format!("need at least 4 matrix orders, got {}", n_list.len()));
    }
    if n_list[0] == 0 || n_list.windows(2).any(|w| w[1] <= w[0]) {
        return domain("matrix orders must be positive and strictly increasing");
    }
    if n_list[n_list.len() - 1] < 8 * n_list[0] {
        return domain("matrix orders must span a factor of at least 8");
    }
    Ok(())
}

/// Which distribution-level statement a report measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Claim {
    /// `|F_n - F_∞ - (a/2n) s f_∞|`, expected `O(n^-2)`.
    Conjecture,
    /// `|F_n - F_∞|`, expected `O(n^-1)` for `a ≠ 0`.
    Uncorrected,
    /// `|F_n((1 - a/2n)s) - F_∞(s)|`, expected `O(n^-2)`.
    OptimalScaling,
    /// `|F_∞(s/(1 - a/2n)) - F_∞(s) - (a/2n) s f_∞(s)|`, expected `O(n^-2)`.
    TaylorStep,
}

impl Claim {
    pub fn expected_window(self) -> (f64, f64) {
        match self {
            Claim::Uncorrected => FIRST_ORDER_WINDOW,
            _ => SECOND_ORDER_WINDOW,
        }
    }
}

/// `F_∞^a(s)` and `f_∞^a(s)` shared across matrix orders.
#[derive(Debug, Clone, Copy)]
struct LimitPoint {
    value: f64,
    density: f64,
    error: f64,
}

fn limit_point(a: f64, s: f64, m: usize) -> Result<LimitPoint> {
    let det = limit_distribution(a, s, m)?;
    Ok(LimitPoint {
        value: det.value,
        density: limit_density(a, s, m, DensityMethod::Resolvent)?,
        error: det.error_estimate,
    })
}

fn claim_residual(claim: Claim, a: f64, n: usize, s: f64, m: usize, limit: &LimitPoint) -> Result<(f64, f64)> {
    let correction = a / (2.0 * n as f64) * s * limit.density;
    match claim {
        Claim::Conjecture | Claim::Uncorrected => {
            let fin = finite_distribution(a, n, s, Scaling::Standard, m)?;
            let diff = fin.value - limit.value;
            let r = if claim == Claim::Conjecture {
                diff - correction
            } else {
                diff
            };
            Ok((r.abs(), fin.error_estimate.max(limit.error)))
        }
        Claim::OptimalScaling => {
            let fin = finite_distribution(a, n, s, Scaling::Optimal, m)?;
            Ok(((fin.value - limit.value).abs(), fin.error_estimate.max(limit.error)))
        }
        Claim::TaylorStep => {
            let stretched = limit_distribution(a, s / (1.0 - a / (2.0 * n as f64)), m)?;
            let r = stretched.value - limit.value - correction;
            Ok((r.abs(), stretched.error_estimate.max(limit.error)))
        }
    }
}

/// `|F_n^a(s) - F_∞^a(s) - (a/2n) s f_∞^a(s)|` under the standard scaling.
pub fn conjecture_residual(a: f64, n: usize, s: f64, m: usize) -> Result<f64> {
    Ok(claim_residual(Claim::Conjecture, a, n, s, m, &limit_point(a, s, m)?)?.0)
}

/// `|F_n^a(s) - F_∞^a(s)|` under the standard scaling.
pub fn uncorrected_residual(a: f64, n: usize, s: f64, m: usize) -> Result<f64> {
    Ok(claim_residual(Claim::Uncorrected, a, n, s, m, &limit_point(a, s, m)?)?.0)
}

/// `|F_n^a((1 - a/2n) s) - F_∞^a(s)|`.
pub fn optimal_scaling_residual(a: f64, n: usize, s: f64, m: usize) -> Result<f64> {
    Ok(claim_residual(Claim::OptimalScaling, a, n, s, m, &limit_point(a, s, m)?)?.0)
}

/// `|F_∞^a(s/(1 - a/2n)) - F_∞^a(s) - (a/2n) s f_∞^a(s)|`.
pub fn taylor_step_residual(a: f64, n: usize, s: f64, m: usize) -> Result<f64> {
    Ok(claim_residual(Claim::TaylorStep, a, n, s, m, &limit_point(a, s, m)?)?.0)
}

/// Residuals of `claim` at `(a, s)` over `n_list`.
pub fn distribution_report(claim: Claim, a: f64, s: f64, n_list: &[usize], m: usize) -> Result<ExpansionReport> {
    check_n_list(n_list)?;
    let limit = limit_point(a, s, m)?;
    let results = n_list
        .par_iter()
        .map(|&n| claim_residual(claim, a, n, s, m, &limit))
        .collect::<Result<Vec<_>>>()?;
    ExpansionReport::build(a, s, n_list, results)
}

/// `|(n+a)^{-a} L_n^a(z/(n+a)) - j_a(z) + j_{a-2}(z)/(2n)|`.
pub fn mehler_heine_residual(a: f64, n: usize, z: f64) -> Result<f64> {
    RealOrder::new(a)?;
    if !(0.0..=10.0).contains(&z) {
        return domain(format!("z = {z} outside [0, 10]"));
    }
    if n == 0 {
        return domain("n must be >= 1");
    }
    let shift = n as f64 + a;
    let lhs = (-a * shift.ln()).exp() * laguerre(n, a, z / shift);
    let rhs = bessel_entire(a, z)? - bessel_entire(a - 2.0, z)? / (2.0 * n as f64);
    Ok((lhs - rhs).abs())
}

pub fn mehler_heine_report(a: f64, z: f64, n_list: &[usize]) -> Result<ExpansionReport> {
    check_n_list(n_list)?;
    let results = n_list
        .iter()
        .map(|&n| Ok((mehler_heine_residual(a, n, z)?, 0.0)))
        .collect::<Result<Vec<_>>>()?;
    ExpansionReport::build(a, z, n_list, results)
}

/// `k × k` grid of `(x, y)` pairs on `[lo, hi]^2`, endpoints included.
pub fn square_grid(lo: f64, hi: f64, k: usize) -> Vec<(f64, f64)> {
    let pts: Vec<f64> = (0..k)
        .map(|i| {
            if k == 1 {
                lo
            } else {
                lo + (hi - lo) * i as f64 / (k - 1) as f64
            }
        })
        .collect();
    pts.iter().flat_map(|&x| pts.iter().map(move |&y| (x, y))).collect()
}

/// Max over `grid` of the kernel expansion residual, per `n`.
pub fn kernel_expansion_rate(a: f64, n_list: &[usize], c: f64, grid: &[(f64, f64)]) -> Result<ExpansionReport> {
    check_n_list(n_list)?;
    let order = RealOrder::new(a)?;
    if grid.is_empty() {
        return domain("empty (x, y) grid");
    }
    let parts = grid
        .par_iter()
        .map(|&(x, y)| Ok((bessel_kernel_entire(a, x, y)?, correction_kernel(a, x, y)?)))
        .collect::<Result<Vec<_>>>()?;
    let results = n_list
        .par_iter()
        .map(|&n| {
            let kernel = LaguerreKernel::new(order, n, Scaling::Custom(c))?;
            let shift = c / (8.0 * n as f64);
            let mut worst = 0.0f64;
            for (&(x, y), &(bessel, corr)) in grid.iter().zip(&parts) {
                let r = kernel.eval(x, y)? - (bessel - shift * corr);
                worst = worst.max(r.abs());
            }
            Ok((worst, 0.0))
        })
        .collect::<Result<Vec<_>>>()?;
    let extent = grid.iter().map(|p| p.0.max(p.1)).fold(0.0, f64::max);
    ExpansionReport::build(a, extent, n_list, results)
}
