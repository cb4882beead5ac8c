//! Survival functions `F_n^a(s) = P(λ_min ≥ s/(4n))`, their hard-edge limit
//! `F_∞^a(s)`, and the derivative `f_∞^a = dF_∞^a/ds`.
//!
//! `f` follows the survival convention and is non-positive; the probability
//! density of the scaled smallest eigenvalue is `-f`.

use rayon::prelude::*;

use crate::error::{numeric, Result};
use crate::fredholm::{
    log_derivative_fd, nystrom_det, resolvent_kernel_diagonal, resolvent_quadratic_form, DeterminantResult,
};
use crate::kernels::{KernelSpec, Scaling};
use crate::specfun::{RealOrder, Z_MAX};

/// Upper end of the `s`-range over which results have been validated.
pub const VALIDATED_S_MAX: f64 = 40.0;

/// How `f_∞^a` is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityMethod {
    /// `f = -F ⟨(I-K)^{-1}φ_a, φ_a⟩ / (4s)`.
    Resolvent,
    /// `f = F · d/ds log F` by Richardson-refined central differences.
    FiniteDifference,
}

fn check_s(s: f64) -> Result<()> {
    if !(s > 0.0 && s <= 4.0 * Z_MAX) {
        return crate::error::domain(format!("s = {s} outside (0, {}]", 4.0 * Z_MAX));
    }
    Ok(())
}

/// `F_∞^a(s) = det(I - K_∞^a|_{L^2(0,s)})`.
pub fn limit_distribution(a: f64, s: f64, m: usize) -> Result<DeterminantResult> {
    check_s(s)?;
    nystrom_det(&KernelSpec::bessel(RealOrder::new(a)?), s, m)
}

/// `F_n^a(s)` under the given scaling: the determinant on `(0, κs)` with
/// `κ = 1/(4n)` (standard), `(1 - a/(2n))/(4n)` (optimal) or
/// `(1 - (a+c)/(2n))/(4n)` (custom).
pub fn finite_distribution(a: f64, n: usize, s: f64, scaling: Scaling, m: usize) -> Result<DeterminantResult> {
    check_s(s)?;
    nystrom_det(&KernelSpec::finite(RealOrder::new(a)?, n, scaling)?, s, m)
}

/// `f_∞^a(s) = dF_∞^a/ds` (non-positive).
pub fn limit_density(a: f64, s: f64, m: usize, method: DensityMethod) -> Result<f64> {
    check_s(s)?;
    let spec = KernelSpec::bessel(RealOrder::new(a)?);
    let f = nystrom_det(&spec, s, m)?.value;
    let log_derivative = match method {
        DensityMethod::Resolvent => -resolvent_quadratic_form(&spec, s, m)? / (4.0 * s),
        DensityMethod::FiniteDifference => log_derivative_fd(&spec, s, m)?,
    };
    Ok(f * log_derivative)
}

/// Both sides of `-¼ ⟨(I-K)^{-1}φ_a, φ_a⟩ = s · d/ds log F_∞^a(s)`, with the
/// right side computed from the resolvent kernel `-R(s, s)` and from finite
/// differences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityCheck {
    pub a: f64,
    pub s: f64,
    pub quadratic_form: f64,
    pub lhs: f64,
    pub rhs_resolvent: f64,
    pub rhs_fd: f64,
}

impl IdentityCheck {
    pub fn residual_resolvent(&self) -> f64 {
        (self.lhs - self.rhs_resolvent).abs()
    }

    pub fn residual_fd(&self) -> f64 {
        (self.lhs - self.rhs_fd).abs()
    }
}

pub fn identity_check(a: f64, s: f64, m: usize) -> Result<IdentityCheck> {
    check_s(s)?;
    let spec = KernelSpec::bessel(RealOrder::new(a)?);
    let quadratic_form = resolvent_quadratic_form(&spec, s, m)?;
    Ok(IdentityCheck {
        a,
        s,
        quadratic_form,
        lhs: -0.25 * quadratic_form,
        rhs_resolvent: -s * resolvent_kernel_diagonal(&spec, s, m)?,
        rhs_fd: s * log_derivative_fd(&spec, s, m)?,
    })
}

/// One grid point of a [`DistributionTable`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionRow {
    pub s: f64,
    /// Survival function value.
    pub survival: f64,
    /// `dF/ds`, non-positive.
    pub derivative: f64,
    pub error_estimate: f64,
}

/// `(s, F, f)` rows over a grid with the parameters that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionTable {
    pub a: f64,
    /// `None` for the hard-edge limit.
    pub n: Option<usize>,
    /// `None` for the hard-edge limit.
    pub scaling: Option<Scaling>,
    pub m: usize,
    pub rows: Vec<DistributionRow>,
}

impl DistributionTable {
    /// Tabulates `F_∞^a` and `f_∞^a` (resolvent method) over `grid`.
    pub fn limit(a: f64, grid: &[f64], m: usize) -> Result<Self> {
        let rows = grid
            .par_iter()
            .map(|&s| {
                let spec = KernelSpec::bessel(RealOrder::new(a)?);
                check_s(s)?;
                let det = nystrom_det(&spec, s, m)?;
                let q = resolvent_quadratic_form(&spec, s, m)?;
                Ok(DistributionRow {
                    s,
                    survival: det.value,
                    derivative: -det.value * q / (4.0 * s),
                    error_estimate: det.error_estimate,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let table = Self {
            a,
            n: None,
            scaling: None,
            m,
            rows,
        };
        table.validate()?;
        Ok(table)
    }

    /// Tabulates `F_n^a` over `grid`; the derivative comes from finite
    /// differences of `log F_n^a`.
    pub fn finite(a: f64, n: usize, scaling: Scaling, grid: &[f64], m: usize) -> Result<Self> {
        let spec = KernelSpec::finite(RealOrder::new(a)?, n, scaling)?;
        let rows = grid
            .par_iter()
            .map(|&s| {
                check_s(s)?;
                let det = nystrom_det(&spec, s, m)?;
                Ok(DistributionRow {
                    s,
                    survival: det.value,
                    derivative: det.value * log_derivative_fd(&spec, s, m)?,
                    error_estimate: det.error_estimate,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let table = Self {
            a,
            n: Some(n),
            scaling: Some(scaling),
            m,
            rows,
        };
        table.validate()?;
        Ok(table)
    }

    /// Checks range, sign and monotonicity of the rows (in grid order
    /// sorted by `s`).
    pub fn validate(&self) -> Result<()> {
        const SLACK: f64 = 1e-12;
        for r in &self.rows {
            if !(r.s > 0.0) || !(r.survival > 0.0 && r.survival <= 1.0 + SLACK) || !(r.derivative <= SLACK) {
                return numeric(format!("invalid distribution row {r:?}"));
            }
        }
        let mut sorted: Vec<&DistributionRow> = self.rows.iter().collect();
        sorted.sort_by(|p, q| p.s.total_cmp(&q.s));
        for w in sorted.windows(2) {
            if w[1].survival > w[0].survival + SLACK {
                return numeric(format!(
                    "survival function increases between s = {} and s = {}",
                    w[0].s, w[1].s
                ));
            }
        }
        Ok(())
    }
}
