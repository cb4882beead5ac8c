//! Nyström discretization of Fredholm determinants on `L^2((0, s); x^a dx)`.
//!
//! With a Gauss–Jacobi rule `(x_i, w_i)` for `x^a dx` the operator
//! `I - K̂` becomes the symmetric matrix `δ_ij - √w_i K̂(x_i, x_j) √w_j`.

use crate::error::{domain, numeric, Error, Result};
use crate::kernels::{jhat, BesselKernel, EntireKernel, KernelFamily, KernelSpec, RankOneUpdate};
use crate::linalg::{Lu, SquareMatrix};
use crate::quadrature::{gauss_jacobi, QuadratureRule, MAX_NODES};
use crate::specfun::{gamma_recip, RealOrder};

/// Smallest node count accepted by [`nystrom_det`].
pub const MIN_NODES: usize = 5;

/// Node offset used for the a-posteriori error estimate.
pub const ESTIMATE_OFFSET: usize = 10;

/// Slack above 1 tolerated before a determinant is declared out of range.
const RANGE_SLACK: f64 = 1e-10;

/// A Fredholm determinant together with `|value(m) - value(m ± 10)|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeterminantResult {
    pub value: f64,
    pub error_estimate: f64,
    pub m: usize,
}

fn rule_on(a: f64, s: f64, m: usize) -> Result<QuadratureRule> {
    if !(s > 0.0 && s.is_finite()) {
        return domain(format!("interval endpoint s must be finite and > 0, got {s}"));
    }
    gauss_jacobi(m, a)?.scaled(s)
}

/// `I - W^{1/2} K W^{1/2}` and `W^{1/2}`.
fn discretize<K: EntireKernel + ?Sized>(kernel: &K, rule: &QuadratureRule) -> Result<(SquareMatrix, Vec<f64>)> {
    let sw: Vec<f64> = rule.weights().iter().map(|w| w.sqrt()).collect();
    let k = kernel.matrix(rule.nodes())?;
    let m = rule.len();
    let d = SquareMatrix::from_fn(m, |i, j| {
        let delta = if i == j { 1.0 } else { 0.0 };
        delta - sw[i] * k[i * m + j] * sw[j]
    });
    Ok((d, sw))
}

/// Signed `det(I - K)` with `m` nodes, no range check.
pub fn nystrom_raw<K: EntireKernel + ?Sized>(kernel: &K, s: f64, m: usize) -> Result<f64> {
    let rule = rule_on(kernel.order(), s, m)?;
    let (d, _) = discretize(kernel, &rule)?;
    Ok(Lu::factor(d)?.det())
}

fn checked_value<K: EntireKernel + ?Sized>(kernel: &K, s: f64, m: usize) -> Result<f64> {
    let value = nystrom_raw(kernel, s, m)?;
    if !(value > 0.0 && value <= 1.0 + RANGE_SLACK) {
        return numeric(format!(
            "determinant {value:e} outside (0, 1] at s = {s}, m = {m}, a = {}",
            kernel.order()
        ));
    }
    Ok(value)
}

/// `det(I - K̂)` on `L^2((0, s); x^a dx)` with an `m` vs `m+10` error estimate.
pub fn nystrom_det<K: EntireKernel + ?Sized>(kernel: &K, s: f64, m: usize) -> Result<DeterminantResult> {
    if !(MIN_NODES..=MAX_NODES).contains(&m) {
        return domain(format!("node count m = {m} outside {MIN_NODES}..={MAX_NODES}"));
    }
    let value = checked_value(kernel, s, m)?;
    // the partner rule stays within the node limit
    let partner = if m + ESTIMATE_OFFSET <= MAX_NODES {
        m + ESTIMATE_OFFSET
    } else {
        m - ESTIMATE_OFFSET
    };
    let other = checked_value(kernel, s, partner)?;
    Ok(DeterminantResult {
        value,
        error_estimate: (value - other).abs(),
        m,
    })
}

/// `det(I_n - G)` with the Gram matrix `G_kl = ∫_0^t φ_k^a φ_l^a dx`.
pub fn gram_det(a: f64, n: usize, t: f64, m: usize) -> Result<f64> {
    RealOrder::new(a)?;
    if n == 0 {
        return domain("gram_det needs n >= 1");
    }
    if m < n + 20 {
        return Err(Error::Accuracy(format!(
            "gram_det needs m >= n + 20 (m = {m}, n = {n})"
        )));
    }
    let rule = rule_on(a, t, m)?;

    // rows: e^{-x/2} √(k!/Γ(k+a+1)) L_k^a(x) at each node, k < n
    let mut basis = vec![0.0; m * n];
    for (i, &x) in rule.nodes().iter().enumerate() {
        let damping = (-0.5 * x).exp();
        let mut coef = gamma_recip(a + 1.0);
        let (mut prev, mut cur) = (0.0, 1.0);
        basis[i * n] = damping * coef.sqrt();
        for k in 1..n {
            let kf = (k - 1) as f64;
            let next = ((2.0 * kf + 1.0 + a - x) * cur - (kf + a) * prev) / (kf + 1.0);
            prev = cur;
            cur = next;
            coef *= k as f64 / (k as f64 + a);
            basis[i * n + k] = damping * coef.sqrt() * cur;
        }
    }
    let w = rule.weights();
    let d = SquareMatrix::from_fn(n, |k, l| {
        let g: f64 = (0..m).map(|i| w[i] * basis[i * n + k] * basis[i * n + l]).sum();
        if k == l {
            1.0 - g
        } else {
            -g
        }
    });
    Ok(Lu::factor(d)?.det())
}

/// `⟨(I - K̂)^{-1} ĵ_a, ĵ_a⟩` in `L^2((0, s); x^a dx)` for any entire kernel.
pub fn resolvent_quadratic_form_with<K: EntireKernel + ?Sized>(kernel: &K, s: f64, m: usize) -> Result<f64> {
    let a = kernel.order();
    let rule = rule_on(a, s, m)?;
    let (d, sw) = discretize(kernel, &rule)?;
    let rhs: Vec<f64> = rule
        .nodes()
        .iter()
        .zip(&sw)
        .map(|(&x, &r)| Ok(r * jhat(a, x)?))
        .collect::<Result<_>>()?;
    let v = Lu::factor(d)?.solve(&rhs);
    Ok(rhs.iter().zip(&v).map(|(p, q)| p * q).sum())
}

/// `⟨(I - K)^{-1} φ_a, φ_a⟩_{L^2(0, s)}` with `φ_a(x) = J_a(√x)` and `K` the
/// Bessel kernel.
///
/// Only the Bessel limit is supported; a finite-n spec is a domain error.
pub fn resolvent_quadratic_form(spec: &KernelSpec, s: f64, m: usize) -> Result<f64> {
    match spec.family() {
        KernelFamily::BesselLimit => resolvent_quadratic_form_with(spec, s, m),
        KernelFamily::FiniteN { .. } => domain("resolvent quadratic form is defined for the Bessel limit kernel only"),
    }
}

/// Diagonal value `R(s, s)` of the resolvent kernel `K (I - K)^{-1}` of the
/// original operator on `L^2(0, s)`, by Nyström interpolation at the
/// endpoint. Since `d/ds log det(I - K|_(0,s)) = -R(s, s)`, this is a
/// second route to the log-derivative that does not use `ĵ_a`.
pub fn resolvent_kernel_diagonal<K: EntireKernel + ?Sized>(kernel: &K, s: f64, m: usize) -> Result<f64> {
    let a = kernel.order();
    let rule = rule_on(a, s, m)?;
    let (d, sw) = discretize(kernel, &rule)?;
    let ks: Vec<f64> = rule
        .nodes()
        .iter()
        .zip(&sw)
        .map(|(&x, &r)| Ok(r * kernel.eval(x, s)?))
        .collect::<Result<_>>()?;
    let u = Lu::factor(d)?.solve(&ks);
    let entire = kernel.eval(s, s)? + ks.iter().zip(&u).map(|(p, q)| p * q).sum::<f64>();
    // back from x^a dx to dx
    Ok(s.powf(a) * entire)
}

/// `d/ds log det(I - K|_(0,s))`.
///
/// The Bessel kernel uses `-⟨(I-K)^{-1}φ_a, φ_a⟩ / (4s)`; finite-n kernels
/// fall back to [`log_derivative_fd`].
pub fn log_derivative(spec: &KernelSpec, s: f64, m: usize) -> Result<f64> {
    match spec.family() {
        KernelFamily::BesselLimit => Ok(-resolvent_quadratic_form(spec, s, m)? / (4.0 * s)),
        KernelFamily::FiniteN { .. } => log_derivative_fd(spec, s, m),
    }
}

/// Central difference of `log det` with `h = 1e-3·s` and one Richardson step.
pub fn log_derivative_fd<K: EntireKernel + ?Sized>(kernel: &K, s: f64, m: usize) -> Result<f64> {
    if !(s > 0.0 && s.is_finite()) {
        return domain(format!("s must be finite and > 0, got {s}"));
    }
    let log_det = |x: f64| -> Result<f64> { Ok(checked_value(kernel, x, m)?.ln()) };
    let central = |h: f64| -> Result<f64> { Ok((log_det(s + h)? - log_det(s - h)?) / (2.0 * h)) };
    let h = 1e-3 * s;
    let coarse = central(h)?;
    let fine = central(0.5 * h)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Both sides of the determinant lemma
/// `det(I - K - τ ĵ⊗ĵ) = det(I - K) (1 - τ ⟨(I-K)^{-1} ĵ, ĵ⟩)`
/// for the Bessel kernel, discretized on the same nodes.
pub fn rank_one_lemma(a: RealOrder, tau: f64, s: f64, m: usize) -> Result<(f64, f64)> {
    let base = BesselKernel::new(a);
    let lhs = nystrom_raw(&RankOneUpdate { base, tau }, s, m)?;
    let rhs = nystrom_raw(&base, s, m)? * (1.0 - tau * resolvent_quadratic_form_with(&base, s, m)?);
    Ok((lhs, rhs))
}
