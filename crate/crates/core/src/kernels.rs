//! Entire (pre-multiplied) kernels `(xy)^{-a/2} K(x, y)`.
//!
//! Writing `g_b(x) = j_b(x/4)` for the entire Bessel series, the Bessel
//! kernel becomes
//!
//! ```text
//! (xy)^{-a/2} K_∞^a(x, y) = 4^{-a} [g_a(x) g_{a-1}(y) - g_{a-1}(x) g_a(y)] / (x - y)
//! ```
//!
//! and, since `g_b' = -g_{b+1}/4`, its confluent value is
//! `4^{-a-1} [g_a(x)^2 - g_{a-1}(x) g_{a+1}(x)]`.
//!
//! The finite-n Laguerre kernel under the scaling `X = κx`, with
//! `κ = (1 - (a+c)/(2n)) / (4n)`, is evaluated from its Christoffel–Darboux
//! form off the diagonal and from the sum of squares `Σ φ_k^2` on it.

use crate::error::{domain, Result};
use crate::specfun::{
    bessel_entire, bessel_entire_divided_difference, gamma_recip, laguerre, laguerre_divided_difference, log_gamma,
    RealOrder, Z_MAX,
};

/// Pairs closer than `NEAR_DIAGONAL · max(1, |x|)` use the confluent branch.
pub const NEAR_DIAGONAL: f64 = 1e-6;

/// Pairs closer than `CLOSE_PAIR · max(1, |x|)` (but outside the confluent
/// band) form the Christoffel–Darboux numerator from divided differences.
pub const CLOSE_PAIR: f64 = 1e-2;

/// Hard-edge scaling of the finite-n kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scaling {
    /// `X = x / (4n)`.
    Standard,
    /// `X = x (1 - a/(2n)) / (4n)`, the `c = 0` member of the modified family.
    Optimal,
    /// `X = x (1 - (a+c)/(2n)) / (4n)`.
    Custom(f64),
}

impl Scaling {
    /// The factor `4n·κ` multiplying `x/(4n)`.
    pub fn factor(self, a: f64, n: usize) -> f64 {
        let n = n as f64;
        match self {
            Scaling::Standard => 1.0,
            Scaling::Optimal => 1.0 - a / (2.0 * n),
            Scaling::Custom(c) => 1.0 - (a + c) / (2.0 * n),
        }
    }
}

impl std::fmt::Display for Scaling {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Scaling::Standard => write!(f, "standard"),
            Scaling::Optimal => write!(f, "optimal"),
            Scaling::Custom(c) => write!(f, "custom({c})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelFamily {
    BesselLimit,
    FiniteN { n: usize, scaling: Scaling },
}

/// A kernel acting on `L^2((0, s); x^a dx)` in entire form.
pub trait EntireKernel: Sync {
    /// The exponent `a` of the measure `x^a dx`.
    fn order(&self) -> f64;

    fn eval(&self, x: f64, y: f64) -> Result<f64>;

    /// Row-major `K(x_i, x_j)` over `nodes`.
    fn matrix(&self, nodes: &[f64]) -> Result<Vec<f64>> {
        let m = nodes.len();
        let mut out = vec![0.0; m * m];
        for i in 0..m {
            for j in i..m {
                let v = self.eval(nodes[i], nodes[j])?;
                out[i * m + j] = v;
                out[j * m + i] = v;
            }
        }
        Ok(out)
    }
}

#[inline]
fn near_diagonal(x: f64, y: f64) -> bool {
    (x - y).abs() < NEAR_DIAGONAL * x.abs().max(1.0)
}

#[inline]
fn close_pair(x: f64, y: f64) -> bool {
    (x - y).abs() < CLOSE_PAIR * x.abs().max(1.0)
}

fn check_arg(x: f64) -> Result<()> {
    if !(x >= 0.0 && x.is_finite()) {
        return domain(format!("kernel argument must be finite and >= 0, got {x}"));
    }
    Ok(())
}

/// `g_b(x) = j_b(x/4)`.
#[inline]
fn g(b: f64, x: f64) -> Result<f64> {
    bessel_entire(b, x / 4.0)
}

/// `ĵ_a(x) = x^{-a/2} J_a(√x) = 2^{-a} j_a(x/4)`.
pub fn jhat(a: f64, x: f64) -> Result<f64> {
    check_arg(x)?;
    Ok(2f64.powf(-a) * g(a, x)?)
}

/// The Bessel limit kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselKernel {
    a: f64,
}

#[derive(Debug, Clone, Copy)]
struct BesselNode {
    x: f64,
    below: f64,
    at: f64,
    above: f64,
}

impl BesselKernel {
    pub fn new(a: RealOrder) -> Self {
        Self { a: a.get() }
    }

    fn node(&self, x: f64) -> Result<BesselNode> {
        Ok(BesselNode {
            x,
            below: g(self.a - 1.0, x)?,
            at: g(self.a, x)?,
            above: g(self.a + 1.0, x)?,
        })
    }

    fn scale(&self) -> f64 {
        4f64.powf(-self.a)
    }

    fn off_diagonal(&self, p: &BesselNode, q: &BesselNode) -> Result<f64> {
        if close_pair(p.x, q.x) {
            // (g(x) - g(y))/(x - y) = Δj(x/4, y/4)/4
            let d_at = bessel_entire_divided_difference(self.a, p.x / 4.0, q.x / 4.0)?;
            let d_below = bessel_entire_divided_difference(self.a - 1.0, p.x / 4.0, q.x / 4.0)?;
            return Ok(0.25 * self.scale() * (p.below * d_at - p.at * d_below));
        }
        Ok(self.scale() * (p.at * q.below - p.below * q.at) / (p.x - q.x))
    }

    fn confluent(&self, p: &BesselNode) -> f64 {
        0.25 * self.scale() * (p.at * p.at - p.below * p.above)
    }
}

impl EntireKernel for BesselKernel {
    fn order(&self) -> f64 {
        self.a
    }

    fn eval(&self, x: f64, y: f64) -> Result<f64> {
        check_arg(x)?;
        check_arg(y)?;
        if x > 4.0 * Z_MAX || y > 4.0 * Z_MAX {
            return Err(crate::Error::Accuracy(format!(
                "Bessel kernel arguments ({x}, {y}) exceed {}",
                4.0 * Z_MAX
            )));
        }
        if near_diagonal(x, y) {
            return Ok(self.confluent(&self.node(0.5 * (x + y))?));
        }
        self.off_diagonal(&self.node(x)?, &self.node(y)?)
    }

    fn matrix(&self, nodes: &[f64]) -> Result<Vec<f64>> {
        let vals = nodes.iter().map(|&x| {
            check_arg(x)?;
            self.node(x)
        });
        let vals: Vec<BesselNode> = vals.collect::<Result<_>>()?;
        let m = nodes.len();
        let mut out = vec![0.0; m * m];
        for i in 0..m {
            out[i * m + i] = self.confluent(&vals[i]);
            for j in (i + 1)..m {
                let v = if near_diagonal(nodes[i], nodes[j]) {
                    self.eval(nodes[i], nodes[j])?
                } else {
                    self.off_diagonal(&vals[i], &vals[j])?
                };
                out[i * m + j] = v;
                out[j * m + i] = v;
            }
        }
        Ok(out)
    }
}

/// The finite-n Laguerre kernel `(xy)^{-a/2} K̃_n^a(x, y)` with
/// `K̃_n^a(x, y) dx = K_n^a(κx, κy) dX`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaguerreKernel {
    a: f64,
    n: usize,
    kappa: f64,
    log_prefactor: f64,
}

#[derive(Debug, Clone, Copy)]
struct LaguerreNode {
    x: f64,
    upper: f64,
    lower: f64,
    damping: f64,
}

impl LaguerreKernel {
    pub fn new(a: RealOrder, n: usize, scaling: Scaling) -> Result<Self> {
        let a = a.get();
        if n == 0 {
            return domain("matrix order n must be >= 1");
        }
        let factor = scaling.factor(a, n);
        if !(factor > 0.0 && factor.is_finite()) {
            return domain(format!(
                "scaling {scaling} gives non-positive factor {factor} at a = {a}, n = {n}"
            ));
        }
        let kappa = factor / (4.0 * n as f64);
        let nf = n as f64;
        let log_prefactor = a * kappa.ln() + log_gamma(nf + 1.0)? - log_gamma(nf + a)?;
        Ok(Self {
            a,
            n,
            kappa,
            log_prefactor,
        })
    }

    /// The map `x ↦ X = κx`.
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn node(&self, x: f64) -> LaguerreNode {
        let big_x = self.kappa * x;
        LaguerreNode {
            x,
            upper: laguerre(self.n, self.a, big_x),
            lower: laguerre(self.n, self.a - 1.0, big_x),
            damping: (-0.5 * big_x).exp(),
        }
    }

    fn off_diagonal(&self, p: &LaguerreNode, q: &LaguerreNode) -> f64 {
        let scale = self.log_prefactor.exp() * p.damping * q.damping;
        if close_pair(p.x, q.x) {
            let (px, qx) = (self.kappa * p.x, self.kappa * q.x);
            let (_, d_upper) = laguerre_divided_difference(self.n, self.a, px, qx);
            let (_, d_lower) = laguerre_divided_difference(self.n, self.a - 1.0, px, qx);
            return scale * self.kappa * (p.lower * d_upper - p.upper * d_lower);
        }
        scale * (p.upper * q.lower - p.lower * q.upper) / (p.x - q.x)
    }

    /// `κ^{a+1} e^{-κx} Σ_{k<n} k!/Γ(k+a+1) L_k^a(κx)^2`.
    fn confluent(&self, x: f64) -> f64 {
        let a = self.a;
        let big_x = self.kappa * x;
        let mut coef = gamma_recip(a + 1.0);
        let (mut prev, mut cur) = (0.0, 1.0);
        let mut sum = coef;
        for k in 1..self.n {
            let kf = (k - 1) as f64;
            let next = ((2.0 * kf + 1.0 + a - big_x) * cur - (kf + a) * prev) / (kf + 1.0);
            prev = cur;
            cur = next;
            coef *= k as f64 / (k as f64 + a);
            sum += coef * cur * cur;
        }
        ((a + 1.0) * self.kappa.ln() - big_x).exp() * sum
    }
}

impl EntireKernel for LaguerreKernel {
    fn order(&self) -> f64 {
        self.a
    }

    fn eval(&self, x: f64, y: f64) -> Result<f64> {
        check_arg(x)?;
        check_arg(y)?;
        if near_diagonal(x, y) {
            return Ok(self.confluent(0.5 * (x + y)));
        }
        Ok(self.off_diagonal(&self.node(x), &self.node(y)))
    }

    fn matrix(&self, nodes: &[f64]) -> Result<Vec<f64>> {
        for &x in nodes {
            check_arg(x)?;
        }
        let vals: Vec<LaguerreNode> = nodes.iter().map(|&x| self.node(x)).collect();
        let m = nodes.len();
        let mut out = vec![0.0; m * m];
        for i in 0..m {
            out[i * m + i] = self.confluent(nodes[i]);
            for j in (i + 1)..m {
                let v = if near_diagonal(nodes[i], nodes[j]) {
                    self.confluent(0.5 * (nodes[i] + nodes[j]))
                } else {
                    self.off_diagonal(&vals[i], &vals[j])
                };
                out[i * m + j] = v;
                out[j * m + i] = v;
            }
        }
        Ok(out)
    }
}

/// The rank-one kernel `ĵ_a(x) ĵ_a(y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrectionKernel {
    a: f64,
}

impl CorrectionKernel {
    pub fn new(a: RealOrder) -> Self {
        Self { a: a.get() }
    }
}

impl EntireKernel for CorrectionKernel {
    fn order(&self) -> f64 {
        self.a
    }

    fn eval(&self, x: f64, y: f64) -> Result<f64> {
        Ok(jhat(self.a, x)? * jhat(self.a, y)?)
    }

    fn matrix(&self, nodes: &[f64]) -> Result<Vec<f64>> {
        let v: Vec<f64> = nodes.iter().map(|&x| jhat(self.a, x)).collect::<Result<_>>()?;
        Ok(v.iter().flat_map(|p| v.iter().map(move |q| p * q)).collect())
    }
}

/// `base + τ ĵ_a ⊗ ĵ_a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankOneUpdate<K> {
    pub base: K,
    pub tau: f64,
}

impl<K: EntireKernel> EntireKernel for RankOneUpdate<K> {
    fn order(&self) -> f64 {
        self.base.order()
    }

    fn eval(&self, x: f64, y: f64) -> Result<f64> {
        let a = self.order();
        Ok(self.base.eval(x, y)? + self.tau * jhat(a, x)? * jhat(a, y)?)
    }

    fn matrix(&self, nodes: &[f64]) -> Result<Vec<f64>> {
        let mut out = self.base.matrix(nodes)?;
        let corr = CorrectionKernel { a: self.order() }.matrix(nodes)?;
        for (o, c) in out.iter_mut().zip(corr) {
            *o += self.tau * c;
        }
        Ok(out)
    }
}

/// Identifies a kernel family and its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    a: RealOrder,
    family: KernelFamily,
}

impl KernelSpec {
    pub fn bessel(a: RealOrder) -> Self {
        Self {
            a,
            family: KernelFamily::BesselLimit,
        }
    }

    pub fn finite(a: RealOrder, n: usize, scaling: Scaling) -> Result<Self> {
        // validates n and the scaling factor
        LaguerreKernel::new(a, n, scaling)?;
        Ok(Self {
            a,
            family: KernelFamily::FiniteN { n, scaling },
        })
    }

    pub fn order(&self) -> RealOrder {
        self.a
    }

    pub fn family(&self) -> KernelFamily {
        self.family
    }

    fn resolve(&self) -> Resolved {
        match self.family {
            KernelFamily::BesselLimit => Resolved::Bessel(BesselKernel::new(self.a)),
            KernelFamily::FiniteN { n, scaling } => {
                Resolved::Laguerre(LaguerreKernel::new(self.a, n, scaling).expect("validated at construction"))
            }
        }
    }
}

enum Resolved {
    Bessel(BesselKernel),
    Laguerre(LaguerreKernel),
}

impl EntireKernel for KernelSpec {
    fn order(&self) -> f64 {
        self.a.get()
    }

    fn eval(&self, x: f64, y: f64) -> Result<f64> {
        match self.resolve() {
            Resolved::Bessel(k) => k.eval(x, y),
            Resolved::Laguerre(k) => k.eval(x, y),
        }
    }

    fn matrix(&self, nodes: &[f64]) -> Result<Vec<f64>> {
        match self.resolve() {
            Resolved::Bessel(k) => k.matrix(nodes),
            Resolved::Laguerre(k) => k.matrix(nodes),
        }
    }
}

/// `(xy)^{-a/2} K_∞^a(x, y)`.
pub fn bessel_kernel_entire(a: f64, x: f64, y: f64) -> Result<f64> {
    BesselKernel { a }.eval(x, y)
}

/// `(xy)^{-a/2} K̃_n^a(x, y)` for a finite-n spec.
pub fn laguerre_kernel_entire(spec: &KernelSpec, x: f64, y: f64) -> Result<f64> {
    match spec.family {
        KernelFamily::FiniteN { .. } => spec.eval(x, y),
        KernelFamily::BesselLimit => domain("laguerre_kernel_entire needs a finite-n spec"),
    }
}

/// `ĵ_a(x) ĵ_a(y)` with `ĵ_a(x) = x^{-a/2} J_a(√x)`.
pub fn correction_kernel(a: f64, x: f64, y: f64) -> Result<f64> {
    CorrectionKernel { a }.eval(x, y)
}

/// First-order model `(xy)^{-a/2} K_∞^a - (c/8n) ĵ_a ⊗ ĵ_a` of the
/// modified-scaling Laguerre kernel.
pub fn kernel_expansion_model(a: f64, n: usize, c: f64, x: f64, y: f64) -> Result<f64> {
    Ok(bessel_kernel_entire(a, x, y)? - c / (8.0 * n as f64) * correction_kernel(a, x, y)?)
}

/// Laguerre kernel under the `c`-scaling minus its first-order model.
pub fn kernel_expansion_residual(a: f64, n: usize, c: f64, x: f64, y: f64) -> Result<f64> {
    let kernel = LaguerreKernel::new(RealOrder::new(a)?, n, Scaling::Custom(c))?;
    Ok(kernel.eval(x, y)? - kernel_expansion_model(a, n, c, x, y)?)
}
