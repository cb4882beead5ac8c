//! Smallest-eigenvalue distributions of the Laguerre unitary ensemble (LUE)
//! at the hard edge.
//!
//! The survival function `F_n^a(s) = P(λ_min ≥ s/(4n))` of an `n × n` LUE
//! matrix with parameter `a > -1`, and its Bessel-kernel limit
//! `F_∞^a(s)`, are both Fredholm determinants of integral operators on
//! `(0, s)`. Every kernel here is evaluated in its *entire* form
//! `(xy)^{-a/2} K(x, y)`, and the determinant is discretized against the
//! measure `x^a dx` with a Gauss–Jacobi rule. That keeps the Nyström method
//! spectrally accurate for non-integer `a`.
//!
//! Module map:
//!
//! * [`specfun`]: log-gamma, the entire Bessel series, Laguerre polynomials.
//! * [`quadrature`]: Gauss–Jacobi rules via Golub–Welsch.
//! * [`kernels`]: Bessel, finite-n Laguerre and rank-one correction kernels.
//! * [`fredholm`]: Nyström determinants, Gram determinants, resolvent forms.
//! * [`distributions`]: `F_n^a`, `F_∞^a` and the density `f_∞^a`.
//! * [`expansion_lab`]: empirical convergence rates of the `1/n` expansion.
//! * [`mc_oracle`]: Monte Carlo sampling of `λ_min` and a KS comparison.

// negated comparisons are deliberate: NaN must fail range checks
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod distributions;
pub mod error;
pub mod expansion_lab;
pub mod fredholm;
pub mod kernels;
mod linalg;
pub mod mc_oracle;
pub mod quadrature;
pub mod specfun;

pub use distributions::{
    finite_distribution, identity_check, limit_density, limit_distribution, DensityMethod, DistributionRow,
    DistributionTable, IdentityCheck,
};
pub use error::{Error, Result};
pub use expansion_lab::{fit_slope, ExpansionReport};
pub use fredholm::{gram_det, nystrom_det, DeterminantResult};
pub use kernels::{EntireKernel, KernelFamily, KernelSpec, Scaling};
pub use quadrature::{gauss_jacobi, QuadratureRule};
pub use specfun::RealOrder;

/// Crate version, recorded in emitted metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
