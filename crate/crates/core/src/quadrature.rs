//! Gauss–Jacobi rules for `∫_0^s g(x) x^a dx`.
//!
//! Nodes and weights come from the Golub–Welsch eigenproblem of the Jacobi
//! matrix of the weight `x^a` on `(0, 1)`, solved by implicit QL with
//! Wilkinson shifts while accumulating only the first eigenvector row.

use crate::error::{domain, numeric, Result};

/// Upper bound on the node count of a single rule.
pub const MAX_NODES: usize = 500;

/// Default node count for determinant evaluations.
pub const DEFAULT_NODES: usize = 50;

/// Gauss rule for the measure `x^a dx` on `(0, s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    s: f64,
    a: f64,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Right endpoint of the integration interval.
    pub fn endpoint(&self) -> f64 {
        self.s
    }

    /// Exponent of the weight `x^a`.
    pub fn order(&self) -> f64 {
        self.a
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Maps the rule onto `(0, s)`: nodes scale by `s/s_old`, weights by
    /// `(s/s_old)^{a+1}`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        if !(s > 0.0 && s.is_finite()) {
            return domain(format!("rule endpoint must be finite and > 0, got {s}"));
        }
        let factor = s / self.s;
        let wfactor = factor.powf(self.a + 1.0);
        Ok(Self {
            nodes: self.nodes.iter().map(|x| x * factor).collect(),
            weights: self.weights.iter().map(|w| w * wfactor).collect(),
            s,
            a: self.a,
        })
    }

    /// `Σ w_i g(x_i)`.
    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * g(x)).sum()
    }
}

/// Free-function form of [`QuadratureRule::scaled`].
pub fn scale_rule(rule: &QuadratureRule, s: f64) -> Result<QuadratureRule> {
    rule.scaled(s)
}

/// `m`-point Gauss rule for `x^a dx` on `(0, 1)`.
pub fn gauss_jacobi(m: usize, a: f64) -> Result<QuadratureRule> {
    if m == 0 || m > MAX_NODES {
        return domain(format!("node count m = {m} outside 1..={MAX_NODES}"));
    }
    if !(a > -1.0 && a.is_finite()) {
        return domain(format!("weight exponent a = {a} must be finite and > -1"));
    }

    // Jacobi matrix for (1+t)^a on (-1, 1), mapped to x = (1+t)/2.
    let mut diag = vec![0.0; m];
    let mut off = vec![0.0; m];
    diag[0] = 0.5 * (1.0 + a / (a + 2.0));
    for k in 1..m {
        let kf = k as f64;
        let two_k_a = 2.0 * kf + a;
        diag[k] = 0.5 * (1.0 + a * a / (two_k_a * (two_k_a + 2.0)));
        let b2 = 4.0 * kf * kf * (kf + a) * (kf + a) / (two_k_a * two_k_a * (two_k_a + 1.0) * (two_k_a - 1.0));
        off[k - 1] = 0.5 * b2.sqrt();
    }

    let mut first_row = vec![0.0; m];
    first_row[0] = 1.0;
    tridiagonal_ql(&mut diag, &mut off, &mut first_row)?;

    let mass = 1.0 / (a + 1.0);
    let mut pairs: Vec<(f64, f64)> = diag
        .into_iter()
        .zip(first_row)
        .map(|(x, v)| (x, mass * v * v))
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    let (nodes, weights) = pairs.into_iter().unzip();
    Ok(QuadratureRule {
        nodes,
        weights,
        s: 1.0,
        a,
    })
}

/// Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix.
///
/// `off[i]` couples rows `i` and `i+1` (the last entry is ignored). On
/// return `diag` holds the eigenvalues and `row` the first row of the
/// accumulated rotations applied to the initial `row`.
pub(crate) fn tridiagonal_ql(diag: &mut [f64], off: &mut [f64], row: &mut [f64]) -> Result<()> {
    let n = diag.len();
    if n < 2 {
        return Ok(());
    }
    off[n - 1] = 0.0;
    let max_sweeps = 50 * n;
    let mut sweeps = 0;

    for l in 0..n {
        loop {
            let mut mm = l;
            while mm < n - 1 {
                let dd = diag[mm].abs() + diag[mm + 1].abs();
                if off[mm].abs() <= f64::EPSILON * dd {
                    break;
                }
                mm += 1;
            }
            if mm == l {
                break;
            }
            sweeps += 1;
            if sweeps > max_sweeps {
                return numeric(format!("tridiagonal QL did not converge within {max_sweeps} sweeps"));
            }

            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[mm] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = mm;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[mm] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;

                let f = row[i + 1];
                row[i + 1] = s * row[i] + c * f;
                row[i] = c * row[i] - s * f;
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[mm] = 0.0;
        }
    }
    Ok(())
}
