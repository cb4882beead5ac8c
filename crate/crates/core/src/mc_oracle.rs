//! Monte Carlo sampling of the LUE smallest eigenvalue and a
//! Kolmogorov–Smirnov comparison against the Fredholm-determinant law.
//!
//! Only integer `a` is sampled: `λ_min` is the squared smallest singular
//! value of an `n × (n+a)` complex Ginibre matrix. Sample `i` draws from
//! the ChaCha stream `(seed, i)`, so batches do not depend on the thread
//! count.

use nalgebra::{Complex, DMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{domain, numeric, Result};
use crate::fredholm::nystrom_det;
use crate::kernels::{KernelSpec, Scaling};
use crate::specfun::RealOrder;

/// Largest matrix order accepted by [`sample_smallest`].
pub const MAX_SAMPLE_ORDER: usize = 200;

/// Asymptotic two-sided KS critical value coefficient at `α = 0.01`.
pub const KS_CRITICAL_1PCT: f64 = 1.63;

/// Sampled smallest eigenvalues (unscaled) of `count` LUE matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub a: u32,
    pub n: usize,
    pub count: usize,
    pub seed: u64,
    pub values: Vec<f64>,
}

fn sample_one(a: u32, n: usize, seed: u64, index: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let cols = n + a as usize;
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let mut draw = || -> f64 {
        let v: f64 = StandardNormal.sample(&mut rng);
        scale * v
    };
    // column-major fill keeps the draw order fixed
    let mut entries = Vec::with_capacity(n * cols);
    for _ in 0..n * cols {
        let re = draw();
        let im = draw();
        entries.push(Complex::new(re, im));
    }
    let x = DMatrix::from_vec(n, cols, entries);
    let svd = x
        .try_svd(false, false, f64::EPSILON, 1000 * n.max(10))
        .ok_or_else(|| crate::Error::Numeric(format!("SVD did not converge for sample {index}")))?;
    let smallest = svd.singular_values.iter().copied().fold(f64::INFINITY, f64::min);
    let lambda = smallest * smallest;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return numeric(format!("sample {index} produced smallest eigenvalue {lambda}"));
    }
    Ok(lambda)
}

/// Draws `count` smallest eigenvalues of `n × n` LUE matrices with parameter `a`.
pub fn sample_smallest(a: u32, n: usize, count: usize, seed: u64) -> Result<SampleBatch> {
    if n == 0 || n > MAX_SAMPLE_ORDER {
        return domain(format!("matrix order n = {n} outside 1..={MAX_SAMPLE_ORDER}"));
    }
    if count == 0 {
        return domain("sample count must be positive");
    }
    let values = (0..count as u64)
        .into_par_iter()
        .map(|i| sample_one(a, n, seed, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(SampleBatch {
        a,
        n,
        count,
        seed,
        values,
    })
}

/// Outcome of a KS comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsOutcome {
    pub statistic: f64,
    pub critical: f64,
    pub pass_at_1pct: bool,
}

/// Two-sided KS statistic of sorted samples against CDF values at those samples.
fn ks_from_cdf_values(cdf_at_sorted: &[f64]) -> KsOutcome {
    let count = cdf_at_sorted.len() as f64;
    let statistic = cdf_at_sorted
        .iter()
        .enumerate()
        .map(|(i, &f)| {
            let above = (i as f64 + 1.0) / count - f;
            let below = f - i as f64 / count;
            above.max(below)
        })
        .fold(0.0, f64::max);
    let critical = KS_CRITICAL_1PCT / count.sqrt();
    KsOutcome {
        statistic,
        critical,
        pass_at_1pct: statistic < critical,
    }
}

fn sorted_values(batch: &SampleBatch) -> Vec<f64> {
    let mut v = batch.values.clone();
    v.sort_by(f64::total_cmp);
    v
}

/// KS comparison of `batch` against `cdf(t) = P(λ_min < t)`.
pub fn ks_compare(batch: &SampleBatch, cdf: impl Fn(f64) -> f64) -> Result<KsOutcome> {
    if batch.values.len() < 1000 {
        return domain(format!(
            "KS comparison needs at least 1000 samples, got {}",
            batch.values.len()
        ));
    }
    let cdf_values: Vec<f64> = sorted_values(batch).into_iter().map(cdf).collect();
    Ok(ks_from_cdf_values(&cdf_values))
}

/// KS comparison against `1 - F_n^a(4n t)` from the Fredholm determinant
/// (standard scaling, `m` nodes). CDF evaluations run in parallel.
pub fn ks_against_fredholm(batch: &SampleBatch, m: usize) -> Result<KsOutcome> {
    if batch.values.len() < 1000 {
        return domain(format!(
            "KS comparison needs at least 1000 samples, got {}",
            batch.values.len()
        ));
    }
    let spec = KernelSpec::finite(RealOrder::new(batch.a as f64)?, batch.n, Scaling::Standard)?;
    let scale = 4.0 * batch.n as f64;
    let cdf_values = sorted_values(batch)
        .par_iter()
        .map(|&t| Ok(1.0 - nystrom_det(&spec, scale * t, m)?.value))
        .collect::<Result<Vec<_>>>()?;
    Ok(ks_from_cdf_values(&cdf_values))
}
