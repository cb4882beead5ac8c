//! Acceptance criteria. Each criterion prints one PASS/FAIL line; the test
//! fails if any criterion fails.

use std::io::Write;
use std::time::{Duration, Instant};

use hardedge::expansion_lab::{
    distribution_report, kernel_expansion_rate, mehler_heine_report, square_grid, Claim, ExpansionReport, DEFAULT_M,
    DEFAULT_N_LIST, FIRST_ORDER_WINDOW, SECOND_ORDER_WINDOW,
};
use hardedge::fredholm::rank_one_lemma;
use hardedge::mc_oracle::{ks_against_fredholm, sample_smallest};
use hardedge::{
    finite_distribution, gram_det, identity_check, limit_distribution, nystrom_det, KernelSpec, RealOrder, Scaling,
};
use statrs::function::gamma::gamma_ur;

struct Verdict {
    pass: bool,
    detail: String,
}

type Check = fn() -> Verdict;

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn slope_text(r: &ExpansionReport) -> String {
    match r.fitted_slope {
        Some(s) => format!("{s:.4}"),
        None => "degenerate".to_string(),
    }
}

fn closed_form_a0() -> Verdict {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for &s in &[0.1, 1.0, 4.0, 10.0] {
        let v = limit_distribution(0.0, s, 50).unwrap().value;
        worst = worst.max((v - (-s / 4.0f64).exp()).abs());
    }
    let elapsed = start.elapsed();
    verdict(
        worst <= 1e-10 && elapsed < Duration::from_secs(1),
        format!("max error {worst:.2e}, {elapsed:.2?}"),
    )
}

fn finite_a0_exact() -> Verdict {
    let mut worst = 0.0f64;
    for &n in &[1usize, 5, 50] {
        let v = finite_distribution(0.0, n, 4.0, Scaling::Standard, 50).unwrap().value;
        worst = worst.max((v - (-1.0f64).exp()).abs());
    }
    verdict(worst <= 1e-10, format!("max error {worst:.2e}"))
}

fn one_by_one_law() -> Verdict {
    let mut worst = 0.0f64;
    for &a in &[0.5, 1.0, 2.0] {
        for &s in &[1.0, 4.0] {
            let v = finite_distribution(a, 1, s, Scaling::Standard, 50).unwrap().value;
            worst = worst.max((v - gamma_ur(a + 1.0, s / 4.0)).abs());
        }
    }
    verdict(worst <= 1e-10, format!("max error {worst:.2e}"))
}

fn nystrom_vs_gram() -> Verdict {
    let mut worst = 0.0f64;
    for &(a, n, t) in &[(1.5, 10usize, 0.3), (-0.5, 25, 0.1)] {
        let spec = KernelSpec::finite(RealOrder::new(a).unwrap(), n, Scaling::Standard).unwrap();
        let ny = nystrom_det(&spec, 4.0 * n as f64 * t, 50).unwrap().value;
        let gr = gram_det(a, n, t, n + 40).unwrap();
        worst = worst.max((ny - gr).abs());
    }
    verdict(worst <= 1e-10, format!("max difference {worst:.2e}"))
}

fn conjecture_rate() -> Verdict {
    let start = Instant::now();
    let conj = distribution_report(Claim::Conjecture, 1.0, 4.0, &DEFAULT_N_LIST, DEFAULT_M).unwrap();
    let unc = distribution_report(Claim::Uncorrected, 1.0, 4.0, &DEFAULT_N_LIST, DEFAULT_M).unwrap();
    let elapsed = start.elapsed();
    verdict(
        conj.slope_within(SECOND_ORDER_WINDOW)
            && unc.slope_within(FIRST_ORDER_WINDOW)
            && !conj.quadrature_limited()
            && elapsed < Duration::from_secs(120),
        format!(
            "corrected slope {}, uncorrected slope {}, {elapsed:.2?}",
            slope_text(&conj),
            slope_text(&unc)
        ),
    )
}

fn optimal_rate() -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for &a in &[1.0, 2.0] {
        let opt = distribution_report(Claim::OptimalScaling, a, 4.0, &DEFAULT_N_LIST, DEFAULT_M).unwrap();
        let std = distribution_report(Claim::Uncorrected, a, 4.0, &DEFAULT_N_LIST, DEFAULT_M).unwrap();
        let i = DEFAULT_N_LIST.iter().position(|&n| n == 100).unwrap();
        let ratio = opt.residuals[i] / std.residuals[i];
        pass &= opt.slope_within(SECOND_ORDER_WINDOW) && ratio < 0.1;
        parts.push(format!("a={a}: slope {}, ratio@100 {ratio:.3e}", slope_text(&opt)));
    }
    verdict(pass, parts.join("; "))
}

fn mehler_heine_rate() -> Verdict {
    let r = mehler_heine_report(1.5, 3.0, &DEFAULT_N_LIST).unwrap();
    verdict(r.slope_within(SECOND_ORDER_WINDOW), format!("slope {}", slope_text(&r)))
}

fn kernel_rate() -> Verdict {
    let grid = square_grid(0.0, 8.0, 9);
    let mut pass = true;
    let mut parts = Vec::new();
    for &c in &[0.0, -1.0] {
        let r = kernel_expansion_rate(1.0, &DEFAULT_N_LIST, c, &grid).unwrap();
        pass &= r.slope_within(SECOND_ORDER_WINDOW);
        parts.push(format!("c={c}: slope {}", slope_text(&r)));
    }
    verdict(pass, parts.join("; "))
}

fn resolvent_identity() -> Verdict {
    let (mut worst_r, mut worst_fd) = (0.0f64, 0.0f64);
    for &(a, s) in &[(0.5, 2.0), (2.0, 6.0)] {
        let c = identity_check(a, s, 50).unwrap();
        worst_r = worst_r.max(c.residual_resolvent());
        worst_fd = worst_fd.max(c.residual_fd());
    }
    let mut worst_a0 = 0.0f64;
    for &s in &[0.5, 4.0, 10.0] {
        let c = identity_check(0.0, s, 50).unwrap();
        worst_a0 = worst_a0.max((c.quadratic_form - s).abs());
    }
    verdict(
        worst_r <= 1e-8 && worst_fd <= 1e-5 && worst_a0 <= 1e-8,
        format!("resolvent {worst_r:.2e}, finite difference {worst_fd:.2e}, a=0 form {worst_a0:.2e}"),
    )
}

fn determinant_lemma() -> Verdict {
    let (a, n) = (1.0, 100.0);
    let (lhs, rhs) = rank_one_lemma(RealOrder::new(a).unwrap(), a / (8.0 * n), 4.0, 50).unwrap();
    let diff = (lhs - rhs).abs();
    verdict(diff <= 1e-10, format!("difference {diff:.2e}"))
}

fn spectral_convergence() -> Verdict {
    let mut worst = 0.0f64;
    for &a in &[-0.5, 0.0, 2.0] {
        for &s in &[0.1, 0.5, 1.0, 2.0, 4.0, 6.0, 8.0, 10.0] {
            let d20 = limit_distribution(a, s, 20).unwrap().value;
            let d40 = limit_distribution(a, s, 40).unwrap().value;
            worst = worst.max((d20 - d40).abs());
        }
    }
    verdict(worst < 1e-12, format!("max |F(m=20) - F(m=40)| {worst:.2e}"))
}

fn monte_carlo() -> Verdict {
    let start = Instant::now();
    let batch = sample_smallest(1, 20, 20_000, 20_240_601).unwrap();
    let ks = ks_against_fredholm(&batch, 40).unwrap();
    let elapsed = start.elapsed();
    verdict(
        ks.pass_at_1pct && elapsed < Duration::from_secs(120),
        format!("KS {:.4e} vs critical {:.4e}, {elapsed:.2?}", ks.statistic, ks.critical),
    )
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, Check); 12] = [
        ("a=0 limit closed form", closed_form_a0),
        ("a=0 finite-n exactness", finite_a0_exact),
        ("n=1 incomplete gamma law", one_by_one_law),
        ("Nystrom vs Gram determinant", nystrom_vs_gram),
        ("corrected expansion rate", conjecture_rate),
        ("optimal scaling rate", optimal_rate),
        ("Mehler-Heine refinement rate", mehler_heine_rate),
        ("kernel expansion rate", kernel_rate),
        ("resolvent identity", resolvent_identity),
        ("rank-one determinant lemma", determinant_lemma),
        ("spectral quadrature convergence", spectral_convergence),
        ("Monte Carlo KS", monte_carlo),
    ];
    // written past the harness capture so the summary always shows
    let mut out = std::io::stdout().lock();
    writeln!(out).unwrap();
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        let tag = if v.pass { "PASS" } else { "FAIL" };
        writeln!(out, "[{tag}] criterion {:>2}: {name}: {}", i + 1, v.detail).unwrap();
        if !v.pass {
            failed.push(i + 1);
        }
    }
    out.flush().unwrap();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
