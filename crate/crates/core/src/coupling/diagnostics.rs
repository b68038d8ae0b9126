//! Monte-Carlo diagnostics for couplings: per-coordinate disagreement
//! rates, tail exceedance against the exponential bound, and an
//! exchangeability spot check.

use crate::coupling::Coupling;
use crate::rngutil::Rng;
use crate::stats::freq_stderr;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct TailPoint {
    pub eps: f64,
    pub empirical: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CouplingDiagnostics {
    pub alpha_hat: f64,
    pub zeta_hat: Vec<f64>,
    pub zeta_se: Vec<f64>,
    pub zeta_mean: f64,
    pub tail: Vec<TailPoint>,
    /// Disagreement rates agree across coordinates within four standard
    /// errors of the mean.
    pub exchangeable: bool,
    pub trials: u64,
}

/// Sample the coupling and report its empirical parameters. The reported
/// `alpha_hat` is the largest grid value for which the exponential tail
/// bound `alpha^-1 exp(-alpha eps^2 n)` clears every measured point with
/// three standard errors of slack; no claim is made about matching any
/// particular constant.
pub fn diagnose(
    coupling: &Coupling,
    trials: u64,
    eps_grid: &[f64],
    rng: &mut Rng,
) -> CouplingDiagnostics {
    let n = coupling.n();
    let mut disagree = vec![0u64; n];
    let mut total_counts = vec![0u64; n + 1];
    for _ in 0..trials {
        let (x, y) = coupling.sample(rng);
        let mut total = 0usize;
        for i in 0..n {
            if x.0[i] != y.0[i] {
                disagree[i] += 1;
                total += 1;
            }
        }
        total_counts[total] += 1;
    }
    let zeta_hat: Vec<f64> = disagree.iter().map(|&d| d as f64 / trials as f64).collect();
    let zeta_se: Vec<f64> = zeta_hat
        .iter()
        .map(|&z| freq_stderr(z, z, trials))
        .collect();
    let zeta_mean = zeta_hat.iter().sum::<f64>() / n as f64;

    let empirical_at = |eps: f64| -> f64 {
        let threshold = (eps * n as f64).ceil() as usize;
        total_counts[threshold.min(n)..].iter().sum::<u64>() as f64 / trials as f64
    };

    let mut alpha_hat = 0.0;
    for step in 1..=100 {
        let alpha = step as f64 / 100.0;
        let ok = eps_grid.iter().all(|&eps| {
            let emp = empirical_at(eps);
            let bound = (1.0 / alpha) * (-alpha * eps * eps * n as f64).exp();
            emp <= bound + 3.0 * freq_stderr(emp, bound.min(1.0), trials)
        });
        if ok {
            alpha_hat = alpha;
        }
    }
    let tail: Vec<TailPoint> = eps_grid
        .iter()
        .map(|&eps| {
            let a = if alpha_hat > 0.0 { alpha_hat } else { 0.01 };
            TailPoint {
                eps,
                empirical: empirical_at(eps),
                bound: (1.0 / a) * (-a * eps * eps * n as f64).exp(),
            }
        })
        .collect();

    // exchangeability: every coordinate's rate within 4 sigma of the mean
    let exchangeable = zeta_hat.iter().zip(&zeta_se).all(|(&z, &se)| {
        let slack = 4.0 * se.max(freq_stderr(zeta_mean, zeta_mean, trials)) + 1e-12;
        (z - zeta_mean).abs() <= slack
    });

    CouplingDiagnostics {
        alpha_hat,
        zeta_hat,
        zeta_se,
        zeta_mean,
        tail,
        exchangeable,
        trials,
    }
}
