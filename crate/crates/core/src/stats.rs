//! Small statistical helpers shared by the sampling checks.

use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Pearson chi-square goodness-of-fit against a fixed categorical law.
/// Cells with zero expected probability must carry zero observations;
/// they are excluded from the statistic. Returns `(statistic, p_value)`.
pub fn chi_square_gof(observed: &[u64], expected_probs: &[f64]) -> (f64, f64) {
    assert_eq!(observed.len(), expected_probs.len());
    let total: u64 = observed.iter().sum();
    let t = total as f64;
    let mut stat = 0.0;
    let mut dof = 0usize;
    for (&o, &p) in observed.iter().zip(expected_probs) {
        if p <= 0.0 {
            assert_eq!(o, 0, "observation in a zero-probability cell");
            continue;
        }
        let e = t * p;
        stat += (o as f64 - e) * (o as f64 - e) / e;
        dof += 1;
    }
    if dof <= 1 {
        return (stat, 1.0);
    }
    let chi = ChiSquared::new((dof - 1) as f64).expect("valid dof");
    (stat, 1.0 - chi.cdf(stat))
}

/// Standard error of an empirical frequency `p_hat` over `trials` samples,
/// floored by the reference rate so that zero observations still get slack.
pub fn freq_stderr(p_hat: f64, reference: f64, trials: u64) -> f64 {
    let p = p_hat.max(reference).clamp(1e-12, 1.0);
    (p * (1.0 - p) / trials as f64).sqrt()
}

/// Least-squares slope and intercept of `y` against `x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-15 {
        return (0.0, if n > 0.0 { sy / n } else { 0.0 });
    }
    let slope = (n * sxy - sx * sy) / denom;
    (slope, (sy - slope * sx) / n)
}
