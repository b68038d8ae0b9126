//! Monte-Carlo checks of the exponential tail bounds used for sums of
//! indicator variables.

use crate::rngutil::Rng;
use crate::stats::freq_stderr;
use rand::Rng as _;

/// Which tail bound applies to the sampled indicators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailKind {
    /// Independent bits: two-sided bound `2 exp(-2 eps^2 n)`.
    Independent,
    /// Negatively associated bits: one-sided bound `exp(-2 eps^2 n)`.
    NegativelyAssociated,
}

#[derive(Debug, Clone)]
pub struct TailCheck {
    pub empirical: f64,
    pub bound: f64,
    pub slack: f64,
    pub pass: bool,
}

/// Estimate the exceedance frequency of `|S - p n| >= eps n` (or the
/// one-sided version for negatively associated samplers) and compare with
/// the matching exponential bound plus three standard errors.
///
/// `sampler` must return one realization of the sum of `n` indicator
/// variables with common mean `p`.
pub fn tail_bound_check(
    sampler: &mut dyn FnMut(&mut Rng) -> u64,
    n: usize,
    p: f64,
    eps: f64,
    kind: TailKind,
    trials: u64,
    rng: &mut Rng,
) -> TailCheck {
    let mut exceed = 0u64;
    let threshold = eps * n as f64;
    for _ in 0..trials {
        let s = sampler(rng) as f64;
        let dev = s - p * n as f64;
        let hit = match kind {
            TailKind::Independent => dev.abs() >= threshold - 1e-12,
            TailKind::NegativelyAssociated => dev >= threshold - 1e-12,
        };
        if hit {
            exceed += 1;
        }
    }
    let empirical = exceed as f64 / trials as f64;
    let bound = match kind {
        TailKind::Independent => 2.0 * (-2.0 * eps * eps * n as f64).exp(),
        TailKind::NegativelyAssociated => (-2.0 * eps * eps * n as f64).exp(),
    };
    let slack = 3.0 * freq_stderr(empirical, bound, trials);
    TailCheck {
        empirical,
        bound,
        slack,
        pass: empirical <= bound + slack,
    }
}

/// Sum of `n` independent fair bits.
pub fn fair_bits_sampler(n: usize) -> impl FnMut(&mut Rng) -> u64 {
    move |rng| (0..n).filter(|_| rng.gen::<bool>()).count() as u64
}

/// Urn sampler: draw `n/2` of `n` distinguishable balls without
/// replacement, count how many of the first `n/2` were drawn. The draw
/// indicators are negatively associated with common mean 1/2.
pub fn hypergeometric_sampler(n: usize) -> impl FnMut(&mut Rng) -> u64 {
    move |rng| {
        let mut balls: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            balls.swap(i, j);
        }
        balls[..n / 2].iter().filter(|&&b| b < n / 2).count() as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rngutil::seeded;

    #[test]
    fn independent_bits_tail() {
        let n = 100;
        let mut sampler = fair_bits_sampler(n);
        let mut rng = seeded(5);
        let check = tail_bound_check(
            &mut sampler,
            n,
            0.5,
            0.2,
            TailKind::Independent,
            100_000,
            &mut rng,
        );
        assert!(check.pass, "empirical {} bound {}", check.empirical, check.bound);
        // bound here is 2 e^{-8}
        assert!((check.bound - 2.0 * (-8.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn impossible_deviation_never_occurs() {
        let n = 50;
        let mut sampler = fair_bits_sampler(n);
        let mut rng = seeded(6);
        let check = tail_bound_check(
            &mut sampler,
            n,
            0.5,
            1.0,
            TailKind::Independent,
            20_000,
            &mut rng,
        );
        assert_eq!(check.empirical, 0.0);
        assert!(check.pass);
    }

    #[test]
    fn urn_draws_respect_one_sided_tail() {
        let n = 100;
        let mut sampler = hypergeometric_sampler(n);
        let mut rng = seeded(7);
        let check = tail_bound_check(
            &mut sampler,
            n,
            0.5,
            0.2,
            TailKind::NegativelyAssociated,
            100_000,
            &mut rng,
        );
        assert!(check.pass);
        assert!((check.bound - (-8.0f64).exp()).abs() < 1e-12);
    }
}
