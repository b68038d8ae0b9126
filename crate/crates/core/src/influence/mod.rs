//! Influence functionals on slices and products, their noisy variants,
//! and the transfer inequalities connecting them across couplings.

pub mod projection;

pub use projection::{
    project_function, projected_influence_survival, sample_two_to_one, SurvivalReport, TwoToOneMap,
};

use crate::coupling::JointTable;
use crate::domain::Word;
use crate::error::Error;
use crate::func::efron_stein::{average_onto, EfronStein};
use crate::func::junta::{DegreeDecomposition, SubspaceBasis};
use crate::func::RealFunction;
use crate::linalg::LinearMap;
use crate::rngutil::Rng;
use crate::Result;
use rand::Rng as _;
use serde::Serialize;

/// Influence of a coordinate on a slice function: the mean squared change
/// under a transposition with a uniformly random coordinate (the fixed
/// transposition included).
pub fn influence_slice(f: &RealFunction, i: usize, cap: usize) -> Result<f64> {
    let slice = f.domain().as_slice()?;
    let size = slice.size_usize()?;
    let n = slice.n();
    if size * n > cap {
        return Err(Error::ScaleLimit { size: size * n, cap });
    }
    let words = f.domain().words()?;
    let mut acc = 0.0;
    for (xi, w) in words.iter().enumerate() {
        for j in 0..n {
            if w.0[i] == w.0[j] {
                continue;
            }
            let swapped = w.transposed(i, j);
            let si = slice.index_of(&swapped)?;
            let d = f.values()[si] - f.values()[xi];
            acc += d * d;
        }
    }
    Ok(acc / (size * n) as f64)
}

/// Monte-Carlo influence for slices too large to enumerate.
pub fn influence_slice_sampled(
    f: &impl Fn(&Word) -> f64,
    slice: &crate::domain::MultiSlice,
    i: usize,
    trials: u64,
    rng: &mut Rng,
) -> f64 {
    let n = slice.n();
    let mut acc = 0.0;
    for _ in 0..trials {
        let x = slice.sample_uniform(rng);
        let j = rng.gen_range(0..n);
        let d = f(&x.transposed(i, j)) - f(&x);
        acc += d * d;
    }
    acc / trials as f64
}

pub fn total_influence(f: &RealFunction, cap: usize) -> Result<f64> {
    let n = f.domain().n();
    let mut total = 0.0;
    for i in 0..n {
        total += influence_slice(f, i, cap)?;
    }
    Ok(total)
}

#[derive(Debug, Clone, Serialize)]
pub struct InfluenceReport {
    pub per_coordinate: Vec<f64>,
    pub total: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Total influence against the degree-weighted spectral bound
/// `4 sum_d d ||f^{=d}||^2`.
///
/// The constant comes from the transposition walk: its eigenvalue on a
/// pure space below partition `lambda` is the character ratio `r(lambda)`,
/// and `1 - r(lambda) <= 2 d / (n-1)` for `lambda_1 = n - d`, giving
/// `I[f] = 2(n-1) <f, (I-T) f> <= 4 sum_d d ||f^{=d}||^2`, tight on pure
/// degree-one functions.
pub fn total_influence_degree_bound(
    f: &RealFunction,
    basis: &SubspaceBasis,
    cap: usize,
) -> Result<InfluenceReport> {
    let n = f.domain().n();
    let per_coordinate: Vec<f64> = (0..n)
        .map(|i| influence_slice(f, i, cap))
        .collect::<Result<Vec<_>>>()?;
    let total = per_coordinate.iter().sum();
    let dec = DegreeDecomposition::of(f, basis)?;
    let bound: f64 = dec
        .weights()
        .iter()
        .enumerate()
        .map(|(d, w)| 4.0 * d as f64 * w)
        .sum();
    Ok(InfluenceReport {
        per_coordinate,
        total,
        bound,
        pass: total <= bound + 1e-8,
    })
}

/// Noisy influence: influence of the smoothed function.
pub fn noisy_influence(
    f: &RealFunction,
    i: usize,
    noise: &LinearMap,
    cap: usize,
) -> Result<f64> {
    influence_slice(&noise.apply(f)?, i, cap)
}

/// Total noisy influence with the fitted-constant record: the ratio
/// `I_total / ||f||^2` that a fixed `(m, beta)` family is expected to keep
/// bounded.
pub fn total_noisy_bound(
    f: &RealFunction,
    noise: &LinearMap,
    cap: usize,
) -> Result<(f64, f64)> {
    let smoothed = noise.apply(f)?;
    let total = total_influence(&smoothed, cap)?;
    let norm_sq = f.norm2().powi(2);
    let ratio = if norm_sq > 1e-300 { total / norm_sq } else { 0.0 };
    Ok((total, ratio))
}

/// Product-space influence through the Laplacian route:
/// `||f - E_i f||^2`.
pub fn influence_product(f: &RealFunction, i: usize) -> Result<f64> {
    let n = f.domain().n();
    let mask_all: usize = (1 << n) - 1;
    let avg = average_onto(f, mask_all & !(1 << i))?;
    Ok(f.sub(&avg)?.norm2().powi(2))
}

/// Product-space influence through the decomposition route:
/// the squared mass of components containing `i`.
pub fn influence_product_es(es: &EfronStein, i: usize) -> f64 {
    es.components
        .iter()
        .enumerate()
        .filter(|(mask, _)| mask & (1 << i) != 0)
        .map(|(_, c)| c.norm2().powi(2))
        .sum()
}

/// Degree-restricted influence on a product space: components containing
/// `i` of size at most `d`.
pub fn degree_influence(es: &EfronStein, i: usize, d: usize) -> f64 {
    es.components
        .iter()
        .enumerate()
        .filter(|(mask, _)| mask & (1 << i) != 0 && mask.count_ones() as usize <= d)
        .map(|(_, c)| c.norm2().powi(2))
        .sum()
}

#[derive(Debug, Clone, Serialize)]
pub struct TransferReport {
    pub max_noisy_influence_slice: f64,
    pub max_degree_influence_lifted: f64,
    /// Per-coordinate violations of `I_i[T_C f] <= (2/alpha) I_i[f] +
    /// (2/alpha^2 n) I[T_C f]`.
    pub coordinate_bound_violations: usize,
    pub zeta: f64,
    pub zeta_cap: f64,
}

/// The influence-transfer chain across a coupling: noisy influences of the
/// slice function against degree influences of the lifted function, with
/// the per-coordinate comparison inequality checked along the way.
pub fn coupled_influence_transfer(
    f: &RealFunction,
    table: &JointTable,
    noise: &LinearMap,
    d: usize,
    cap: usize,
) -> Result<TransferReport> {
    let slice = table.slice.clone();
    let n = slice.n();
    let alpha = slice.balance();
    let lift = table.lift()?;
    let lifted = lift.apply(f)?;
    let es = EfronStein::of(&lifted, cap)?;

    let mut max_noisy = 0.0f64;
    for i in 0..n {
        max_noisy = max_noisy.max(noisy_influence(f, i, noise, cap)?);
    }
    let mut max_deg = 0.0f64;
    for i in 0..n {
        max_deg = max_deg.max(degree_influence(&es, i, d));
    }

    // per-coordinate inequality
    let total_lifted: f64 = (0..n).map(|i| influence_product_es(&es, i)).sum();
    let mut violations = 0usize;
    for i in 0..n {
        let lhs = influence_product_es(&es, i);
        let rhs = (2.0 / alpha) * influence_slice(f, i, cap)?
            + (2.0 / (alpha * alpha * n as f64)) * total_lifted;
        if lhs > rhs + 1e-9 {
            violations += 1;
        }
    }

    let zeta = table.zeta_max();
    let ln = (n as f64).ln().max(1.0);
    Ok(TransferReport {
        max_noisy_influence_slice: max_noisy,
        max_degree_influence_lifted: max_deg,
        coordinate_bound_violations: violations,
        zeta,
        zeta_cap: 1.0 / (ln * ln * ln),
    })
}

/// Total lifted influence of a junta-degree component against
/// `(4 d^2 / alpha^2) zeta n + d^2` times its squared norm.
pub fn junta_transfer_bound(
    g: &RealFunction,
    table: &JointTable,
    d: usize,
    cap: usize,
) -> Result<(f64, f64)> {
    let alpha = table.slice.balance();
    let lifted = table.lift()?.apply(g)?;
    let es = EfronStein::of(&lifted, cap)?;
    let n = table.slice.n();
    let total: f64 = (0..n).map(|i| influence_product_es(&es, i)).sum();
    let zeta = table.zeta_max();
    let bound = ((4.0 * (d * d) as f64) / (alpha * alpha) * zeta * n as f64 + (d * d) as f64)
        * g.norm2().powi(2);
    Ok((total, bound))
}

#[derive(Debug, Clone, Serialize)]
pub struct NoisyToLowDeg {
    pub violations: usize,
    pub worst_gap: f64,
}

/// On products: `I_i^{<= d}[f] <= 2 I_i[T f]` for kernels that keep each
/// coordinate with probability at least `1 - beta`, `d beta <= 1/8`.
pub fn noisy_to_lowdeg_check(
    f: &RealFunction,
    kernel: &LinearMap,
    d: usize,
    beta: f64,
    cap: usize,
) -> Result<NoisyToLowDeg> {
    if d as f64 * beta > 0.125 + 1e-12 {
        return Err(Error::Precondition("need d * beta <= 1/8".into()));
    }
    let es = EfronStein::of(f, cap)?;
    let smoothed = kernel.apply(f)?;
    let es_smoothed = EfronStein::of(&smoothed, cap)?;
    let n = f.domain().n();
    let mut violations = 0;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let lhs = degree_influence(&es, i, d);
        let rhs = 2.0 * influence_product_es(&es_smoothed, i);
        if lhs > rhs + 1e-9 {
            violations += 1;
            worst = worst.max(lhs - rhs);
        }
    }
    Ok(NoisyToLowDeg {
        violations,
        worst_gap: worst,
    })
}


#[cfg(test)]
mod sampled_tests {
    use super::*;
    use crate::config::Tolerances;
    use crate::domain::{Domain, MultiSlice};
    use crate::rngutil::seeded;

    #[test]
    fn sampled_influence_matches_exact() {
        let slice = MultiSlice::new(vec![3, 3]).unwrap();
        let d = Domain::slice(slice.clone());
        let f = RealFunction::indicator(d, &[0], &[0]).unwrap();
        let cap = Tolerances::default().influence_cap;
        let exact = influence_slice(&f, 0, cap).unwrap();
        let rule = {
            let slice = slice.clone();
            let values = f.values().to_vec();
            move |w: &Word| values[slice.index_of(w).unwrap()]
        };
        let mut rng = seeded(200);
        let sampled = influence_slice_sampled(&rule, &slice, 0, 200_000, &mut rng);
        assert!((sampled - exact).abs() < 0.01, "{sampled} vs {exact}");
    }
}
