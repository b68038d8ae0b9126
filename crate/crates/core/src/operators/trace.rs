//! Conditioned pair operators: the restriction of a slice-pair law to a
//! fixed pair statistics, and the exact rational trace identity that
//! powers the eigenvalue bounds for them.

use crate::coupling::pairs::{for_each_pair, PairStatistics};
use crate::domain::counting::multinomial;
use crate::domain::{Domain, MultiSlice};
use crate::error::Error;
use crate::linalg::LinearMap;
use crate::Result;
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

/// Validate a pair-statistics matrix against a slice: nonnegative entries,
/// row sums and column sums both equal to the slice counts (so the
/// operator is an endomorphism of the slice's function space).
pub fn check_feasible(slice: &MultiSlice, stats: &PairStatistics) -> Result<()> {
    if stats.0.len() != slice.m() || stats.0.iter().any(|r| r.len() != slice.m()) {
        return Err(Error::InfeasibleStatistics("matrix shape".into()));
    }
    if stats.row_sums() != slice.counts() {
        return Err(Error::InfeasibleStatistics(format!(
            "row sums {:?} != counts {:?}",
            stats.row_sums(),
            slice.counts()
        )));
    }
    if stats.col_sums() != slice.counts() {
        return Err(Error::InfeasibleStatistics(format!(
            "column sums {:?} != counts {:?}",
            stats.col_sums(),
            slice.counts()
        )));
    }
    Ok(())
}

/// The Markov operator of the uniform distribution over slice pairs
/// achieving the given statistics: `R f(x) = E[f(y) | x]`.
pub fn conditioned_operator(slice: &MultiSlice, stats: &PairStatistics) -> Result<LinearMap> {
    check_feasible(slice, stats)?;
    let domain = Domain::slice(slice.clone());
    let size = slice.size_usize()?;
    let words = slice.words()?;
    let per_row = stats
        .placements_per_row()
        .to_f64()
        .ok_or(Error::ScaleLimit { size: usize::MAX, cap: usize::MAX })?;
    let p = 1.0 / per_row;
    let mut mat = DMatrix::zeros(size, size);
    for_each_pair(stats, &words, |x, y| {
        let xi = slice.index_of(x).expect("member");
        let yi = slice.index_of(y).expect("member");
        mat[(xi, yi)] += p;
    });
    LinearMap::new(domain.clone(), domain, mat)
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceIdentity {
    /// `Tr(R* R)` computed from the matrix, exact. For symmetric
    /// statistics this equals `Tr(R^2)`.
    pub trace_gram: String,
    /// `Tr(R^2)` computed from the matrix, exact.
    pub trace_square: String,
    /// `multinomial(n; k) / prod_a multinomial(k_a; row_a)`, exact.
    pub closed_form: String,
    pub symmetric_stats: bool,
    pub pass: bool,
}

/// Exact trace identity for the conditioned operator. The adjoint-squared
/// trace `Tr(R* R)` equals the closed form for every feasible statistics;
/// when the statistics matrix is symmetric the operator is self-adjoint
/// and `Tr(R^2)` coincides with it.
pub fn trace_identity_check(slice: &MultiSlice, stats: &PairStatistics) -> Result<TraceIdentity> {
    check_feasible(slice, stats)?;
    let words = slice.words()?;
    let per_row = BigRational::from(BigInt::from(stats.placements_per_row()));
    let p = BigRational::new(BigInt::from(1), BigInt::from(1)) / per_row;

    // sparse kernel in rationals
    let size = words.len();
    let mut kernel: Vec<std::collections::BTreeMap<usize, BigRational>> =
        vec![Default::default(); size];
    for_each_pair(stats, &words, |x, y| {
        let xi = slice.index_of(x).expect("member");
        let yi = slice.index_of(y).expect("member");
        kernel[xi]
            .entry(yi)
            .and_modify(|q| *q += p.clone())
            .or_insert_with(|| p.clone());
    });

    let mut trace_gram = BigRational::zero();
    let mut trace_square = BigRational::zero();
    for (xi, row) in kernel.iter().enumerate() {
        for (yi, v) in row {
            trace_gram += v * v;
            if let Some(back) = kernel[*yi].get(&xi) {
                trace_square += v * back;
            }
        }
    }

    let n = slice.n();
    let mut denom = BigInt::from(1);
    for (a, row) in stats.0.iter().enumerate() {
        let _ = a;
        let k: usize = row.iter().sum();
        denom *= BigInt::from(multinomial(k, row));
    }
    let closed_form = BigRational::new(BigInt::from(multinomial(n, slice.counts())), denom);

    let symmetric_stats = stats.is_symmetric();
    let pass = trace_gram == closed_form && (!symmetric_stats || trace_square == closed_form);
    Ok(TraceIdentity {
        trace_gram: trace_gram.to_string(),
        trace_square: trace_square.to_string(),
        closed_form: closed_form.to_string(),
        symmetric_stats,
        pass,
    })
}

/// Classifier for statistics close to the independent profile:
/// `|r_ab - n nu(a) nu(b)| <= 3 eps n` for all entries.
pub fn is_reasonable(slice: &MultiSlice, stats: &PairStatistics, eps: f64) -> bool {
    let n = slice.n() as f64;
    for (a, row) in stats.0.iter().enumerate() {
        for (b, &r) in row.iter().enumerate() {
            let nu_a = slice.counts()[a] as f64 / n;
            let nu_b = slice.counts()[b] as f64 / n;
            if (r as f64 - n * nu_a * nu_b).abs() > 3.0 * eps * n {
                return false;
            }
        }
    }
    true
}

/// All feasible statistics matrices for a slice (row and column sums both
/// equal to the counts).
pub fn feasible_statistics(slice: &MultiSlice) -> Vec<PairStatistics> {
    let k = slice.counts().to_vec();
    let m = k.len();
    let mut out = Vec::new();
    let mut mat = vec![vec![0usize; m]; m];
    fn rec(
        k: &[usize],
        mat: &mut Vec<Vec<usize>>,
        row: usize,
        col_left: Vec<usize>,
        out: &mut Vec<PairStatistics>,
    ) {
        let m = k.len();
        if row == m {
            if col_left.iter().all(|&c| c == 0) {
                out.push(PairStatistics(mat.clone()));
            }
            return;
        }
        // fill row `row` with entries summing to k[row], bounded by col_left
        fn fill(
            k: &[usize],
            mat: &mut Vec<Vec<usize>>,
            row: usize,
            col: usize,
            left: usize,
            col_left: &mut Vec<usize>,
            out: &mut Vec<PairStatistics>,
        ) {
            let m = k.len();
            if col == m {
                if left == 0 {
                    let cl = col_left.clone();
                    rec(k, mat, row + 1, cl, out);
                }
                return;
            }
            let max_take = left.min(col_left[col]);
            for take in 0..=max_take {
                mat[row][col] = take;
                col_left[col] -= take;
                fill(k, mat, row, col + 1, left - take, col_left, out);
                col_left[col] += take;
                mat[row][col] = 0;
            }
        }
        let mut cl = col_left.clone();
        fill(k, mat, row, 0, k[row], &mut cl, out);
    }
    rec(&k, &mut mat, 0, k.clone(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn diagonal_statistics_are_the_identity() {
        let slice = MultiSlice::new(vec![2, 2]).unwrap();
        let stats = PairStatistics(vec![vec![2, 0], vec![0, 2]]);
        let r = conditioned_operator(&slice, &stats).unwrap();
        let dev = (r.matrix() - DMatrix::<f64>::identity(6, 6)).abs().max();
        assert!(dev < 1e-12);
        let id = trace_identity_check(&slice, &stats).unwrap();
        assert!(id.pass);
        assert_eq!(id.closed_form, "6"); // slice size over 1
        assert_eq!(id.trace_square, "6");
    }

    #[test]
    fn crossing_statistics_on_2_2() {
        let slice = MultiSlice::new(vec![2, 2]).unwrap();
        let stats = PairStatistics(vec![vec![1, 1], vec![1, 1]]);
        let id = trace_identity_check(&slice, &stats).unwrap();
        assert!(id.pass);
        assert_eq!(id.closed_form, "3/2");
        assert_eq!(id.trace_square, "3/2");
    }

    #[test]
    fn statistics_2_1_1_2_on_3_3() {
        let slice = MultiSlice::new(vec![3, 3]).unwrap();
        let stats = PairStatistics(vec![vec![2, 1], vec![1, 2]]);
        let id = trace_identity_check(&slice, &stats).unwrap();
        assert!(id.pass);
        // 20 / (3 * 3)
        assert_eq!(id.closed_form, "20/9");
    }

    #[test]
    fn identity_holds_for_every_feasible_statistics() {
        for counts in [vec![2usize, 2], vec![3, 3], vec![2, 2, 2]] {
            let slice = MultiSlice::new(counts).unwrap();
            let all = feasible_statistics(&slice);
            assert!(!all.is_empty());
            for stats in all {
                let id = trace_identity_check(&slice, &stats).unwrap();
                assert!(
                    id.pass,
                    "failed at {:?} on {:?}: gram {} vs closed {}",
                    stats.0,
                    slice.counts(),
                    id.trace_gram,
                    id.closed_form
                );
            }
        }
    }

    #[test]
    fn infeasible_statistics_rejected() {
        let slice = MultiSlice::new(vec![2, 2]).unwrap();
        let stats = PairStatistics(vec![vec![2, 0], vec![1, 1]]);
        assert!(conditioned_operator(&slice, &stats).is_err());
    }

    #[test]
    fn reasonableness_classifier() {
        let slice = MultiSlice::new(vec![3, 3]).unwrap();
        let balanced = PairStatistics(vec![vec![2, 1], vec![1, 2]]);
        // independent profile: n nu nu = 6/4 = 1.5 per cell
        assert!(is_reasonable(&slice, &balanced, 0.2));
        let skewed = PairStatistics(vec![vec![3, 0], vec![0, 3]]);
        assert!(!is_reasonable(&slice, &skewed, 0.05));
    }

    #[test]
    fn conditioned_operator_trace_matches_rational_route() {
        let slice = MultiSlice::new(vec![3, 3]).unwrap();
        let stats = PairStatistics(vec![vec![2, 1], vec![1, 2]]);
        let r = conditioned_operator(&slice, &stats).unwrap();
        let sq = r.compose(&r).unwrap();
        let tr: f64 = (0..20).map(|i| sq.matrix()[(i, i)]).sum();
        assert!((tr - 20.0 / 9.0).abs() < 1e-9);
        let one = BigRational::one();
        assert!(!one.is_zero());
    }
}
