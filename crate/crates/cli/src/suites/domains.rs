//! Combinatorial domain checks: counting, ranking, partitions, entropy
//! facts, tail bounds.

use crate::report::{Check, Csv, SuiteConfig};
use anyhow::Result;
use mslice_core::domain::counting::factorial;
use mslice_core::domain::multislice::{entropy_distance_bound, slices_with_positive_counts};
use mslice_core::domain::partition::partitions_of;
use mslice_core::domain::tail::{
    fair_bits_sampler, hypergeometric_sampler, tail_bound_check, TailKind,
};
use mslice_core::domain::MultiSlice;
use mslice_core::rngutil::task_rng;
use num_bigint::BigUint;

pub fn run(cfg: &SuiteConfig) -> Result<(Vec<Check>, Vec<Csv>)> {
    let mut checks = Vec::new();

    // exact multinomial examples
    for (k, expect) in [
        (vec![2usize, 2], 6u64),
        (vec![3], 1),
        (vec![2, 2, 2], 90),
    ] {
        let s = MultiSlice::new(k.clone())?;
        checks.push(Check::close(
            &format!("slice-size-{k:?}"),
            "multinomial point count of a slice",
            s.size_usize()? as f64,
            expect as f64,
            0.0,
        ));
    }

    // rank/unrank round trips over every slice with n <= 8, m <= 3
    let mut round_trips = 0u64;
    let mut failures = 0u64;
    for n in 1..=8usize {
        for s in slices_with_positive_counts(n, 3) {
            let size = s.size_usize()?;
            for i in 0..size {
                let w = s.word_at(i)?;
                if s.index_of(&w)? != i {
                    failures += 1;
                }
                round_trips += 1;
            }
        }
    }
    checks.push(Check::flag(
        "rank-unrank-round-trip",
        "lexicographic ranking is a bijection on every slice with n <= 8, m <= 3",
        failures == 0 && round_trips > 0,
    ));

    // dominance partial order on partitions of n <= 8 while hook
    // dimensions square-sum to n!
    let mut order_ok = true;
    let mut squares_ok = true;
    for n in 1..=8usize {
        let ps = partitions_of(n);
        let mut sum = BigUint::from(0u32);
        for a in &ps {
            sum += {
                let d = a.hook_dimension();
                &d * &d
            };
            if !a.dominates(a)? {
                order_ok = false;
            }
            for b in &ps {
                if a.dominates(b)? && b.dominates(a)? && a != b {
                    order_ok = false;
                }
                for c in &ps {
                    if a.dominates(b)? && b.dominates(c)? && !a.dominates(c)? {
                        order_ok = false;
                    }
                }
            }
        }
        if sum != factorial(n) {
            squares_ok = false;
        }
    }
    checks.push(Check::flag(
        "dominance-partial-order",
        "dominance is reflexive, antisymmetric and transitive on partitions of n <= 8",
        order_ok,
    ));
    checks.push(Check::flag(
        "hook-dimension-squares",
        "squared hook dimensions sum to n! for n <= 8",
        squares_ok,
    ));

    // entropy-form bound on slice sizes
    for k in [vec![2usize, 2], vec![1, 1], vec![3, 3]] {
        let s = MultiSlice::new(k.clone())?;
        let (exact, bound) = s.entropy_bound_check()?;
        checks.push(Check::bound(
            &format!("entropy-bound-{k:?}"),
            "slice size is at most n^(m^2) 2^(H n)",
            exact.to_string().parse::<f64>().unwrap_or(f64::MAX),
            bound,
        ));
    }

    // entropy continuity
    let (lhs, rhs) = entropy_distance_bound(&[0.5, 0.5], &[0.49, 0.51], 0.01)?;
    checks.push(Check::bound(
        "entropy-continuity",
        "entropy moves by at most 4 m eps log(1/eps) under pointwise eps shifts",
        lhs,
        rhs,
    ));

    // tail bounds, Monte Carlo
    let n = 100;
    let mut rng = task_rng(cfg.seed, 1);
    let mut fair = fair_bits_sampler(n);
    let t = tail_bound_check(&mut fair, n, 0.5, 0.2, TailKind::Independent, 100_000, &mut rng);
    checks.push(Check::bound(
        "tail-independent",
        "independent bits obey the two-sided exponential tail",
        t.empirical,
        t.bound + t.slack,
    ));
    let mut rng = task_rng(cfg.seed, 2);
    let mut urn = hypergeometric_sampler(n);
    let t = tail_bound_check(
        &mut urn,
        n,
        0.5,
        0.2,
        TailKind::NegativelyAssociated,
        100_000,
        &mut rng,
    );
    checks.push(Check::bound(
        "tail-negatively-associated",
        "urn draws obey the one-sided exponential tail",
        t.empirical,
        t.bound + t.slack,
    ));
    let mut rng = task_rng(cfg.seed, 3);
    let mut fair = fair_bits_sampler(50);
    let t = tail_bound_check(&mut fair, 50, 0.5, 1.0, TailKind::Independent, 20_000, &mut rng);
    checks.push(Check::close(
        "tail-impossible-deviation",
        "deviations beyond the word length never occur",
        t.empirical,
        0.0,
        0.0,
    ));

    Ok((checks, Vec::new()))
}
