//! Two-to-one projections and influence survival under random maps.

use crate::report::{Check, Csv, SuiteConfig};
use anyhow::Result;
use mslice_core::config::DecodeThresholds;
use mslice_core::domain::{Domain, MultiSlice};
use mslice_core::func::RealFunction;
use mslice_core::influence::{
    project_function, projected_influence_survival, sample_two_to_one, TwoToOneMap,
};
use mslice_core::operators::noise_multislice;
use mslice_core::rngutil::task_rng;
use mslice_core::stats::chi_square_gof;
use std::collections::BTreeMap;

pub fn run(cfg: &SuiteConfig) -> Result<(Vec<Check>, Vec<Csv>)> {
    let tol = &cfg.tolerances;
    let cap = tol.influence_cap;
    let mut checks = Vec::new();
    let thresholds = DecodeThresholds::default();
    let _ = thresholds;

    // sampled maps are uniform over pair partitions at four points
    let mut rng = task_rng(cfg.seed, 90);
    let mut counts: BTreeMap<Vec<Vec<usize>>, u64> = BTreeMap::new();
    for _ in 0..30_000 {
        let pi = sample_two_to_one(4, &mut rng);
        let mut parts = vec![vec![], vec![]];
        for i in 0..4 {
            parts[pi.apply(i)].push(i);
        }
        parts.sort();
        *counts.entry(parts).or_insert(0) += 1;
    }
    let observed: Vec<u64> = counts.values().copied().collect();
    let (_, pval) = chi_square_gof(&observed, &[1.0 / 3.0; 3]);
    checks.push(Check::flag(
        "two-to-one-maps-uniform",
        "sampled maps induce the uniform law on pair partitions",
        counts.len() == 3 && pval > 0.001,
    ));

    // projection basics on the (2,2) slice
    let slice = MultiSlice::new(vec![2, 2])?;
    let d = Domain::slice(slice.clone());
    let pi = TwoToOneMap::new(vec![0, 0, 1, 1])?;
    let c = RealFunction::constant(d.clone(), 2.5)?;
    let pc = project_function(&c, &pi)?;
    checks.push(Check::flag(
        "projection-of-constant",
        "projections of constants are constant",
        pc.values().iter().all(|&v| (v - 2.5).abs() < 1e-15),
    ));
    let f = RealFunction::indicator(d.clone(), &[0], &[0])?;
    let pf = project_function(&f, &pi)?;
    let half = Domain::slice(MultiSlice::new(vec![1, 1])?);
    let expect = RealFunction::indicator(half, &[0], &[0])?;
    checks.push(Check::bound(
        "projection-of-dictator",
        "a dictator projects to the dictator of its image coordinate",
        pf.sub(&expect)?.norm2(),
        1e-15,
    ));
    let mut rng2 = task_rng(cfg.seed, 91);
    let g = RealFunction::random(d, &mut rng2)?;
    let pg = project_function(&g, &pi)?;
    let sup = |h: &RealFunction| h.values().iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    checks.push(Check::bound(
        "projection-sup-norm",
        "projection never increases the sup norm",
        sup(&pg),
        sup(&g) + 1e-15,
    ));

    // survival of the noisy dictator on the (6,6) slice
    let slice12 = MultiSlice::new(vec![6, 6])?;
    let d12 = Domain::slice(slice12.clone());
    let half12 = slice12.halved()?;
    let noise_full = noise_multislice(&slice12, 2)?;
    let noise_half = noise_multislice(&half12, 1)?;
    let dict = RealFunction::indicator(d12.clone(), &[0], &[0])?;
    let mut rng3 = task_rng(cfg.seed, 92);
    let rep = projected_influence_survival(
        &dict,
        0,
        &noise_full,
        &noise_half,
        0.01,
        1000,
        cap,
        &mut rng3,
    )?;
    checks.push(Check::flag(
        "dictator-survival",
        "a noisy-influential coordinate survives random projection often enough",
        !rep.skipped && rep.pass && rep.survival_frequency > 0.0,
    ));

    // constants are vacuous
    let cst = RealFunction::constant(d12, 1.0)?;
    let rep = projected_influence_survival(
        &cst,
        0,
        &noise_full,
        &noise_half,
        0.01,
        20,
        cap,
        &mut rng3,
    )?;
    checks.push(Check::flag(
        "constant-survival-vacuous",
        "constants miss the influence precondition and are reported skipped",
        rep.skipped,
    ));

    // half-class shift on a two-symbol slice annihilates dictators: the
    // structural reason the survival example scales up
    let slice8 = MultiSlice::new(vec![4, 4])?;
    let d8 = Domain::slice(slice8.clone());
    let noise8 = noise_multislice(&slice8, 2)?;
    let half8 = slice8.halved()?;
    let noise_half8 = noise_multislice(&half8, 1)?;
    let dict8 = RealFunction::indicator(d8, &[0], &[0])?;
    let rep = projected_influence_survival(
        &dict8,
        0,
        &noise8,
        &noise_half8,
        0.01,
        20,
        cap,
        &mut rng3,
    )?;
    checks.push(Check::flag(
        "half-class-shift-annihilates",
        "shifting half of each two-symbol class smooths dictators to constants",
        rep.skipped && rep.upstream_influence < 1e-12,
    ));

    Ok((checks, Vec::new()))
}
