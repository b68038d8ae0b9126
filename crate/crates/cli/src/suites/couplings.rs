//! Coupling constructions: exact tables, marginals, exchangeability,
//! Monte-Carlo diagnostics and the disagreement-rate scaling.

use crate::report::{Check, Csv, SuiteConfig};
use anyhow::Result;
use mslice_core::coupling::diagnostics::diagnose;
use mslice_core::coupling::{Coupling, TupleAlphabet};
use mslice_core::domain::MultiSlice;
use mslice_core::rngutil::task_rng;

pub fn run(cfg: &SuiteConfig) -> Result<(Vec<Check>, Vec<Csv>)> {
    let mut checks = Vec::new();
    let mut csvs = Vec::new();

    // exact marginals of the segment coupling and the rounding coupling
    let stat = Coupling::statistics(MultiSlice::new(vec![2, 2])?)?;
    let table = stat.exact_table(cfg.tolerances.coupling_n_cap)?;
    checks.push(Check::flag(
        "statistics-marginals-exact",
        "segment-coupling marginals are exactly uniform and product",
        table.check_marginals().is_ok(),
    ));
    let mono = Coupling::boolean_monotone(4)?;
    let mono_table = mono.exact_table(cfg.tolerances.coupling_n_cap)?;
    checks.push(Check::flag(
        "monotone-marginals-exact",
        "weight-rounding coupling marginals are exactly uniform and product",
        mono_table.check_marginals().is_ok(),
    ));

    // exchangeability of the exact table under all of S_4
    let mut perm = vec![0usize, 1, 2, 3];
    let mut exchangeable = true;
    loop {
        if !table.invariant_under(&perm) {
            exchangeable = false;
        }
        let n = perm.len();
        let mut i = n - 1;
        while i > 0 && perm[i - 1] >= perm[i] {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        let mut j = n - 1;
        while perm[j] <= perm[i - 1] {
            j -= 1;
        }
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
    checks.push(Check::flag(
        "statistics-exchangeable",
        "the exact joint table is invariant under simultaneous coordinate permutations",
        exchangeable,
    ));

    // joint coupling of a pair law marginalizes to valid component couplings
    let al = TupleAlphabet::new(vec![2, 2])?;
    let combined = MultiSlice::new(vec![1, 2, 2, 1])?;
    let joint = Coupling::statistics(combined)?;
    let jt = joint.exact_table(cfg.tolerances.coupling_n_cap)?;
    let comp = jt.component(&al, 0)?;
    checks.push(Check::flag(
        "joint-component-marginalization",
        "marginalizing a tuple coupling yields an exact component coupling",
        comp.check_marginals().is_ok(),
    ));

    // Monte-Carlo diagnostics against the exact table
    let mut rng = task_rng(cfg.seed, 20);
    let diag = diagnose(&stat, 50_000, &[0.1, 0.2, 0.3], &mut rng);
    checks.push(Check::flag(
        "coordinates-exchangeable-empirically",
        "per-coordinate disagreement rates agree within four standard errors",
        diag.exchangeable,
    ));
    let zeta_exact = table.zeta_per_coordinate();
    let mut zeta_dev: f64 = 0.0;
    for (hat, exact) in diag.zeta_hat.iter().zip(&zeta_exact) {
        zeta_dev = zeta_dev.max((hat - exact).abs());
    }
    checks.push(Check::bound(
        "zeta-monte-carlo-vs-exact",
        "sampled disagreement rates match the exact table",
        zeta_dev,
        0.02,
    ));

    // degenerate coupling: zero disagreement
    let ident = Coupling::identity(MultiSlice::new(vec![3, 3])?)?;
    let mut rng = task_rng(cfg.seed, 21);
    let d0 = diagnose(&ident, 2_000, &[0.1], &mut rng);
    checks.push(Check::close(
        "degenerate-zeta-zero",
        "the x = y coupling never disagrees",
        d0.zeta_mean,
        0.0,
        0.0,
    ));

    // disagreement-rate scaling across n in {16, 36, 64, 100}
    let sizes = [16usize, 36, 64, 100];
    let mut zetas = Vec::new();
    for (i, &n) in sizes.iter().enumerate() {
        let c = Coupling::statistics(MultiSlice::new(vec![n / 2, n / 2])?)?;
        let mut rng = task_rng(cfg.seed, 22 + i as u64);
        let d = diagnose(&c, 100_000, &[0.1, 0.2, 0.3], &mut rng);
        zetas.push(d.zeta_mean);
        if n == 64 {
            checks.push(Check::bound(
                "tail-exceedance-n64",
                "total-disagreement tail at three tenths is rare",
                d.tail[2].empirical,
                1e-3,
            ));
            checks.push(Check::flag(
                "alpha-hat-positive",
                "a positive tail constant fits the measured exceedance",
                d.alpha_hat > 0.0,
            ));
        }
    }
    let ratio = zetas[0] / zetas[2];
    checks.push(Check::flag(
        "zeta-scaling-inverse-sqrt",
        "disagreement rate scales like the inverse square root of the length",
        ratio > 1.4 && ratio < 2.8,
    ));
    csvs.push(Csv {
        name: "zeta-scaling".into(),
        header: "n,zeta_hat".into(),
        rows: sizes
            .iter()
            .zip(&zetas)
            .map(|(n, z)| format!("{n},{z}"))
            .collect(),
    });

    // monotone coupling scaling
    let mut mono_zetas = Vec::new();
    for (i, &n) in [16usize, 64].iter().enumerate() {
        let c = Coupling::boolean_monotone(n)?;
        let mut rng = task_rng(cfg.seed, 30 + i as u64);
        let d = diagnose(&c, 50_000, &[0.2], &mut rng);
        mono_zetas.push(d.zeta_mean);
    }
    let ratio = mono_zetas[0] / mono_zetas[1];
    checks.push(Check::flag(
        "monotone-zeta-shrinks",
        "rounding-coupling disagreement rate shrinks like the inverse square root",
        ratio > 1.4 && ratio < 2.8,
    ));

    // serialized diagnostics for downstream tools
    csvs.push(Csv {
        name: "diagnostics-json".into(),
        header: "json".into(),
        rows: vec![serde_json::to_string(&diag)?],
    });

    Ok((checks, csvs))
}
