//! The low-degree lifting gap and the eigenvalue bound behind it.

use crate::report::{Check, Csv, SuiteConfig};
use anyhow::Result;
use mslice_core::coupling::Coupling;
use mslice_core::domain::{Domain, MultiSlice};
use mslice_core::func::junta::degree_basis;
use mslice_core::func::RealFunction;
use mslice_core::operators::{lowdeg_eigen_check, verify_lowdeg_invariance};
use mslice_core::rngutil::task_rng;

pub fn run(cfg: &SuiteConfig) -> Result<(Vec<Check>, Vec<Csv>)> {
    let tol = &cfg.tolerances;
    let mut checks = Vec::new();

    let slice = MultiSlice::new(vec![3, 3])?;
    let c = Coupling::statistics(slice.clone())?;
    let table = c.exact_table(tol.coupling_n_cap)?;
    let d = Domain::slice(slice);
    let basis = degree_basis(&d, 2, tol)?;

    // fifty random functions of degree at most two, zero violations
    let mut rng = task_rng(cfg.seed, 50);
    let mut violations = 0usize;
    let mut worst_margin = f64::NEG_INFINITY;
    for _ in 0..50 {
        let f = basis.project_up_to(&RealFunction::random(d.clone(), &mut rng)?, 2)?;
        let rep = verify_lowdeg_invariance(&f, &table, &table, 2)?;
        if !rep.pass {
            violations += 1;
        }
        worst_margin = worst_margin.max(rep.gap - rep.bound);
    }
    checks.push(Check::flag(
        "lifting-gap-50-random",
        "the squared lifting error of degree-two functions stays under eight root d zeta",
        violations == 0,
    ));
    checks.push(Check::bound(
        "lifting-gap-worst-margin",
        "worst gap-to-bound margin over the random family",
        worst_margin,
        0.0,
    ));

    // constants and the degenerate coupling as anchors
    let one = RealFunction::constant(d.clone(), 1.0)?;
    let rep = verify_lowdeg_invariance(&one, &table, &table, 0)?;
    checks.push(Check::close(
        "lifting-gap-constant",
        "constants lift exactly",
        rep.gap,
        0.0,
        1e-12,
    ));
    let ident = Coupling::identity(c.slice.clone())?.exact_table(tol.coupling_n_cap)?;
    let mut rng2 = task_rng(cfg.seed, 51);
    let f = basis.project_up_to(&RealFunction::random(d.clone(), &mut rng2)?, 1)?;
    let rep = verify_lowdeg_invariance(&f, &ident, &ident, 1)?;
    checks.push(Check::close(
        "lifting-gap-degenerate",
        "the x = y coupling lifts without error",
        rep.gap,
        0.0,
        1e-15,
    ));

    // mixed couplings across the same spaces
    let mono = Coupling::boolean_monotone(6)?.exact_table(tol.coupling_n_cap)?;
    let mut rng3 = task_rng(cfg.seed, 52);
    let mut violations = 0usize;
    for _ in 0..20 {
        let f = basis.project_up_to(&RealFunction::random(d.clone(), &mut rng3)?, 1)?;
        if !verify_lowdeg_invariance(&f, &table, &mono, 1)?.pass {
            violations += 1;
        }
        if !verify_lowdeg_invariance(&f, &mono, &table, 1)?.pass {
            violations += 1;
        }
    }
    checks.push(Check::flag(
        "lifting-gap-mixed-couplings",
        "the bound holds when lifting and sampling couplings differ",
        violations == 0,
    ));

    // eigenvalue bound on degree-restricted quadratic forms
    for dd in [1usize, 2] {
        let rep = lowdeg_eigen_check(&table, &table, &basis, dd, tol.eigen_slack)?;
        checks.push(Check::bound(
            &format!("eigen-bound-degree-{dd}"),
            "eigenvalues of the squared lifting defect stay under sixteen d zeta",
            rep.max_eigenvalue,
            rep.bound + tol.eigen_slack,
        ));
    }
    let rep = lowdeg_eigen_check(&table, &mono, &basis, 1, tol.eigen_slack)?;
    checks.push(Check::bound(
        "eigen-bound-mixed",
        "the eigenvalue bound holds for distinct lifting and return couplings",
        rep.max_eigenvalue,
        rep.bound + tol.eigen_slack,
    ));

    Ok((checks, Vec::new()))
}
