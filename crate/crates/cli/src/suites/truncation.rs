//! Near-commutation of lifting with degree truncation.

use crate::report::{Check, Csv, SuiteConfig};
use anyhow::Result;
use mslice_core::coupling::Coupling;
use mslice_core::domain::{Domain, MultiSlice};
use mslice_core::func::junta::{degree_basis, DegreeDecomposition};
use mslice_core::func::RealFunction;
use mslice_core::operators::invariance::{degree_decrease_mass, verify_truncation_commutes};
use mslice_core::rngutil::task_rng;

pub fn run(cfg: &SuiteConfig) -> Result<(Vec<Check>, Vec<Csv>)> {
    let tol = &cfg.tolerances;
    let mut checks = Vec::new();
    let mut csvs = Vec::new();

    let slice = MultiSlice::new(vec![3, 3])?;
    let c = Coupling::statistics(slice.clone())?;
    let table = c.exact_table(tol.coupling_n_cap)?;
    let sd = Domain::slice(slice);
    let pd = Domain::product(table.product.clone());
    let slice_basis = degree_basis(&sd, 3, tol)?;
    let product_basis = degree_basis(&pd, 6, tol)?;

    // residuals and fitted ratios over a random family
    let mut rng = task_rng(cfg.seed, 60);
    let mut rows = Vec::new();
    let mut max_ratio: f64 = 0.0;
    for idx in 0..10 {
        let f = RealFunction::random(sd.clone(), &mut rng)?;
        for dd in [1usize, 2] {
            let rep = verify_truncation_commutes(&f, &table, dd, &slice_basis, &product_basis)?;
            max_ratio = max_ratio.max(rep.ratio);
            rows.push(format!("{idx},{dd},{},{}", rep.residual, rep.ratio));
        }
    }
    checks.push(Check::flag(
        "truncation-ratio-bounded",
        "the residual over its d-and-zeta scale stays bounded across the family",
        max_ratio.is_finite() && max_ratio < 10.0,
    ));
    csvs.push(Csv {
        name: "truncation-residuals".into(),
        header: "sample,degree,residual,ratio".into(),
        rows,
    });

    // for degree-bounded inputs the residual equals the lifted mass above
    // the cut
    let mut rng2 = task_rng(cfg.seed, 61);
    let f = slice_basis.project_up_to(&RealFunction::random(sd.clone(), &mut rng2)?, 1)?;
    let rep = verify_truncation_commutes(&f, &table, 1, &slice_basis, &product_basis)?;
    let lifted = table.lift()?.apply(&f)?;
    let high = lifted.sub(&product_basis.project_up_to(&lifted, 1)?)?.norm2();
    checks.push(Check::close(
        "truncation-reduces-to-high-mass",
        "for degree-bounded inputs the residual is the lifted high-degree mass",
        rep.residual,
        high,
        1e-9,
    ));

    // lifting never creates lower degrees
    let mut rng3 = task_rng(cfg.seed, 62);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let f = RealFunction::random(sd.clone(), &mut rng3)?;
        let dec = DegreeDecomposition::of(&f, &slice_basis)?;
        for dd in 1..=3usize {
            let pure = dec.component(dd).cloned().unwrap();
            if pure.norm2() < 1e-12 {
                continue;
            }
            worst = worst.max(degree_decrease_mass(&pure, &table, dd, &product_basis)?);
        }
    }
    checks.push(Check::bound(
        "no-degree-decrease",
        "the lift of a pure degree-d function has no mass below degree d",
        worst,
        tol.orthogonality,
    ));

    Ok((checks, csvs))
}
