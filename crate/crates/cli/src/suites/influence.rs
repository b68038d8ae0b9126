//! Influence identities, the degree bound, noisy smoothing, and the
//! transfer inequalities across couplings.

use crate::report::{Check, Csv, SuiteConfig};
use anyhow::Result;
use mslice_core::coupling::Coupling;
use mslice_core::domain::{Domain, MultiSlice, ProductSpace};
use mslice_core::func::efron_stein::EfronStein;
use mslice_core::func::junta::degree_basis;
use mslice_core::func::RealFunction;
use mslice_core::influence::{
    coupled_influence_transfer, degree_influence, influence_product, influence_product_es,
    influence_slice, junta_transfer_bound, noisy_influence, noisy_to_lowdeg_check,
    total_influence, total_influence_degree_bound, total_noisy_bound,
};
use mslice_core::operators::{noise_multislice, noise_product};
use mslice_core::rngutil::task_rng;

pub fn run(cfg: &SuiteConfig) -> Result<(Vec<Check>, Vec<Csv>)> {
    let tol = &cfg.tolerances;
    let cap = tol.influence_cap;
    let mut checks = Vec::new();
    let mut csvs = Vec::new();

    // the two product-space influence routes agree on 100 random functions
    let p = ProductSpace::new(3, vec![0.5, 0.5])?;
    let dp = Domain::product(p.clone());
    let mut rng = task_rng(cfg.seed, 80);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let f = RealFunction::random(dp.clone(), &mut rng)?;
        let es = EfronStein::of(&f, tol.degree_cap)?;
        for i in 0..3 {
            worst = worst.max((influence_product(&f, i)? - influence_product_es(&es, i)).abs());
        }
    }
    checks.push(Check::bound(
        "influence-routes-agree",
        "averaging-route and decomposition-route influences coincide on products",
        worst,
        tol.influence_identity,
    ));

    // total influence against four times the degree-weighted spectrum,
    // 100 random functions, zero violations; tight at degree one
    let slice = MultiSlice::new(vec![2, 2])?;
    let sd = Domain::slice(slice.clone());
    let basis = degree_basis(&sd, 2, tol)?;
    let mut rng = task_rng(cfg.seed, 81);
    let mut violations = 0;
    for _ in 0..100 {
        let f = RealFunction::random(sd.clone(), &mut rng)?;
        if !total_influence_degree_bound(&f, &basis, cap)?.pass {
            violations += 1;
        }
    }
    checks.push(Check::flag(
        "total-influence-degree-bound",
        "total influence at most four times the degree-weighted squared norms",
        violations == 0,
    ));
    let raw = RealFunction::indicator(sd.clone(), &[0], &[0])?;
    let f1 = basis
        .project_up_to(&raw, 1)?
        .sub(&basis.project_up_to(&raw, 0)?)?;
    let rep = total_influence_degree_bound(&f1, &basis, cap)?;
    checks.push(Check::close(
        "degree-one-influence-tight",
        "the degree bound is met with equality on pure degree-one functions",
        rep.total,
        4.0 * f1.norm2().powi(2),
        1e-9,
    ));

    // dictator influence by enumeration
    let dict = RealFunction::indicator(sd.clone(), &[0], &[0])?;
    checks.push(Check::close(
        "dictator-influence-by-enumeration",
        "the dictator's own coordinate has influence one half on the (2,2) slice",
        influence_slice(&dict, 0, cap)?,
        0.5,
        1e-12,
    ));

    // smoothing contracts influence coordinatewise and in total
    let slice6 = MultiSlice::new(vec![3, 3])?;
    let sd6 = Domain::slice(slice6.clone());
    let noise = noise_multislice(&slice6, 1)?;
    let f = RealFunction::from_fn(sd6.clone(), |w| if w.0[0] == 0 { 1.0 } else { -1.0 })?;
    let plain = total_influence(&f, cap)?;
    let (noisy, fitted) = total_noisy_bound(&f, &noise, cap)?;
    checks.push(Check::bound(
        "noisy-total-below-plain",
        "smoothing lowers the total influence",
        noisy,
        plain,
    ));
    checks.push(Check::flag(
        "noisy-constant-recorded",
        "the fitted total-noisy-influence constant is finite",
        fitted.is_finite(),
    ));
    let mut coordinatewise = true;
    for i in 0..6 {
        if noisy_influence(&f, i, &noise, cap)? > influence_slice(&f, i, cap)? + 1e-12 {
            coordinatewise = false;
        }
    }
    checks.push(Check::flag(
        "noisy-below-plain-coordinatewise",
        "smoothing lowers every coordinate influence of degree-one functions",
        coordinatewise,
    ));

    // the termwise chain behind the noisy degree bound: smoothing weakly
    // contracts every pure degree component
    let basis_chain = degree_basis(&sd6, 3, tol)?;
    let mut rng_chain = task_rng(cfg.seed, 86);
    let mut chain_ok = true;
    for _ in 0..10 {
        let f = RealFunction::random(sd6.clone(), &mut rng_chain)?;
        let dec = mslice_core::func::junta::DegreeDecomposition::of(&f, &basis_chain)?;
        for comp in &dec.components {
            if noise.apply(comp)?.norm2() > comp.norm2() + 1e-10 {
                chain_ok = false;
            }
        }
    }
    checks.push(Check::flag(
        "smoothing-contracts-each-degree",
        "the noise operator weakly contracts every pure degree component",
        chain_ok,
    ));

    // transfer chain across the segment coupling
    let c = Coupling::statistics(slice6.clone())?;
    let table = c.exact_table(tol.coupling_n_cap)?;
    let mut rng = task_rng(cfg.seed, 82);
    let mut coord_violations = 0;
    for _ in 0..10 {
        let f = RealFunction::random(sd6.clone(), &mut rng)?;
        let rep = coupled_influence_transfer(&f, &table, &noise, 1, cap)?;
        coord_violations += rep.coordinate_bound_violations;
    }
    checks.push(Check::flag(
        "transfer-coordinate-inequality",
        "lifted influences obey the two-over-alpha comparison coordinatewise",
        coord_violations == 0,
    ));
    let basis6 = degree_basis(&sd6, 1, tol)?;
    let raw = RealFunction::indicator(sd6.clone(), &[0], &[0])?;
    let g = basis6
        .project_up_to(&raw, 1)?
        .sub(&basis6.project_up_to(&raw, 0)?)?;
    let (total, bound) = junta_transfer_bound(&g, &table, 1, cap)?;
    checks.push(Check::bound(
        "junta-transfer-bound",
        "lifted total influence of a junta component is within its d-zeta-n envelope",
        total,
        bound + 1e-9,
    ));
    csvs.push(Csv {
        name: "transfer".into(),
        header: "quantity,value".into(),
        rows: vec![format!("junta_total,{total}"), format!("junta_bound,{bound}")],
    });

    // per-coordinate influence curve of a random function, exported both
    // as CSV and as the JSON report shape
    let mut rng_csv = task_rng(cfg.seed, 85);
    let fx = RealFunction::random(sd6.clone(), &mut rng_csv)?;
    let per_report = total_influence_degree_bound(&fx, &degree_basis(&sd6, 3, tol)?, cap)?;
    csvs.push(Csv {
        name: "per-coordinate".into(),
        header: "i,value".into(),
        rows: per_report
            .per_coordinate
            .iter()
            .enumerate()
            .map(|(i, v)| format!("{i},{v}"))
            .collect(),
    });
    csvs.push(Csv {
        name: "influence-report-json".into(),
        header: "json".into(),
        rows: vec![serde_json::to_string(&per_report)?],
    });

    // low-degree influences against the smoothed kernel on products
    let p4 = ProductSpace::new(4, vec![0.5, 0.5])?;
    let dp4 = Domain::product(p4.clone());
    let beta = 1.0 / 16.0;
    let kernel = noise_product(&p4, 1.0 - beta)?;
    let mut rng = task_rng(cfg.seed, 83);
    let mut violations = 0;
    for _ in 0..100 {
        let f = RealFunction::random(dp4.clone(), &mut rng)?;
        violations += noisy_to_lowdeg_check(&f, &kernel, 1, beta, cap)?.violations;
    }
    checks.push(Check::flag(
        "lowdeg-vs-smoothed-influence",
        "degree-restricted influence at most twice the smoothed influence",
        violations == 0,
    ));

    // degree influence caps at the full influence
    let mut rng = task_rng(cfg.seed, 84);
    let f = RealFunction::random(dp.clone(), &mut rng)?;
    let es = EfronStein::of(&f, tol.degree_cap)?;
    let mut full_ok = true;
    for i in 0..3 {
        if (degree_influence(&es, i, 3) - influence_product_es(&es, i)).abs() > 1e-12 {
            full_ok = false;
        }
    }
    checks.push(Check::flag(
        "degree-influence-full-sum",
        "the full-depth degree influence equals the plain influence",
        full_ok,
    ));

    Ok((checks, csvs))
}
