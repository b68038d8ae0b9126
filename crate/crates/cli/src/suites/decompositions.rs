//! Degree, partition and Efron-Stein decompositions.

use crate::report::{Check, Csv, SuiteConfig};
use anyhow::Result;
use mslice_core::domain::multislice::slices_with_positive_counts;
use mslice_core::domain::partition::partitions_of;
use mslice_core::domain::{Domain, MultiSlice, Partition, ProductSpace};
use mslice_core::func::efron_stein::EfronStein;
use mslice_core::func::hyper::hypercontractivity_probe;
use mslice_core::func::junta::{degree_basis, DegreeDecomposition};
use mslice_core::func::partition_space::pure_partition_basis;
use mslice_core::func::RealFunction;
use mslice_core::linalg::projector_deviation;
use mslice_core::rngutil::task_rng;

pub fn run(cfg: &SuiteConfig) -> Result<(Vec<Check>, Vec<Csv>)> {
    let tol = &cfg.tolerances;
    let mut checks = Vec::new();
    let mut csvs = Vec::new();

    // the workhorse slice
    let slice = MultiSlice::new(vec![2, 2])?;
    let d = Domain::slice(slice.clone());
    let basis = degree_basis(&d, 4, tol)?;
    let dims: Vec<usize> = (0..=4).map(|i| basis.dim_at(i)).collect();
    checks.push(Check::flag(
        "pure-degree-dims-2-2",
        "pure degree dimensions on the (2,2) slice are (1,3,2,0,0)",
        dims == vec![1, 3, 2, 0, 0],
    ));

    // projector contracts
    let mut proj_dev: f64 = 0.0;
    for dd in 0..=2 {
        proj_dev = proj_dev.max(projector_deviation(&basis.projector_up_to(dd)?)?);
    }
    checks.push(Check::bound(
        "projectors-orthogonal",
        "degree projectors are idempotent and self-adjoint",
        proj_dev,
        tol.orthogonality,
    ));

    // partition refinement: junta degree one equals the (3,1) coset space,
    // degree two equals the (2,2) coset space
    let b31 = pure_partition_basis(&slice, &Partition::new(vec![3, 1])?, tol)?;
    let b22 = pure_partition_basis(&slice, &Partition::new(vec![2, 2])?, tol)?;
    checks.push(Check::flag(
        "partition-dims-2-2",
        "pure coset dimensions on the (2,2) slice: 3 below (3,1) and 2 below (2,2)",
        b31.basis.len() == 3 && b22.basis.len() == 2,
    ));
    let mut cross: f64 = 0.0;
    for u in &b31.basis {
        for v in &b22.basis {
            cross = cross.max(u.inner(v)?.abs());
        }
    }
    checks.push(Check::bound(
        "partition-spaces-orthogonal",
        "distinct pure coset spaces are orthogonal",
        cross,
        tol.orthogonality,
    ));
    // mutual projection residuals between the junta route and coset route
    let p1 = basis.projector_up_to(1)?;
    let p0 = basis.projector_up_to(0)?;
    let mut residual: f64 = 0.0;
    for v in &b31.basis {
        let inside = p1.apply(v)?.sub(v)?.norm2();
        let low = p0.apply(v)?.norm2();
        residual = residual.max(inside).max(low);
    }
    let mut rng = task_rng(cfg.seed, 10);
    for _ in 0..20 {
        let f = RealFunction::random(d.clone(), &mut rng)?;
        let f1 = p1.apply(&f)?.sub(&p0.apply(&f)?)?;
        let mut proj = RealFunction::constant(d.clone(), 0.0)?;
        for b in &b31.basis {
            proj = proj.add(&b.scale(b.inner(&f1)?))?;
        }
        residual = residual.max(proj.sub(&f1)?.norm2());
    }
    checks.push(Check::bound(
        "degree-equals-partition-sum",
        "junta degree spaces equal the matching coset spaces",
        residual,
        tol.orthogonality,
    ));
    // counting the refinement on the (2,2) slice
    let mut refine_ok = true;
    for dd in 0..=2usize {
        let total: usize = partitions_of(4)
            .into_iter()
            .filter(|lam| lam.parts()[0] == 4 - dd)
            .map(|lam| pure_partition_basis(&slice, &lam, tol).map(|b| b.basis.len()))
            .collect::<mslice_core::Result<Vec<_>>>()?
            .into_iter()
            .sum();
        if total != basis.dim_at(dd) {
            refine_ok = false;
        }
    }
    checks.push(Check::flag(
        "partition-refines-degree",
        "coset dimensions at each top row sum to the pure degree dimension",
        refine_ok,
    ));

    // the same refinement on the twenty-point slice
    let slice6 = MultiSlice::new(vec![3, 3])?;
    let d6 = Domain::slice(slice6.clone());
    let basis6 = degree_basis(&d6, 3, tol)?;
    let mut refine6_ok = true;
    for dd in 0..=3usize {
        let total: usize = partitions_of(6)
            .into_iter()
            .filter(|lam| lam.parts()[0] == 6 - dd)
            .map(|lam| pure_partition_basis(&slice6, &lam, tol).map(|b| b.basis.len()))
            .collect::<mslice_core::Result<Vec<_>>>()?
            .into_iter()
            .sum();
        if total != basis6.dim_at(dd) {
            refine6_ok = false;
        }
    }
    checks.push(Check::flag(
        "partition-refines-degree-3-3",
        "the coset refinement also matches on the (3,3) slice",
        refine6_ok,
    ));

    // Parseval and reconstruction on 100 random functions
    let mut rng = task_rng(cfg.seed, 11);
    let mut worst_rec: f64 = 0.0;
    let mut worst_parseval: f64 = 0.0;
    for _ in 0..100 {
        let f = RealFunction::random(d.clone(), &mut rng)?;
        let dec = DegreeDecomposition::of(&f, &basis)?;
        worst_rec = worst_rec.max(dec.reconstruct().sub(&f)?.norm2());
        let total: f64 = dec.weights().iter().sum();
        worst_parseval = worst_parseval.max((total - f.norm2().powi(2)).abs());
    }
    checks.push(Check::bound(
        "reconstruction",
        "pure components sum back to the function",
        worst_rec,
        tol.orthogonality,
    ));
    checks.push(Check::bound(
        "parseval",
        "squared norms add across pure components",
        worst_parseval,
        tol.orthogonality,
    ));

    // per-degree norms of a sample function, exported
    let f = RealFunction::indicator(d.clone(), &[0], &[0])?;
    let dec = DegreeDecomposition::of(&f, &basis)?;
    csvs.push(Csv {
        name: "degree-norms".into(),
        header: "degree,norm_sq".into(),
        rows: dec
            .weights()
            .iter()
            .enumerate()
            .map(|(deg, w)| format!("{deg},{w}"))
            .collect(),
    });

    // maximal degree on every slice with n <= 6
    let mut max_deg_ok = true;
    for n in 1..=6usize {
        for s in slices_with_positive_counts(n, n) {
            let dd = Domain::slice(s.clone());
            let size = s.size_usize()?;
            // smallest degree where the filtration saturates the space
            let b = degree_basis(&dd, n, tol)?;
            let saturating = (0..=n)
                .find(|&d0| b.dim_up_to(d0) == size)
                .unwrap_or(n);
            let cap = n - s.counts().iter().copied().max().unwrap_or(0);
            if saturating > cap {
                max_deg_ok = false;
            }
        }
    }
    checks.push(Check::flag(
        "max-degree-cap",
        "degree spaces saturate by n minus the largest symbol count on every slice with n <= 6",
        max_deg_ok,
    ));

    // Efron-Stein on the 2^3 and 3^2 products
    for (n, m) in [(3usize, 2usize), (2, 3)] {
        let p = ProductSpace::new(n, vec![1.0 / m as f64; m])?;
        let dp = Domain::product(p);
        let mut rng = task_rng(cfg.seed, 12);
        let f = RealFunction::random(dp.clone(), &mut rng)?;
        let es = EfronStein::of(&f, tol.degree_cap)?;
        let rec = es.reconstruct().sub(&f)?.norm2();
        let mut ortho: f64 = 0.0;
        for s in 0..es.components.len() {
            for t in 0..s {
                ortho = ortho.max(es.components[s].inner(&es.components[t])?.abs());
            }
        }
        checks.push(Check::bound(
            &format!("efron-stein-{m}^{n}"),
            "subset components reconstruct the function and are orthogonal",
            rec.max(ortho),
            tol.influence_identity,
        ));
    }

    // hypercontractivity probes
    let p = ProductSpace::new(4, vec![0.5, 0.5])?;
    let dp = Domain::product(p);
    let fp = RealFunction::indicator(dp.clone(), &[0], &[0])?
        .sub(&RealFunction::constant(dp, 0.5)?)?;
    let probe = hypercontractivity_probe(&fp, 4, 1)?;
    checks.push(Check::bound(
        "hypercontractivity-product",
        "low-degree product functions obey the explicit norm-ratio bound",
        probe.ratio,
        probe.bound.unwrap_or(f64::MAX),
    ));
    let s8 = Domain::slice(MultiSlice::new(vec![4, 4])?);
    let b8 = degree_basis(&s8, 1, tol)?;
    let mut rng = task_rng(cfg.seed, 13);
    let f8 = RealFunction::random(s8, &mut rng)?;
    let d1 = DegreeDecomposition::of(&f8, &b8)?;
    let comp = d1.component(1).cloned().unwrap();
    let probe = hypercontractivity_probe(&comp, 4, 1)?;
    checks.push(Check::flag(
        "hypercontractivity-slice-recorded",
        "slice norm ratios are recorded (finite) without a pinned constant",
        probe.ratio.is_finite(),
    ));

    Ok((checks, csvs))
}
