//! Multilinear and label-assignment gap evaluations.

use crate::report::{Check, Csv, SuiteConfig};
use anyhow::Result;
use mslice_core::coupling::{Coupling, JointDistribution, TupleAlphabet};
use mslice_core::domain::{Domain, ProductSpace};
use mslice_core::func::junta::degree_basis;
use mslice_core::func::RealFunction;
use mslice_core::operators::{multilinear_gap, simplex_gap};
use mslice_core::rngutil::task_rng;

fn lazy_pair_law() -> Result<JointDistribution> {
    // the mostly-disagreeing connected pair law on the (3,3) slice
    let al = TupleAlphabet::new(vec![2, 2])?;
    let mut counts = vec![0usize; 4];
    counts[al.encode(&[0, 0]) as usize] = 1;
    counts[al.encode(&[0, 1]) as usize] = 2;
    counts[al.encode(&[1, 0]) as usize] = 2;
    counts[al.encode(&[1, 1]) as usize] = 1;
    Ok(JointDistribution::statistics_uniform(al, counts)?)
}

pub fn run(cfg: &SuiteConfig) -> Result<(Vec<Check>, Vec<Csv>)> {
    let tol = &cfg.tolerances;
    let mut checks = Vec::new();
    let mut csvs = Vec::new();

    let mu = lazy_pair_law()?;
    let slice = mu.component_slice(0)?;
    let c = Coupling::statistics(slice.clone())?;
    let table = c.exact_table(tol.coupling_n_cap)?;
    let lift = table.lift()?;
    let sd = Domain::slice(slice.clone());
    let pd = Domain::product(ProductSpace::from_counts(slice.counts())?);
    let basis = degree_basis(&sd, 2, tol)?;

    // constants give zero gap
    let one_s = RealFunction::constant(sd.clone(), 1.0)?;
    let one_p = RealFunction::constant(pd.clone(), 1.0)?;
    let rep = multilinear_gap(&mu, &[one_s.clone(), one_s], &[one_p.clone(), one_p], 1 << 20)?;
    checks.push(Check::close(
        "bilinear-gap-constants",
        "both sides equal one on constants",
        rep.gap,
        0.0,
        1e-12,
    ));

    // degree-one pairs: gap recorded against the norm scale
    let mut rng = task_rng(cfg.seed, 70);
    let mut rows = Vec::new();
    let mut scale_ok = true;
    for idx in 0..10 {
        let f = basis.project_up_to(&RealFunction::random(sd.clone(), &mut rng)?, 1)?;
        let g = basis.project_up_to(&RealFunction::random(sd.clone(), &mut rng)?, 1)?;
        let lf = lift.apply(&f)?;
        let lg = lift.apply(&g)?;
        let rep = multilinear_gap(&mu, &[f, g], &[lf, lg], 1 << 20)?;
        rows.push(format!("{idx},{},{},{}", rep.slice_side, rep.product_side, rep.gap));
        if rep.gap > 2.0 * rep.norm_product + 1e-9 {
            scale_ok = false;
        }
    }
    checks.push(Check::flag(
        "bilinear-gap-degree-one-recorded",
        "degree-one bilinear gaps stay within the trivial norm scale",
        scale_ok,
    ));
    csvs.push(Csv {
        name: "bilinear-gaps".into(),
        header: "sample,slice_side,product_side,gap".into(),
        rows,
    });

    // an arity-three law: uniform over even-parity triples, component
    // marginals balanced
    let al3 = TupleAlphabet::new(vec![2, 2, 2])?;
    let mut counts3 = vec![0usize; 8];
    for code in 0..8u8 {
        if code.count_ones() % 2 == 0 {
            counts3[code as usize] = 1;
        }
    }
    let mu3 = JointDistribution::statistics_uniform(al3, counts3)?;
    let s3 = mu3.component_slice(0)?;
    let c3 = Coupling::statistics(s3.clone())?;
    let lift3 = c3.exact_table(tol.coupling_n_cap)?.lift()?;
    let sd3 = Domain::slice(s3.clone());
    let pd3 = Domain::product(ProductSpace::from_counts(s3.counts())?);
    let ones_s = RealFunction::constant(sd3.clone(), 1.0)?;
    let ones_p = RealFunction::constant(pd3.clone(), 1.0)?;
    let rep = multilinear_gap(
        &mu3,
        &[ones_s.clone(), ones_s.clone(), ones_s],
        &[ones_p.clone(), ones_p.clone(), ones_p],
        1 << 20,
    )?;
    checks.push(Check::close(
        "trilinear-gap-constants",
        "the arity-three evaluator agrees on constants",
        rep.gap,
        0.0,
        1e-12,
    ));
    let basis3 = degree_basis(&sd3, 1, tol)?;
    let mut rng3 = task_rng(cfg.seed, 71);
    let f3: Vec<RealFunction> = (0..3)
        .map(|_| {
            basis3.project_up_to(&RealFunction::random(sd3.clone(), &mut rng3).unwrap(), 1)
        })
        .collect::<mslice_core::Result<Vec<_>>>()?;
    let l3: Vec<RealFunction> = f3
        .iter()
        .map(|f| lift3.apply(f))
        .collect::<mslice_core::Result<Vec<_>>>()?;
    let rep = multilinear_gap(&mu3, &f3, &l3, 1 << 20)?;
    checks.push(Check::flag(
        "trilinear-gap-recorded",
        "arity-three degree-one gaps are finite and within the trivial scale",
        rep.gap.is_finite() && rep.gap <= 2.0 * rep.norm_product.max(1.0),
    ));

    // replacing the law by its product version on both sides collapses
    // the two expectations to the same expression
    let tilde = mu.product_version();
    checks.push(Check::flag(
        "product-version-fixed-point",
        "the product analogue is a fixed point, so both sides coincide on it",
        tilde.atom_marginals() == tilde.product_version().atom_marginals(),
    ));

    // simplex form: trivial predicate, constant labels, dictators
    let size = slice.size_usize()?;
    let always = |_: &[u8]| 1.0;
    let labels0 = vec![vec![0u8; size], vec![0u8; size]];
    let rep = simplex_gap(&mu, &labels0, &[lift.clone(), lift.clone()], &always, 1 << 20)?;
    checks.push(Check::close(
        "simplex-gap-trivial-predicate",
        "a constant predicate has zero gap",
        rep.gap,
        0.0,
        1e-9,
    ));

    let pred = |t: &[u8]| if t[0] != t[1] { 1.0 } else { 0.0 };
    let labels_const = vec![vec![1u8; size], vec![0u8; size]];
    let rep = simplex_gap(&mu, &labels_const, &[lift.clone(), lift.clone()], &pred, 1 << 20)?;
    checks.push(Check::close(
        "simplex-gap-constant-labels",
        "constant labels land on simplex vertices with zero gap",
        rep.gap,
        0.0,
        1e-9,
    ));

    let words = slice.words()?;
    let dict: Vec<u8> = words.iter().map(|w| w.0[0]).collect();
    let rep = simplex_gap(
        &mu,
        &[dict.clone(), dict],
        &[lift.clone(), lift],
        &pred,
        1 << 20,
    )?;
    checks.push(Check::bound(
        "simplex-gap-dictators",
        "the dictator gap is within the componentwise multilinear envelope",
        rep.gap,
        rep.bound + 1e-9,
    ));

    Ok((checks, csvs))
}

