//! Spectral checks: single-coordinate gaps, noise eigenvalues, exact trace
//! identities, contraction and annihilation profiles, tensor contraction.

use crate::report::{Check, Csv, SuiteConfig};
use anyhow::Result;
use mslice_core::coupling::pairs::PairStatistics;
use mslice_core::coupling::{JointDistribution, TupleAlphabet};
use mslice_core::domain::{Domain, MultiSlice, ProductSpace};
use mslice_core::func::efron_stein::EfronStein;
use mslice_core::func::junta::degree_basis;
use mslice_core::func::RealFunction;
use mslice_core::operators::trace::feasible_statistics;
use mslice_core::operators::{
    annihilation_profile, connectedness_check, contraction_profile, lazy_shift_walk,
    markov_from_joint, noise_multislice, noise_product, product_contraction_check,
    spectral_gap_check, trace_identity_check,
};
use mslice_core::rngutil::task_rng;
use rand::Rng as _;

pub fn run(cfg: &SuiteConfig) -> Result<(Vec<Check>, Vec<Csv>)> {
    let tol = &cfg.tolerances;
    let mut checks = Vec::new();
    let mut csvs = Vec::new();

    // spectral gap for twenty random connected admissible kernels on each
    // of the two- and three-symbol alphabets
    let mut rng = task_rng(cfg.seed, 40);
    let mut worst_excess = f64::NEG_INFINITY;
    for m in [2usize, 3] {
        for _ in 0..20 {
            let mut atoms = vec![vec![0.0f64; m]; m];
            let mut total = 0.0;
            for a in 0..m {
                for b in a..m {
                    let v: f64 = rng.gen_range(0.05..1.0);
                    atoms[a][b] = v;
                    atoms[b][a] = v;
                    total += if a == b { v } else { 2.0 * v };
                }
            }
            for row in atoms.iter_mut() {
                for v in row.iter_mut() {
                    *v /= total;
                }
            }
            let rep = spectral_gap_check(&atoms, tol.eigen_slack)?;
            worst_excess = worst_excess.max(rep.lambda2 - rep.bound);
            if !rep.pass {
                checks.push(Check::flag(
                    "spectral-gap-random-kernels",
                    "second singular value at most one minus half the squared atom floor",
                    false,
                ));
            }
        }
    }
    checks.push(Check::bound(
        "spectral-gap-random-kernels",
        "second singular value at most one minus half the squared atom floor",
        worst_excess,
        tol.eigen_slack,
    ));

    // product noise eigenvalues on the 2^3 and 3^2 products
    let mut worst_noise: f64 = 0.0;
    for (n, m, rho) in [(3usize, 2usize, 0.6f64), (2, 3, 0.35)] {
        let p = ProductSpace::new(n, vec![1.0 / m as f64; m])?;
        let dp = Domain::product(p.clone());
        let t = noise_product(&p, rho)?;
        let mut rng = task_rng(cfg.seed, 41);
        let f = RealFunction::random(dp, &mut rng)?;
        let es = EfronStein::of(&f, tol.degree_cap)?;
        for (mask, comp) in es.components.iter().enumerate() {
            let expect = comp.scale(rho.powi(mask.count_ones() as i32));
            worst_noise = worst_noise.max(t.apply(comp)?.sub(&expect)?.norm2());
        }
    }
    checks.push(Check::bound(
        "noise-eigenvalues-product",
        "product noise scales each subset component by rho to the subset size",
        worst_noise,
        tol.noise_eigen,
    ));

    // exact trace identities over every feasible statistics
    for counts in [vec![2usize, 2], vec![3, 3]] {
        let slice = MultiSlice::new(counts.clone())?;
        let mut all_pass = true;
        let mut tested = 0;
        for stats in feasible_statistics(&slice) {
            let id = trace_identity_check(&slice, &stats)?;
            all_pass &= id.pass;
            tested += 1;
        }
        checks.push(Check::flag(
            &format!("trace-identity-{counts:?}"),
            "conditioned-operator squared trace equals the multinomial closed form exactly",
            all_pass && tested > 0,
        ));
    }

    // identity statistics: trace of the square is the slice size
    let slice = MultiSlice::new(vec![2, 2])?;
    let id = trace_identity_check(&slice, &PairStatistics(vec![vec![2, 0], vec![0, 2]]))?;
    checks.push(Check::flag(
        "trace-identity-diagonal",
        "diagonal statistics give the identity operator with squared trace the slice size",
        id.pass && id.closed_form == "6",
    ));

    // contraction profile of the lazy-walk square on the (3,3) slice
    let slice33 = MultiSlice::new(vec![3, 3])?;
    let mu = lazy_shift_walk(&slice33, 1)?;
    let d33 = Domain::slice(slice33.clone());
    checks.push(Check::flag(
        "lazy-walk-connected-admissible",
        "the lazy shift walk is connected and admissible",
        connectedness_check(&mu)
            && mslice_core::operators::admissibility_check(&mu, 1.0 / 12.0).admissible,
    ));
    let t = markov_from_joint(&mu, &d33, &d33)?;
    let s = t.adjoint()?.compose(&t)?;
    let basis33 = degree_basis(&d33, 3, tol)?;
    let profile = contraction_profile(&s, &basis33, 3)?;
    checks.push(Check::flag(
        "contraction-strictly-decreasing",
        "per-degree singular values of the squared lazy walk decrease strictly",
        profile.strictly_decreasing,
    ));
    checks.push(Check::flag(
        "contraction-decay-rate",
        "a positive decay rate fits the per-degree profile",
        profile.delta_hat > 0.0,
    ));
    csvs.push(Csv {
        name: "contraction-profile".into(),
        header: "degree,sigma".into(),
        rows: profile
            .sigma
            .iter()
            .enumerate()
            .map(|(deg, sig)| format!("{deg},{sig}"))
            .collect(),
    });

    // the fully disagreeing statistics on two symbols is the complement
    // involution: disconnected, flat profile — the structural reason the
    // lazy walk is used above
    let al = TupleAlphabet::new(vec![2, 2])?;
    let mut counts = vec![0usize; 4];
    counts[al.encode(&[0, 1]) as usize] = 3;
    counts[al.encode(&[1, 0]) as usize] = 3;
    let complement = JointDistribution::statistics_uniform(al, counts)?;
    checks.push(Check::flag(
        "complement-law-disconnected",
        "fully disagreeing two-symbol statistics are disconnected",
        !connectedness_check(&complement),
    ));
    let tc = markov_from_joint(&complement, &d33, &d33)?;
    let flat = contraction_profile(&tc, &basis33, 3)?;
    checks.push(Check::flag(
        "complement-profile-flat",
        "the complement involution preserves norms at every degree",
        flat.sigma.iter().all(|s| (s - 1.0).abs() < 1e-9) && !flat.strictly_decreasing,
    ));

    // full spectrum of the squared walk, exported with its degree profile
    let spectrum = mslice_core::operators::spectra::spectrum_report(&s, &basis33)?;
    checks.push(Check::close(
        "trace-matches-eigenvalue-sum",
        "the matrix trace equals the eigenvalue sum for the self-adjoint walk",
        spectrum.trace,
        spectrum.trace_from_eigenvalues,
        1e-8,
    ));
    checks.push(Check::flag(
        "eigenvalues-in-range",
        "eigenvalues of the squared stochastic walk lie between zero and one",
        spectrum
            .eigenvalues
            .iter()
            .all(|&e| (-1e-9..=1.0 + 1e-9).contains(&e)),
    ));
    csvs.push(Csv {
        name: "spectrum-json".into(),
        header: "json".into(),
        rows: vec![serde_json::to_string(&spectrum)?],
    });

    // annihilation profile of the same squared walk
    let ann = annihilation_profile(&s, &basis33, 3)?;
    let decreasing = ann.windows(2).all(|w| w[0] > w[1] + 1e-12);
    checks.push(Check::flag(
        "annihilation-strictly-decreasing",
        "the high-degree operator norm decreases strictly with the cut",
        decreasing,
    ));
    csvs.push(Csv {
        name: "annihilation-profile".into(),
        header: "degree,sigma_above".into(),
        rows: ann
            .iter()
            .enumerate()
            .map(|(deg, sig)| format!("{deg},{sig}"))
            .collect(),
    });

    // slice noise is doubly stochastic and permutation-equivariant
    let noise = noise_multislice(&slice, 1)?;
    checks.push(Check::bound(
        "slice-noise-stochastic",
        "slice noise rows sum to one with nonnegative entries",
        noise.stochastic_deviation(),
        tol.prob_sum,
    ));

    // equivariant operators preserve the pure degree spaces: the image of
    // each pure space carries no mass at other degrees
    let noise33 = noise_multislice(&slice33, 1)?;
    let mut leak: f64 = 0.0;
    for op in [&t, &noise33] {
        for dd in 0..=3usize {
            let p_in = mslice_core::operators::spectra::pure_degree_projector(&basis33, dd)?;
            let image = op.compose(&p_in)?;
            for other in 0..=3usize {
                if other == dd {
                    continue;
                }
                let p_out =
                    mslice_core::operators::spectra::pure_degree_projector(&basis33, other)?;
                leak = leak.max(p_out.compose(&image)?.operator_norm());
            }
        }
    }
    checks.push(Check::bound(
        "degree-preservation",
        "symmetric-law operators map each pure degree space into itself",
        leak,
        tol.orthogonality,
    ));

    // tensor contraction on the unequal three-symbol kernel
    let m = 3;
    let p = 1.0 / (m * (m - 1)) as f64;
    let atoms: Vec<Vec<f64>> = (0..m)
        .map(|a| (0..m).map(|b| if a == b { 0.0 } else { p }).collect())
        .collect();
    let space = Domain::product(ProductSpace::new(3, vec![1.0 / 3.0; 3])?);
    let basis = degree_basis(&space, 3, tol)?;
    let rep = product_contraction_check(&atoms, 3, 1, &basis, tol.eigen_slack)?;
    checks.push(Check::flag(
        "tensor-contraction-unequal",
        "tensor kernel contracts size-one-and-up components to half",
        rep.pass && (rep.sigma - 0.5).abs() < 1e-9,
    ));
    let ind = vec![vec![0.25, 0.25], vec![0.25, 0.25]];
    let space2 = Domain::product(ProductSpace::new(3, vec![0.5, 0.5])?);
    let basis2 = degree_basis(&space2, 3, tol)?;
    let rep2 = product_contraction_check(&ind, 3, 1, &basis2, tol.eigen_slack)?;
    checks.push(Check::bound(
        "tensor-contraction-independent",
        "independent kernels annihilate everything above the constants",
        rep2.sigma,
        tol.eigen_slack,
    ));

    Ok((checks, csvs))
}
