//! Acceptance suite: every exit criterion as one test, each printing a
//! pass/fail line. Tolerances and thresholds are pinned here, not
//! configurable.

use mslice_cli::report::SuiteConfig;
use mslice_cli::suites::run_suite;
use mslice_core::config::DecodeThresholds;
use mslice_core::coupling::diagnostics::diagnose;
use mslice_core::coupling::Coupling;
use mslice_core::domain::counting::factorial;
use mslice_core::domain::multislice::slices_with_positive_counts;
use mslice_core::domain::partition::partitions_of;
use mslice_core::domain::{Domain, MultiSlice, Partition, ProductSpace};
use mslice_core::func::efron_stein::EfronStein;
use mslice_core::func::junta::{degree_basis, DegreeDecomposition};
use mslice_core::func::partition_space::pure_partition_basis;
use mslice_core::func::RealFunction;
use mslice_core::influence::{influence_product, influence_product_es, noisy_to_lowdeg_check, total_influence_degree_bound};
use mslice_core::operators::trace::feasible_statistics;
use mslice_core::operators::{
    contraction_profile, lazy_shift_walk, lowdeg_eigen_check, markov_from_joint,
    noise_product, spectral_gap_check, trace_identity_check, verify_lowdeg_invariance,
};
use mslice_core::pcp::reduce::{completeness_check, dictator_assignment};
use mslice_core::pcp::{decode, even_statistics_adjust, reduce, unequal_test, ReduceMode, RichGame};
use mslice_core::rngutil::task_rng;
use mslice_core::Tolerances;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use rand::Rng as _;
use std::time::Instant;

const SEED: u64 = 20260809;

fn verdict(criterion: &str, pass: bool, detail: &str) {
    println!(
        "criterion {criterion}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed: {detail}");
}

#[test]
fn criterion_01_combinatorics() {
    let start = Instant::now();
    let mut round_trips = 0u64;
    for n in 1..=8usize {
        for s in slices_with_positive_counts(n, 3) {
            let size = s.size_usize().unwrap();
            for i in 0..size {
                let w = s.word_at(i).unwrap();
                assert_eq!(s.index_of(&w).unwrap(), i);
                round_trips += 1;
            }
        }
    }
    let mut squares_ok = true;
    for n in 1..=8usize {
        let mut sum = BigUint::from(0u32);
        for lam in partitions_of(n) {
            let d = lam.hook_dimension();
            sum += &d * &d;
        }
        squares_ok &= sum == factorial(n);
    }
    let elapsed = start.elapsed();
    verdict(
        "1 (combinatorics)",
        round_trips > 0 && squares_ok && elapsed.as_secs() < 10,
        &format!(
            "{round_trips} round trips, squared dimensions sum to n! up to 8, {} ms",
            elapsed.as_millis()
        ),
    );
}

#[test]
fn criterion_02_decomposition() {
    let start = Instant::now();
    let tol = Tolerances::default();
    let slice = MultiSlice::new(vec![2, 2]).unwrap();
    let d = Domain::slice(slice.clone());
    let basis = degree_basis(&d, 4, &tol).unwrap();
    let dims: Vec<usize> = (0..=4).map(|i| basis.dim_at(i)).collect();
    // oracle-verified pure degree dimensions (Gram-rank and coset routes
    // agree): see the decisions record for the audit of these values
    let dims_ok = dims == vec![1, 3, 2, 0, 0];

    let b31 = pure_partition_basis(&slice, &Partition::new(vec![3, 1]).unwrap(), &tol).unwrap();
    let b22 = pure_partition_basis(&slice, &Partition::new(vec![2, 2]).unwrap(), &tol).unwrap();
    let split_ok = b31.basis.len() == 3 && b22.basis.len() == 2;

    // cross-projection residuals: junta degree one versus coset (3,1),
    // junta degree two versus coset (2,2)
    let p1 = basis.projector_up_to(1).unwrap();
    let p0 = basis.projector_up_to(0).unwrap();
    let p2 = basis.projector_up_to(2).unwrap();
    let mut residual: f64 = 0.0;
    for v in &b31.basis {
        residual = residual.max(p1.apply(v).unwrap().sub(v).unwrap().norm2());
        residual = residual.max(p0.apply(v).unwrap().norm2());
    }
    for v in &b22.basis {
        residual = residual.max(p2.apply(v).unwrap().sub(v).unwrap().norm2());
        residual = residual.max(p1.apply(v).unwrap().norm2());
    }
    let mut rng = task_rng(SEED, 1);
    for _ in 0..20 {
        let f = RealFunction::random(d.clone(), &mut rng).unwrap();
        let f1 = p1.apply(&f).unwrap().sub(&p0.apply(&f).unwrap()).unwrap();
        let mut proj = RealFunction::constant(d.clone(), 0.0).unwrap();
        for b in &b31.basis {
            proj = proj.add(&b.scale(b.inner(&f1).unwrap())).unwrap();
        }
        residual = residual.max(proj.sub(&f1).unwrap().norm2());
    }

    let mut worst_parseval: f64 = 0.0;
    let mut worst_rec: f64 = 0.0;
    for _ in 0..100 {
        let f = RealFunction::random(d.clone(), &mut rng).unwrap();
        let dec = DegreeDecomposition::of(&f, &basis).unwrap();
        worst_rec = worst_rec.max(dec.reconstruct().sub(&f).unwrap().norm2());
        let total: f64 = dec.weights().iter().sum();
        worst_parseval = worst_parseval.max((total - f.norm2().powi(2)).abs());
    }
    let elapsed = start.elapsed();
    verdict(
        "2 (decomposition)",
        dims_ok
            && split_ok
            && residual <= 1e-9
            && worst_parseval <= 1e-9
            && worst_rec <= 1e-9
            && elapsed.as_secs() < 30,
        &format!(
            "dims {dims:?}, coset split 3+2, residual {residual:.2e}, parseval {worst_parseval:.2e}, {} ms",
            elapsed.as_millis()
        ),
    );
}

#[test]
fn criterion_03_max_degree() {
    let tol = Tolerances::default();
    let mut ok = true;
    let mut slices = 0;
    for n in 1..=6usize {
        for s in slices_with_positive_counts(n, n) {
            let d = Domain::slice(s.clone());
            let size = s.size_usize().unwrap();
            let basis = degree_basis(&d, n, &tol).unwrap();
            let saturating = (0..=n).find(|&d0| basis.dim_up_to(d0) == size).unwrap_or(n);
            let cap = n - s.counts().iter().copied().max().unwrap_or(0);
            ok &= saturating <= cap;
            // nothing appears above the saturation point
            ok &= (saturating..=n).all(|d0| basis.dim_up_to(d0) == size);
            slices += 1;
        }
    }
    verdict(
        "3 (max degree)",
        ok && slices > 0,
        &format!("degree spaces vanish above n minus the largest count on {slices} slices"),
    );
}

#[test]
fn criterion_04_noise_eigenvalues() {
    let mut worst: f64 = 0.0;
    for (n, m, rho) in [(3usize, 2usize, 0.6f64), (2, 3, 0.35)] {
        let p = ProductSpace::new(n, vec![1.0 / m as f64; m]).unwrap();
        let dp = Domain::product(p.clone());
        let t = noise_product(&p, rho).unwrap();
        let mut rng = task_rng(SEED, 4);
        let f = RealFunction::random(dp, &mut rng).unwrap();
        let es = EfronStein::of(&f, 1 << 20).unwrap();
        for (mask, comp) in es.components.iter().enumerate() {
            let expect = comp.scale(rho.powi(mask.count_ones() as i32));
            worst = worst.max(t.apply(comp).unwrap().sub(&expect).unwrap().norm2());
        }
    }
    verdict(
        "4 (noise eigenvalues)",
        worst <= 1e-10,
        &format!("max deviation {worst:.2e} on the 2^3 and 3^2 products"),
    );
}

#[test]
fn criterion_05_trace_identity() {
    let mut ok = true;
    let mut tested = 0;
    for counts in [vec![2usize, 2], vec![3, 3]] {
        let slice = MultiSlice::new(counts).unwrap();
        for stats in feasible_statistics(&slice) {
            let id = trace_identity_check(&slice, &stats).unwrap();
            ok &= id.pass;
            tested += 1;
        }
    }
    verdict(
        "5 (trace identity)",
        ok && tested > 0,
        &format!("exact rational equality on {tested} feasible statistics"),
    );
}

#[test]
fn criterion_06_lowdeg_invariance() {
    let tol = Tolerances::default();
    let slice = MultiSlice::new(vec![3, 3]).unwrap();
    let table = Coupling::statistics(slice.clone())
        .unwrap()
        .exact_table(tol.coupling_n_cap)
        .unwrap();
    let d = Domain::slice(slice);
    let basis = degree_basis(&d, 2, &tol).unwrap();
    let mut rng = task_rng(SEED, 6);
    let mut violations = 0;
    for _ in 0..50 {
        let f = basis
            .project_up_to(&RealFunction::random(d.clone(), &mut rng).unwrap(), 2)
            .unwrap();
        if !verify_lowdeg_invariance(&f, &table, &table, 2).unwrap().pass {
            violations += 1;
        }
    }
    verdict(
        "6 (low-degree invariance)",
        violations == 0,
        "zero violations of the eight-root-d-zeta gap over 50 random degree-two functions",
    );
}

#[test]
fn criterion_07_spectral_gap() {
    let mut rng = task_rng(SEED, 7);
    let mut ok = true;
    let mut worst: f64 = f64::NEG_INFINITY;
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
            let rep = spectral_gap_check(&atoms, 1e-9).unwrap();
            ok &= rep.pass;
            worst = worst.max(rep.lambda2 - rep.bound);
        }
    }
    verdict(
        "7 (spectral gap)",
        ok,
        &format!("40 random connected kernels, worst margin {worst:.2e}"),
    );
}

#[test]
fn criterion_08_contraction_shape() {
    let tol = Tolerances::default();
    // the connected admissible walk whose squared operator decays strictly
    let slice = MultiSlice::new(vec![3, 3]).unwrap();
    let mu = lazy_shift_walk(&slice, 1).unwrap();
    let d = Domain::slice(slice.clone());
    let t = markov_from_joint(&mu, &d, &d).unwrap();
    let s = t.adjoint().unwrap().compose(&t).unwrap();
    let basis = degree_basis(&d, 3, &tol).unwrap();
    let profile = contraction_profile(&s, &basis, 3).unwrap();

    // the eigenvalue bound behind the low-degree gap
    let table = Coupling::statistics(slice)
        .unwrap()
        .exact_table(tol.coupling_n_cap)
        .unwrap();
    let mut eigen_ok = true;
    let mut detail = String::new();
    for dd in [1usize, 2] {
        let rep = lowdeg_eigen_check(&table, &table, &basis, dd, 1e-9).unwrap();
        eigen_ok &= rep.max_eigenvalue <= rep.bound + 1e-9;
        detail.push_str(&format!("d={dd}: {:.3}<={:.3} ", rep.max_eigenvalue, rep.bound));
    }
    verdict(
        "8 (contraction shape)",
        profile.strictly_decreasing && eigen_ok,
        &format!("profile {:?} strictly decreasing; {detail}", profile.sigma),
    );
}

#[test]
fn criterion_09_influence_identities() {
    let tol = Tolerances::default();
    let p = ProductSpace::new(3, vec![0.5, 0.5]).unwrap();
    let dp = Domain::product(p.clone());
    let mut rng = task_rng(SEED, 9);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let f = RealFunction::random(dp.clone(), &mut rng).unwrap();
        let es = EfronStein::of(&f, 1 << 20).unwrap();
        for i in 0..3 {
            worst = worst
                .max((influence_product(&f, i).unwrap() - influence_product_es(&es, i)).abs());
        }
    }

    let slice = MultiSlice::new(vec![2, 2]).unwrap();
    let sd = Domain::slice(slice);
    let basis = degree_basis(&sd, 2, &tol).unwrap();
    let mut degree_violations = 0;
    for _ in 0..100 {
        let f = RealFunction::random(sd.clone(), &mut rng).unwrap();
        if !total_influence_degree_bound(&f, &basis, tol.influence_cap)
            .unwrap()
            .pass
        {
            degree_violations += 1;
        }
    }

    let p4 = ProductSpace::new(4, vec![0.5, 0.5]).unwrap();
    let dp4 = Domain::product(p4.clone());
    let beta = 1.0 / 16.0;
    let kernel = noise_product(&p4, 1.0 - beta).unwrap();
    let mut smoothed_violations = 0;
    for _ in 0..100 {
        let f = RealFunction::random(dp4.clone(), &mut rng).unwrap();
        smoothed_violations += noisy_to_lowdeg_check(&f, &kernel, 1, beta, tol.influence_cap)
            .unwrap()
            .violations;
    }
    verdict(
        "9 (influence identities)",
        worst <= 1e-10 && degree_violations == 0 && smoothed_violations == 0,
        &format!(
            "route agreement {worst:.2e}; degree bound and smoothed-influence bound with zero violations"
        ),
    );
}

#[test]
fn criterion_10_coupling_scaling() {
    let sizes = [16usize, 36, 64, 100];
    let mut zetas = Vec::new();
    for (i, &n) in sizes.iter().enumerate() {
        let c = Coupling::statistics(MultiSlice::new(vec![n / 2, n / 2]).unwrap()).unwrap();
        let mut rng = task_rng(SEED, 10 + i as u64);
        let d = diagnose(&c, 100_000, &[0.1, 0.2, 0.3], &mut rng);
        zetas.push(d.zeta_mean);
    }
    let ratio = zetas[0] / zetas[2];
    verdict(
        "10 (coupling scaling)",
        ratio > 1.4 && ratio < 2.8,
        &format!("zeta(16)/zeta(64) = {ratio:.3}, zetas {zetas:?}"),
    );
}

#[test]
fn criterion_11_pcp_completeness() {
    let (test, _) = even_statistics_adjust(&unequal_test(3), 4).unwrap();
    let thresholds = DecodeThresholds {
        tau: 0.1,
        tau_prime: 0.25,
        tau_double_prime: 0.01,
    };
    let mut ok = true;
    for seed_offset in 0..20u64 {
        let mut rng = task_rng(SEED, 11_000 + seed_offset);
        let game = RichGame::build_toy(4, 4, 6, 4, true, &mut rng).unwrap();
        let inst = reduce(&game, &test, ReduceMode::Exact { budget: 1_000_000 }).unwrap();
        let (a_l, a_r) = game.planted.clone().unwrap();
        let comp = completeness_check(&inst, &a_l, &a_r).unwrap();
        ok &= comp.folding_consistent && comp.value == BigRational::one();
        let (_, assignment) = dictator_assignment(&inst, &a_r);
        let dec = decode(&inst, &assignment, 1, &thresholds, 200, 10_000_000, &mut rng).unwrap();
        ok &= dec.best_list_value == 1.0 && !dec.decode_failure;
        for (v, list) in dec.lists_right.iter().enumerate() {
            ok &= list.contains(&a_r[v]);
        }
        for (u, list) in dec.lists_left.iter().enumerate() {
            if !list.is_empty() {
                ok &= list.contains(&a_l[u]);
            }
        }
    }
    verdict(
        "11 (pcp completeness)",
        ok,
        "20 planted games: instance value exactly one; lists admit the planted labeling with value one",
    );
}

#[test]
fn criterion_12_determinism() {
    let cfg = SuiteConfig {
        seed: SEED,
        ..SuiteConfig::default()
    };
    let mut ok = true;
    let mut detail = String::new();
    for suite in [
        "domains",
        "decompositions",
        "couplings",
        "spectra",
        "lowdeg-invariance",
        "truncation",
        "multilinear",
        "influence",
        "projection-survival",
        "pcp",
    ] {
        let (checks_a, csv_a) = run_suite(suite, &cfg).unwrap();
        let (checks_b, csv_b) = run_suite(suite, &cfg).unwrap();
        let a = serde_json::to_string(&mslice_cli::report::Report::new(suite, cfg.seed, checks_a))
            .unwrap();
        let b = serde_json::to_string(&mslice_cli::report::Report::new(suite, cfg.seed, checks_b))
            .unwrap();
        let csv_same = csv_a.len() == csv_b.len()
            && csv_a
                .iter()
                .zip(&csv_b)
                .all(|(x, y)| x.contents() == y.contents());
        if a != b || !csv_same {
            ok = false;
            detail.push_str(suite);
            detail.push(' ');
        }
    }
    verdict(
        "12 (determinism)",
        ok,
        if detail.is_empty() {
            "reports and curves byte-identical across reruns for every suite"
        } else {
            &detail
        },
    );
}
