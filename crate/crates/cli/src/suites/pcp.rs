//! The reduction pipeline end to end: games, even-statistics adjustment,
//! folding, completeness, decoding, and CSP values.

use crate::report::{Check, Csv, SuiteConfig};
use anyhow::Result;
use mslice_core::config::DecodeThresholds;
use mslice_core::pcp::reduce::{completeness_check, dictator_assignment};
use mslice_core::pcp::{
    csp_value_exact, csp_value_greedy, decode, even_statistics_adjust, game_value_exact, reduce,
    unequal_test, ReduceMode, RichGame,
};
use mslice_core::rngutil::task_rng;
use num_rational::BigRational;
use num_traits::One;

pub fn run(cfg: &SuiteConfig) -> Result<(Vec<Check>, Vec<Csv>)> {
    let mut checks = Vec::new();
    let mut csvs = Vec::new();

    // even-statistics adjustment of the pairwise-unequal test
    let base = unequal_test(3);
    let (_, rep12) = even_statistics_adjust(&base, 12)?;
    checks.push(Check::close(
        "even-adjust-n12",
        "at length twelve the unequal test is already even-integral",
        rep12.max_distance,
        0.0,
        0.0,
    ));
    let (test8, rep8) = even_statistics_adjust(&base, 8)?;
    checks.push(Check::bound(
        "even-adjust-n8",
        "the even adjustment moves at most its alphabet-over-length budget",
        rep8.max_distance,
        rep8.bound.max(1.0),
    ));
    let _ = test8;
    let (test4, _) = even_statistics_adjust(&base, 4)?;

    // planted toy pipeline across twenty seeds
    let mut completeness_ok = true;
    let mut decode_ok = true;
    let mut lists_contain_plant = true;
    let thresholds = DecodeThresholds {
        tau: 0.1,
        tau_prime: 0.25,
        tau_double_prime: 0.01,
    };
    for seed_offset in 0..20u64 {
        let mut rng = task_rng(cfg.seed, 100 + seed_offset);
        let game = RichGame::build_toy(4, 4, 6, 4, true, &mut rng)?;
        let inst = reduce(&game, &test4, ReduceMode::Exact { budget: 1_000_000 })?;
        let (a_l, a_r) = game.planted.clone().unwrap();
        let comp = completeness_check(&inst, &a_l, &a_r)?;
        if !comp.is_one {
            completeness_ok = false;
        }
        let (_, assignment) = dictator_assignment(&inst, &a_r);
        let dec = decode(
            &inst,
            &assignment,
            1,
            &thresholds,
            200,
            cfg.tolerances.influence_cap,
            &mut rng,
        )?;
        if dec.best_list_value != 1.0 || dec.decode_failure {
            decode_ok = false;
        }
        for (u, list) in dec.lists_left.iter().enumerate() {
            if !list.is_empty() && !list.contains(&a_l[u]) {
                lists_contain_plant = false;
            }
        }
        for (v, list) in dec.lists_right.iter().enumerate() {
            if !list.contains(&a_r[v]) {
                lists_contain_plant = false;
            }
        }
    }
    checks.push(Check::flag(
        "completeness-20-seeds",
        "planted games reduce to instances of value exactly one under the dictator assignment",
        completeness_ok,
    ));
    checks.push(Check::flag(
        "decode-recovers-plant",
        "decoded lists admit the planted labeling with game value one",
        decode_ok,
    ));
    checks.push(Check::flag(
        "lists-contain-planted-labels",
        "every informative list contains its planted label",
        lists_contain_plant,
    ));

    // every dictator passes the adjusted unequal test: each support tuple
    // of the statistics-matched law disagrees in every coordinate
    let law = mslice_core::pcp::test::statistics_law(&test4, 0, 0, 4)?;
    let al = law.alphabet().clone();
    let support_words = law.combined_slice()?.words()?;
    let mut dictators_pass = true;
    for w in &support_words {
        let x = al.project(w, 0);
        let y = al.project(w, 1);
        for j in 0..4 {
            if x.0[j] == y.0[j] {
                dictators_pass = false;
            }
        }
    }
    checks.push(Check::flag(
        "dictators-pass-exhaustively",
        "all dictators satisfy the unequal predicate on every support tuple",
        dictators_pass && !support_words.is_empty(),
    ));

    // constants fail to decode
    let mut rng = task_rng(cfg.seed, 130);
    let game = RichGame::build_toy(4, 4, 6, 4, true, &mut rng)?;
    let inst = reduce(&game, &test4, ReduceMode::Exact { budget: 1_000_000 })?;
    let constant = vec![0u8; inst.num_vars()];
    let dec = decode(
        &inst,
        &constant,
        1,
        &thresholds,
        50,
        cfg.tolerances.influence_cap,
        &mut rng,
    )?;
    checks.push(Check::flag(
        "constant-assignment-fails",
        "constant assignments produce empty lists and a decode failure",
        dec.decode_failure,
    ));

    // exact CSP value of a planted instance is one
    if inst.num_vars() <= 12 {
        let rep = csp_value_exact(&inst, 100_000_000)?;
        checks.push(Check::flag(
            "csp-value-planted",
            "exhaustive search certifies value one on planted instances",
            rep.value_exact == Some(BigRational::one()),
        ));
        let mut rng2 = task_rng(cfg.seed, 131);
        let greedy = csp_value_greedy(&inst, 3, &mut rng2);
        checks.push(Check::bound(
            "csp-greedy-below-exact",
            "local search never beats the exhaustive maximum",
            greedy.value,
            rep.value + 1e-9,
        ));
    }

    // constraint weights sum to one exactly
    checks.push(Check::flag(
        "constraint-weights-normalized",
        "exact constraint weights sum to one",
        inst.total_weight() == BigRational::one(),
    ));

    // a random unplanted game with imperfect value exists quickly
    let mut found_imperfect = false;
    for k in 0..10u64 {
        let mut rng = task_rng(cfg.seed, 140 + k);
        let g = RichGame::build_toy(4, 4, 3, 4, false, &mut rng)?;
        if game_value_exact(&g, 10_000_000)?.value < 1.0 {
            found_imperfect = true;
            break;
        }
    }
    checks.push(Check::flag(
        "random-game-imperfect",
        "random unplanted games of this size are typically unsatisfiable",
        found_imperfect,
    ));

    // serialized instance shape
    let lines = inst.to_lines();
    let header_ok = lines
        .lines()
        .next()
        .map(|h| h.starts_with("p mslice-csp "))
        .unwrap_or(false);
    checks.push(Check::flag(
        "instance-serialization",
        "the line format carries the header and one line per constraint",
        header_ok && lines.lines().count() == 1 + inst.constraints.len(),
    ));
    csvs.push(Csv {
        name: "instance".into(),
        header: "line".into(),
        rows: lines.lines().map(|s| s.to_string()).collect(),
    });
    csvs.push(Csv {
        name: "instance-provenance-json".into(),
        header: "json".into(),
        rows: vec![inst.provenance_json().to_string()],
    });
    csvs.push(Csv {
        name: "game-json".into(),
        header: "json".into(),
        rows: vec![game.to_json().to_string()],
    });

    Ok((checks, csvs))
}
