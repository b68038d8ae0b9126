//! CSP values: exact maximum by enumeration at toy scale, seeded local
//! search as the fallback lower bound.

use crate::error::Error;
use crate::pcp::reduce::CspInstance;
use crate::rngutil::Rng;
use crate::Result;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::Rng as _;

#[derive(Debug, Clone)]
pub struct ValueReport {
    pub value: f64,
    pub value_exact: Option<BigRational>,
    pub assignment: Vec<u8>,
}

/// Exact maximum over all assignments; errors above the cap.
pub fn csp_value_exact(inst: &CspInstance, cap: u64) -> Result<ValueReport> {
    let vars = inst.num_vars();
    let m = inst.alphabet as u64;
    let mut total: u64 = 1;
    for _ in 0..vars {
        total = total.saturating_mul(m);
        if total > cap {
            return Err(Error::ScaleLimit {
                size: usize::MAX,
                cap: cap as usize,
            });
        }
    }
    let weights: Vec<f64> = inst
        .constraints
        .iter()
        .map(|c| c.weight.to_f64().unwrap_or(0.0))
        .collect();
    let mut assignment = vec![0u8; vars];
    let mut best = f64::NEG_INFINITY;
    let mut best_assignment = assignment.clone();
    loop {
        let mut v = 0.0;
        for (c, w) in inst.constraints.iter().zip(&weights) {
            let tuple: Vec<u8> = c.vars.iter().map(|&i| assignment[i]).collect();
            if inst.predicates[c.predicate].eval(&tuple) {
                v += w;
            }
        }
        if v > best {
            best = v;
            best_assignment = assignment.clone();
        }
        // advance
        let mut pos = vars;
        for i in (0..vars).rev() {
            if (assignment[i] as usize) + 1 < inst.alphabet {
                assignment[i] += 1;
                for a in assignment.iter_mut().skip(i + 1) {
                    *a = 0;
                }
                pos = i;
                break;
            }
        }
        if pos == vars {
            break;
        }
    }
    let exact = inst.value_of(&best_assignment);
    Ok(ValueReport {
        value: best,
        value_exact: Some(exact),
        assignment: best_assignment,
    })
}

/// Seeded coordinate-ascent local search with restarts; a lower bound on
/// the exact value with a reproducible trace.
pub fn csp_value_greedy(inst: &CspInstance, restarts: usize, rng: &mut Rng) -> ValueReport {
    let vars = inst.num_vars();
    let weights: Vec<f64> = inst
        .constraints
        .iter()
        .map(|c| c.weight.to_f64().unwrap_or(0.0))
        .collect();
    let eval = |assignment: &[u8]| -> f64 {
        inst.constraints
            .iter()
            .zip(&weights)
            .filter(|(c, _)| {
                let tuple: Vec<u8> = c.vars.iter().map(|&i| assignment[i]).collect();
                inst.predicates[c.predicate].eval(&tuple)
            })
            .map(|(_, w)| w)
            .sum()
    };
    let mut best = f64::NEG_INFINITY;
    let mut best_assignment = vec![0u8; vars];
    for _ in 0..restarts.max(1) {
        let mut assignment: Vec<u8> =
            (0..vars).map(|_| rng.gen_range(0..inst.alphabet) as u8).collect();
        let mut current = eval(&assignment);
        loop {
            let mut improved = false;
            for i in 0..vars {
                let original = assignment[i];
                let mut local_best = current;
                let mut local_sym = original;
                for s in 0..inst.alphabet as u8 {
                    if s == original {
                        continue;
                    }
                    assignment[i] = s;
                    let v = eval(&assignment);
                    if v > local_best + 1e-15 {
                        local_best = v;
                        local_sym = s;
                    }
                }
                assignment[i] = local_sym;
                if local_best > current + 1e-15 {
                    current = local_best;
                    improved = true;
                }
            }
            if !improved {
                break;
            }
        }
        if current > best {
            best = current;
            best_assignment = assignment;
        }
    }
    ValueReport {
        value: best,
        value_exact: None,
        assignment: best_assignment,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcp::game::RichGame;
    use crate::pcp::reduce::{completeness_check, reduce, ReduceMode};
    use crate::pcp::test::{even_statistics_adjust, unequal_test};
    use crate::rngutil::seeded;
    use num_traits::One;

    fn planted_instance(seed: u64) -> (RichGame, CspInstance) {
        let mut rng = seeded(seed);
        let game = RichGame::build_toy(4, 4, 3, 4, true, &mut rng).unwrap();
        let (test, _) = even_statistics_adjust(&unequal_test(3), 4).unwrap();
        let inst = reduce(&game, &test, ReduceMode::Exact { budget: 100_000 }).unwrap();
        (game, inst)
    }

    #[test]
    fn planted_instance_reaches_value_one() {
        let (game, inst) = planted_instance(60);
        let (a_l, a_r) = game.planted.clone().unwrap();
        let comp = completeness_check(&inst, &a_l, &a_r).unwrap();
        assert!(comp.is_one);
        if inst.num_vars() <= 12 {
            let rep = csp_value_exact(&inst, 100_000_000).unwrap();
            assert_eq!(rep.value_exact.unwrap(), BigRational::one());
        }
    }

    #[test]
    fn greedy_is_dominated_by_exact() {
        let (_, inst) = planted_instance(61);
        if inst.num_vars() > 10 {
            return;
        }
        let exact = csp_value_exact(&inst, 100_000_000).unwrap();
        let mut rng = seeded(62);
        let greedy = csp_value_greedy(&inst, 5, &mut rng);
        assert!(greedy.value <= exact.value + 1e-9);
    }

    #[test]
    fn single_trivial_constraint() {
        let (_, mut inst) = planted_instance(63);
        // keep a single constraint with a predicate accepting everything
        inst.predicates = vec![crate::pcp::test::Predicate::from_fn("always", 3, 2, |_| true)];
        inst.constraints.truncate(1);
        inst.constraints[0].predicate = 0;
        inst.constraints[0].weight = BigRational::one();
        let rep = csp_value_exact(&inst, 100_000_000);
        match rep {
            Ok(r) => assert!((r.value - 1.0).abs() < 1e-12),
            Err(_) => {
                let mut rng = seeded(64);
                let r = csp_value_greedy(&inst, 2, &mut rng);
                assert!((r.value - 1.0).abs() < 1e-12);
            }
        }
    }
}
