//! Dictatorship tests as data: weighted predicate families with one query
//! distribution per (parameter, predicate) pair, and the even-statistics
//! adjustment that matches them to slices.

use crate::coupling::{JointDistribution, TupleAlphabet};
use crate::error::Error;
use crate::Result;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

/// A predicate over `[m]^r`, stored as a dense truth table.
#[derive(Debug, Clone, Serialize)]
pub struct Predicate {
    pub id: String,
    pub m: usize,
    pub arity: usize,
    table: Vec<bool>,
}

impl Predicate {
    pub fn from_fn(id: &str, m: usize, arity: usize, f: impl Fn(&[u8]) -> bool) -> Predicate {
        let size = m.pow(arity as u32);
        let mut table = Vec::with_capacity(size);
        let mut tuple = vec![0u8; arity];
        for _ in 0..size {
            table.push(f(&tuple));
            let mut i = arity;
            while i > 0 {
                i -= 1;
                if (tuple[i] as usize) + 1 < m {
                    tuple[i] += 1;
                    for t in tuple.iter_mut().skip(i + 1) {
                        *t = 0;
                    }
                    break;
                }
                tuple[i] = 0;
            }
        }
        Predicate {
            id: id.to_string(),
            m,
            arity,
            table,
        }
    }

    pub fn eval(&self, tuple: &[u8]) -> bool {
        let mut idx = 0usize;
        for &s in tuple {
            idx = idx * self.m + s as usize;
        }
        self.table[idx]
    }
}

/// A dictatorship test: a parameter set with weights, predicates with
/// weights, and one query distribution per pair, together with the
/// declared completeness and soundness.
#[derive(Debug, Clone)]
pub struct DictatorshipTest {
    pub m: usize,
    pub arity: usize,
    pub params: Vec<(String, BigRational)>,
    pub predicates: Vec<(Predicate, BigRational)>,
    /// `dist[t][p]` is the atom table over `[m]^r`, indexed by the
    /// combined tuple code.
    pub dist: Vec<Vec<Vec<BigRational>>>,
    pub completeness: f64,
    pub soundness: f64,
}

impl DictatorshipTest {
    pub fn alphabet(&self) -> Result<TupleAlphabet> {
        TupleAlphabet::new(vec![self.m; self.arity])
    }

    /// Minimum positive atom over all query distributions.
    pub fn alpha(&self) -> f64 {
        self.dist
            .iter()
            .flatten()
            .flatten()
            .filter(|p| !p.is_zero())
            .map(|p| p.to_f64().unwrap_or(0.0))
            .fold(f64::INFINITY, f64::min)
    }
}

/// The pairwise-unequal test: two queries must receive different symbols;
/// queries are uniform over unequal pairs. Dictators always pass.
pub fn unequal_test(m: usize) -> DictatorshipTest {
    let pred = Predicate::from_fn("unequal", m, 2, |t| t[0] != t[1]);
    let total = (m * (m - 1)) as i64;
    let mut table = vec![BigRational::zero(); m * m];
    for a in 0..m {
        for b in 0..m {
            if a != b {
                table[a * m + b] = BigRational::new(BigInt::one(), BigInt::from(total));
            }
        }
    }
    DictatorshipTest {
        m,
        arity: 2,
        params: vec![("t0".into(), BigRational::one())],
        predicates: vec![(pred, BigRational::one())],
        dist: vec![vec![table]],
        completeness: 1.0,
        soundness: 0.0,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AdjustReport {
    /// Per (parameter, predicate): total-variation distance moved.
    pub distances: Vec<f64>,
    pub max_distance: f64,
    pub bound: f64,
}

/// Replace every query distribution by the nearest (total variation)
/// distribution whose scaled atom counts `n * D` are all even integers,
/// support only shrinking. Exhaustive over even tables; deterministic
/// tie-break by enumeration order.
pub fn even_statistics_adjust(
    test: &DictatorshipTest,
    n: usize,
) -> Result<(DictatorshipTest, AdjustReport)> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::Precondition("word length must be even".into()));
    }
    let mut adjusted = test.clone();
    let mut distances = Vec::new();
    for (ti, row) in test.dist.iter().enumerate() {
        for (pi, table) in row.iter().enumerate() {
            let support: Vec<usize> = table
                .iter()
                .enumerate()
                .filter(|(_, p)| !p.is_zero())
                .map(|(c, _)| c)
                .collect();
            if support.is_empty() {
                return Err(Error::Precondition("empty query distribution".into()));
            }
            // enumerate compositions of n/2 over the support
            let half = n / 2;
            let mut best: Option<(BigRational, Vec<usize>)> = None;
            let mut counts = vec![0usize; table.len()];
            enumerate_compositions(&support, half, &mut counts, &mut |c| {
                let mut tv = BigRational::zero();
                for (idx, p) in table.iter().enumerate() {
                    let q = BigRational::new(BigInt::from(2 * c[idx]), BigInt::from(n));
                    let d = if &q > p { q - p.clone() } else { p.clone() - q };
                    tv += d;
                }
                let tv = tv / BigRational::from(BigInt::from(2));
                match &best {
                    Some((b, _)) if b <= &tv => {}
                    _ => best = Some((tv, c.to_vec())),
                }
            });
            let (tv, counts) =
                best.ok_or_else(|| Error::InfeasibleStatistics("no even table".into()))?;
            distances.push(tv.to_f64().unwrap_or(1.0));
            let new_table: Vec<BigRational> = counts
                .iter()
                .map(|&c| BigRational::new(BigInt::from(2 * c), BigInt::from(n)))
                .collect();
            adjusted.dist[ti][pi] = new_table;
        }
    }
    let max_distance = distances.iter().copied().fold(0.0, f64::max);
    let bound = (test.m.pow(test.arity as u32)) as f64 / n as f64;
    assert!(
        max_distance <= bound.max(1.0) + 1e-12,
        "adjustment moved too far: {max_distance}"
    );
    Ok((
        adjusted,
        AdjustReport {
            distances,
            max_distance,
            bound,
        },
    ))
}

fn enumerate_compositions(
    support: &[usize],
    total: usize,
    counts: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    fn rec(
        support: &[usize],
        idx: usize,
        left: usize,
        counts: &mut Vec<usize>,
        visit: &mut impl FnMut(&[usize]),
    ) {
        if idx + 1 == support.len() {
            counts[support[idx]] = left;
            visit(counts);
            counts[support[idx]] = 0;
            return;
        }
        for take in 0..=left {
            counts[support[idx]] = take;
            rec(support, idx + 1, left - take, counts, visit);
            counts[support[idx]] = 0;
        }
    }
    rec(support, 0, total, counts, visit);
}

/// The statistics-matched joint law of one query distribution at length
/// `n` (counts must already be even-adjusted so that `n * D` is integral).
pub fn statistics_law(
    test: &DictatorshipTest,
    t: usize,
    p: usize,
    n: usize,
) -> Result<JointDistribution> {
    let al = test.alphabet()?;
    let table = &test.dist[t][p];
    let mut counts = vec![0usize; table.len()];
    for (c, prob) in table.iter().enumerate() {
        let scaled = prob * BigRational::from(BigInt::from(n));
        if !scaled.is_integer() {
            return Err(Error::Precondition(format!(
                "n * D not integral at atom {c}; run the even-statistics adjustment first"
            )));
        }
        counts[c] = scaled.to_integer().to_usize().ok_or_else(|| {
            Error::Precondition("count overflow".into())
        })?;
    }
    JointDistribution::statistics_uniform(al, counts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unequal_predicate_truth_table() {
        let p = Predicate::from_fn("unequal", 3, 2, |t| t[0] != t[1]);
        assert!(!p.eval(&[0, 0]));
        assert!(p.eval(&[0, 2]));
        assert!(p.eval(&[2, 1]));
    }

    #[test]
    fn already_even_tables_are_untouched() {
        let test = unequal_test(3);
        let (adj, rep) = even_statistics_adjust(&test, 12).unwrap();
        assert_eq!(rep.max_distance, 0.0);
        assert_eq!(adj.dist[0][0], test.dist[0][0]);
    }

    #[test]
    fn n_8_rounds_to_even_counts() {
        // atoms 8/6 are infeasible as even integers on full support; the
        // closest even table keeps four atoms at 2 and drops two
        let test = unequal_test(3);
        let (adj, rep) = even_statistics_adjust(&test, 8).unwrap();
        let counts: Vec<usize> = adj.dist[0][0]
            .iter()
            .map(|p| (p * BigRational::from(BigInt::from(8))).to_integer().to_usize().unwrap())
            .collect();
        assert_eq!(counts.iter().sum::<usize>(), 8);
        assert!(counts.iter().all(|&c| c % 2 == 0));
        // support only shrinks
        for (c, p) in test.dist[0][0].iter().enumerate() {
            if p.is_zero() {
                assert_eq!(counts[c], 0);
            }
        }
        assert!((rep.max_distance - 1.0 / 3.0).abs() < 1e-12, "{}", rep.max_distance);
    }

    #[test]
    fn n_4_on_three_symbols_keeps_two_atoms() {
        let test = unequal_test(3);
        let (adj, _) = even_statistics_adjust(&test, 4).unwrap();
        let counts: Vec<usize> = adj.dist[0][0]
            .iter()
            .map(|p| (p * BigRational::from(BigInt::from(4))).to_integer().to_usize().unwrap())
            .collect();
        assert_eq!(counts.iter().sum::<usize>(), 4);
        assert_eq!(counts.iter().filter(|&&c| c == 2).count(), 2);
        // the law exists and has even component counts
        let mu = statistics_law(&adj, 0, 0, 4).unwrap();
        for i in 0..2 {
            let k = mu.component_counts(i).unwrap();
            assert!(k.iter().all(|&ki| ki % 2 == 0));
            assert_eq!(k.iter().sum::<usize>(), 4);
        }
    }

    #[test]
    fn statistics_law_needs_integral_counts() {
        let test = unequal_test(3);
        assert!(statistics_law(&test, 0, 0, 4).is_err());
        assert!(statistics_law(&test, 0, 0, 12).is_ok());
    }
}
