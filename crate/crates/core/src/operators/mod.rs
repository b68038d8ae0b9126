//! Markov and noise operators built from joint distributions, their
//! structural checks, spectra, and the quantitative operator inequalities.

pub mod invariance;
pub mod noise;
pub mod spectra;
pub mod trace;

pub use invariance::{
    lowdeg_eigen_check, multilinear_gap, simplex_gap, verify_lowdeg_invariance,
    verify_truncation_commutes,
};
pub use noise::{noise_beta_n, noise_multislice, noise_product, sample_slice_noise};
pub use spectra::{
    annihilation_profile, contraction_profile, product_contraction_check, spectral_gap_check,
    ContractionProfile, SpectrumReport,
};
pub use trace::{conditioned_operator, is_reasonable, trace_identity_check, TraceIdentity};

use crate::coupling::pairs::{for_each_pair, PairStatistics};
use crate::coupling::JointDistribution;
use crate::domain::{Domain, Word};
use crate::error::Error;
use crate::Result;
use nalgebra::DMatrix;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

use crate::linalg::LinearMap;

/// The conditional-expectation operator of an arity-2 distribution:
/// `T f(x') = E[f(x) | x']`, mapping functions on the first component's
/// domain to functions on the second component's domain.
pub fn markov_from_joint(
    mu: &JointDistribution,
    source: &Domain,
    target: &Domain,
) -> Result<LinearMap> {
    if mu.arity() != 2 {
        return Err(Error::Precondition("markov operator needs an arity-2 law".into()));
    }
    let al = mu.alphabet().clone();
    let rows = target.size()?;
    let cols = source.size()?;
    let mut mass: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut row_total = vec![0.0f64; rows];

    match mu {
        JointDistribution::StatisticsUniform { counts, .. } => {
            // uniform over pairs with pair statistics given by the counts
            let ma = al.component_sizes()[0];
            let mb = al.component_sizes()[1];
            let mut stats = vec![vec![0usize; mb]; ma];
            for (c, &cnt) in counts.iter().enumerate() {
                let t = al.decode(c as u8);
                stats[t[0] as usize][t[1] as usize] = cnt;
            }
            let stats = PairStatistics(stats);
            let xs = source.words()?;
            let mut pairs: Vec<(Word, Word)> = Vec::new();
            for_each_pair(&stats, &xs, |x, y| pairs.push((x.clone(), y.clone())));
            let w = 1.0 / pairs.len() as f64;
            for (xw, yw) in pairs {
                let x = source.index_of(&xw)?;
                let y = target.index_of(&yw)?;
                *mass.entry((y, x)).or_insert(0.0) += w;
                row_total[y] += w;
            }
        }
        JointDistribution::AtomTable { atoms, .. } => {
            for (word, p) in atoms {
                let x = source.index_of(&al.project(word, 0))?;
                let y = target.index_of(&al.project(word, 1))?;
                let pf = p.to_f64().unwrap_or(0.0);
                *mass.entry((y, x)).or_insert(0.0) += pf;
                row_total[y] += pf;
            }
        }
        JointDistribution::IidTuple { n, table, .. } => {
            // product kernel: tensor power of the single-coordinate law
            let ma = al.component_sizes()[0];
            let mb = al.component_sizes()[1];
            let mut single = vec![vec![0.0f64; ma]; mb];
            let mut col = vec![0.0f64; mb];
            for (c, p) in table.iter().enumerate() {
                let t = al.decode(c as u8);
                let pf = p.to_f64().unwrap_or(0.0);
                single[t[1] as usize][t[0] as usize] += pf;
                col[t[1] as usize] += pf;
            }
            for (b, row) in single.iter_mut().enumerate() {
                if col[b] > 0.0 {
                    for v in row.iter_mut() {
                        *v /= col[b];
                    }
                }
            }
            let mut mat = DMatrix::zeros(rows, cols);
            let ys = target.words()?;
            let xs = source.words()?;
            for (yi, yw) in ys.iter().enumerate() {
                for (xi, xw) in xs.iter().enumerate() {
                    let mut p = 1.0;
                    for i in 0..*n {
                        p *= single[yw.0[i] as usize][xw.0[i] as usize];
                        if p == 0.0 {
                            break;
                        }
                    }
                    mat[(yi, xi)] = p;
                }
            }
            return LinearMap::new(source.clone(), target.clone(), mat);
        }
    }

    let mut mat = DMatrix::zeros(rows, cols);
    for ((y, x), p) in mass {
        if row_total[y] > 0.0 {
            mat[(y, x)] = p / row_total[y];
        }
    }
    LinearMap::new(source.clone(), target.clone(), mat)
}

#[derive(Debug, Clone, Serialize)]
pub struct AdmissibilityReport {
    pub symmetric: bool,
    pub min_positive_atom: f64,
    pub admissible: bool,
}

/// Symmetry plus the atom floor: every symbol tuple either has zero
/// frequency or frequency at least `alpha`.
pub fn admissibility_check(mu: &JointDistribution, alpha: f64) -> AdmissibilityReport {
    let symmetric = mu.is_symmetric();
    let min_positive_atom = mu
        .atom_marginals()
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| p.to_f64().unwrap_or(0.0))
        .fold(f64::INFINITY, f64::min);
    AdmissibilityReport {
        symmetric,
        min_positive_atom,
        admissible: symmetric && min_positive_atom >= alpha - 1e-12,
    }
}

fn uf_find(parent: &mut Vec<usize>, mut v: usize) -> usize {
    while parent[v] != v {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    v
}

/// Symbol-level connectedness surrogate: for every component, the
/// bipartite graph between that component's support symbols and the
/// complementary tuples (edges where the combined atom is positive) must
/// be connected. The word-level graph is exposed separately for tiny `n`.
pub fn connectedness_check(mu: &JointDistribution) -> bool {
    let al = mu.alphabet();
    let r = al.arity();
    let margs = mu.atom_marginals();
    let support: Vec<usize> = (0..al.size()).filter(|&c| !margs[c].is_zero()).collect();
    if support.is_empty() {
        return false;
    }
    for i in 0..r {
        let mut ids: BTreeMap<(u8, Vec<u8>), usize> = BTreeMap::new();
        let mut parent: Vec<usize> = Vec::new();
        for &c in &support {
            let tuple = al.decode(c as u8);
            let own = vec![tuple[i]];
            let rest: Vec<u8> = (0..r).filter(|&j| j != i).map(|j| tuple[j]).collect();
            let a = {
                let next = parent.len();
                *ids.entry((0, own)).or_insert_with(|| {
                    parent.push(next);
                    next
                })
            };
            let b = {
                let next = parent.len();
                *ids.entry((1, rest)).or_insert_with(|| {
                    parent.push(next);
                    next
                })
            };
            let (ra, rb) = (uf_find(&mut parent, a), uf_find(&mut parent, b));
            parent[ra] = rb;
        }
        let mut roots: Vec<usize> = (0..parent.len()).map(|v| uf_find(&mut parent, v)).collect();
        roots.sort_unstable();
        roots.dedup();
        if roots.len() != 1 {
            return false;
        }
    }
    true
}

/// The lazy single-shift walk on a slice, as an explicit pair law: with
/// probability one half the two points agree, otherwise they differ by one
/// cyclic shift in every symbol class. Connected, admissible, and
/// symmetric; its squared operator is the standing example of a
/// degree-contracting kernel at desk scale.
pub fn lazy_shift_walk(
    slice: &crate::domain::MultiSlice,
    beta_n: usize,
) -> Result<JointDistribution> {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    let m = slice.m();
    let al = crate::coupling::TupleAlphabet::new(vec![m, m])?;
    let words = slice.words()?;
    let size = BigInt::from(words.len());
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let mut atoms: BTreeMap<Word, BigRational> = BTreeMap::new();
    let mut add = |x: &Word, y: &Word, p: BigRational| {
        let combined = Word(
            x.0.iter()
                .zip(&y.0)
                .map(|(&a, &b)| al.encode(&[a, b]))
                .collect(),
        );
        atoms
            .entry(combined)
            .and_modify(|q| *q += p.clone())
            .or_insert(p);
    };
    let diag = half.clone() / BigRational::from(size.clone());
    for x in &words {
        add(x, x, diag.clone());
    }
    let mut placements = BigInt::from(1);
    for &kj in slice.counts() {
        placements *= BigInt::from(crate::domain::counting::binomial(kj, beta_n));
    }
    let shift = half / BigRational::from(size * placements);
    for x in &words {
        for y in &words {
            if noise::shift_consistent_words(x, y, m, beta_n) {
                add(x, y, shift.clone());
            }
        }
    }
    JointDistribution::atom_table(al, slice.n(), atoms)
}

/// Word-level connectedness for enumerable supports (intended for
/// `n <= 5`): the graph between component-`i` words and complementary
/// word tuples must be connected for every `i`.
pub fn connectedness_check_words(mu: &JointDistribution) -> Result<bool> {
    if mu.n() > 5 {
        return Err(Error::ScaleLimit { size: mu.n(), cap: 5 });
    }
    let al = mu.alphabet().clone();
    let r = al.arity();
    let support: Vec<Word> = match mu {
        JointDistribution::AtomTable { atoms, .. } => atoms
            .iter()
            .filter(|(_, p)| !p.is_zero())
            .map(|(w, _)| w.clone())
            .collect(),
        JointDistribution::StatisticsUniform { .. } => mu.combined_slice()?.words()?,
        JointDistribution::IidTuple { n, table, .. } => {
            let syms: Vec<u8> = (0..al.size() as u8)
                .filter(|&c| !table[c as usize].is_zero())
                .collect();
            let mut words = vec![Vec::new()];
            for _ in 0..*n {
                let mut next = Vec::new();
                for w in &words {
                    for &s in &syms {
                        let mut ww = w.clone();
                        ww.push(s);
                        next.push(ww);
                    }
                }
                words = next;
            }
            words.into_iter().map(Word).collect()
        }
    };
    for i in 0..r {
        let mut ids: BTreeMap<(u8, Vec<Word>), usize> = BTreeMap::new();
        let mut parent: Vec<usize> = Vec::new();
        for w in &support {
            let own = al.project(w, i);
            let rest: Vec<Word> = (0..r).filter(|&j| j != i).map(|j| al.project(w, j)).collect();
            let a = {
                let next = parent.len();
                *ids.entry((0, vec![own])).or_insert_with(|| {
                    parent.push(next);
                    next
                })
            };
            let b = {
                let next = parent.len();
                *ids.entry((1, rest)).or_insert_with(|| {
                    parent.push(next);
                    next
                })
            };
            let (ra, rb) = (uf_find(&mut parent, a), uf_find(&mut parent, b));
            parent[ra] = rb;
        }
        let mut roots: Vec<usize> = (0..parent.len()).map(|v| uf_find(&mut parent, v)).collect();
        roots.sort_unstable();
        roots.dedup();
        if roots.len() != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupling::TupleAlphabet;
    use crate::domain::MultiSlice;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn pair_alphabet(m: usize) -> TupleAlphabet {
        TupleAlphabet::new(vec![m, m]).unwrap()
    }

    #[test]
    fn diagonal_statistics_give_identity() {
        let al = pair_alphabet(2);
        // counts: (0,0) twice, (1,1) twice -> x' = x always
        let mut counts = vec![0usize; 4];
        counts[al.encode(&[0, 0]) as usize] = 2;
        counts[al.encode(&[1, 1]) as usize] = 2;
        let mu = JointDistribution::statistics_uniform(al, counts).unwrap();
        let d = Domain::slice(MultiSlice::new(vec![2, 2]).unwrap());
        let t = markov_from_joint(&mu, &d, &d).unwrap();
        let dev = (t.matrix() - DMatrix::<f64>::identity(6, 6)).abs().max();
        assert!(dev < 1e-12);
    }

    #[test]
    fn independent_product_gives_rank_one() {
        // independent pair of uniform slice points as an atom table
        let al = pair_alphabet(2);
        let slice = MultiSlice::new(vec![1, 1]).unwrap();
        let words = slice.words().unwrap();
        let mut atoms = std::collections::BTreeMap::new();
        let p = BigRational::new(BigInt::from(1), BigInt::from(4));
        for x in &words {
            for y in &words {
                let combined = Word(
                    x.0.iter()
                        .zip(&y.0)
                        .map(|(&a, &b)| al.encode(&[a, b]))
                        .collect(),
                );
                atoms.insert(combined, p.clone());
            }
        }
        let mu = JointDistribution::atom_table(al, 2, atoms).unwrap();
        let d = Domain::slice(slice);
        let t = markov_from_joint(&mu, &d, &d).unwrap();
        // every row is the uniform average
        for y in 0..2 {
            for x in 0..2 {
                assert!((t.matrix()[(y, x)] - 0.5).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn complement_statistics_match_brute_force() {
        // pair statistics (1,2) and (2,1) twice each on the (2,2) slice:
        // x' is the complement of x, a permutation matrix
        let al = pair_alphabet(2);
        let mut counts = vec![0usize; 4];
        counts[al.encode(&[0, 1]) as usize] = 2;
        counts[al.encode(&[1, 0]) as usize] = 2;
        let mu = JointDistribution::statistics_uniform(al, counts).unwrap();
        let slice = MultiSlice::new(vec![2, 2]).unwrap();
        let d = Domain::slice(slice.clone());
        let t = markov_from_joint(&mu, &d, &d).unwrap();
        for (yi, y) in slice.words().unwrap().iter().enumerate() {
            let comp = Word(y.0.iter().map(|&b| 1 - b).collect());
            let xi = slice.index_of(&comp).unwrap();
            for x in 0..6 {
                let expect = if x == xi { 1.0 } else { 0.0 };
                assert!((t.matrix()[(yi, x)] - expect).abs() < 1e-12);
            }
        }
        assert!(t.stochastic_deviation() < 1e-12);
    }

    #[test]
    fn admissibility_examples() {
        // full uniform product support over [2]x[2]
        let al = pair_alphabet(2);
        let mu = JointDistribution::statistics_uniform(al.clone(), vec![1, 1, 1, 1]).unwrap();
        let rep = admissibility_check(&mu, 0.25);
        assert!(rep.admissible);
        assert!(connectedness_check(&mu));
        assert!(connectedness_check_words(&mu).unwrap());

        // two-block diagonal support is disconnected
        let mut counts = vec![0usize; 4];
        counts[al.encode(&[0, 0]) as usize] = 2;
        counts[al.encode(&[1, 1]) as usize] = 2;
        let mu = JointDistribution::statistics_uniform(al, counts).unwrap();
        assert!(!connectedness_check(&mu));
        assert!(!connectedness_check_words(&mu).unwrap());
    }

    #[test]
    fn unequal_support_is_connected_and_admissible() {
        let al = pair_alphabet(3);
        let mut counts = vec![0usize; 9];
        for a in 0..3u8 {
            for b in 0..3u8 {
                if a != b {
                    counts[al.encode(&[a, b]) as usize] = 1;
                }
            }
        }
        let mu = JointDistribution::statistics_uniform(al, counts).unwrap();
        let rep = admissibility_check(&mu, 1.0 / 6.0);
        assert!(rep.admissible);
        assert!((rep.min_positive_atom - 1.0 / 6.0).abs() < 1e-12);
        assert!(connectedness_check(&mu));
    }
}
