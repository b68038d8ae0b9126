//! Joint distributions over tuples of words, and couplings between a
//! multi-slice side and a product side.
//!
//! An r-ary distribution over `([m_1] x ... x [m_r])^n` is handled as a
//! distribution over words on the combined "tuple alphabet" of size
//! `m_1 ... m_r`; component words are recovered by projecting symbols.
//! The statistics-uniform form (uniform over tuples with a fixed count of
//! every symbol tuple) is then literally the uniform measure on a
//! multi-slice over the combined alphabet, which lets one implementation
//! of the coupling construction serve both the single-slice case and the
//! joint case.

pub mod couple;
pub mod diagnostics;
pub mod pairs;

pub use couple::{Coupling, CouplingKind, JointTable};
pub use diagnostics::CouplingDiagnostics;

use crate::domain::{MultiSlice, ProductSpace, Word};
use crate::error::Error;
use crate::rngutil::Rng;
use crate::Result;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng as _;
use std::collections::BTreeMap;

/// The combined alphabet of symbol tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleAlphabet {
    ms: Vec<usize>,
}

impl TupleAlphabet {
    pub fn new(ms: Vec<usize>) -> Result<Self> {
        if ms.is_empty() || ms.contains(&0) {
            return Err(Error::InvalidDomain("component alphabets must be nonempty".into()));
        }
        let size: usize = ms.iter().product();
        if size > 250 {
            return Err(Error::InvalidDomain("combined alphabet too large".into()));
        }
        Ok(TupleAlphabet { ms })
    }

    pub fn arity(&self) -> usize {
        self.ms.len()
    }

    pub fn component_sizes(&self) -> &[usize] {
        &self.ms
    }

    pub fn size(&self) -> usize {
        self.ms.iter().product()
    }

    /// Lexicographic code of a symbol tuple (first component most
    /// significant).
    pub fn encode(&self, tuple: &[u8]) -> u8 {
        let mut code = 0usize;
        for (&s, &m) in tuple.iter().zip(&self.ms) {
            code = code * m + s as usize;
        }
        code as u8
    }

    pub fn decode(&self, code: u8) -> Vec<u8> {
        let mut c = code as usize;
        let mut out = vec![0u8; self.ms.len()];
        for i in (0..self.ms.len()).rev() {
            out[i] = (c % self.ms[i]) as u8;
            c /= self.ms[i];
        }
        out
    }

    /// Component `i` of every symbol of a combined word.
    pub fn project(&self, w: &Word, i: usize) -> Word {
        Word(w.0.iter().map(|&c| self.decode(c)[i]).collect())
    }
}

/// An r-ary distribution over word tuples.
#[derive(Debug, Clone)]
pub enum JointDistribution {
    /// Uniform over tuples whose symbol-tuple counts equal `counts`
    /// (indexed by combined symbol, summing to `n`).
    StatisticsUniform {
        alphabet: TupleAlphabet,
        counts: Vec<usize>,
    },
    /// Explicit atom table over combined words.
    AtomTable {
        alphabet: TupleAlphabet,
        n: usize,
        atoms: BTreeMap<Word, BigRational>,
    },
    /// Independent across coordinates with symbol-tuple law `table`.
    IidTuple {
        alphabet: TupleAlphabet,
        n: usize,
        table: Vec<BigRational>,
    },
}

impl JointDistribution {
    pub fn statistics_uniform(alphabet: TupleAlphabet, counts: Vec<usize>) -> Result<Self> {
        if counts.len() != alphabet.size() {
            return Err(Error::Precondition("one count per symbol tuple".into()));
        }
        Ok(JointDistribution::StatisticsUniform { alphabet, counts })
    }

    pub fn atom_table(
        alphabet: TupleAlphabet,
        n: usize,
        atoms: BTreeMap<Word, BigRational>,
    ) -> Result<Self> {
        let total: BigRational = atoms.values().sum();
        let one = BigRational::from(BigInt::from(1));
        if (total - one).to_f64().map(f64::abs).unwrap_or(1.0) > 1e-12 {
            return Err(Error::Precondition("atom probabilities must sum to 1".into()));
        }
        for w in atoms.keys() {
            if w.len() != n || w.0.iter().any(|&c| (c as usize) >= alphabet.size()) {
                return Err(Error::Precondition("atom outside the tuple space".into()));
            }
        }
        Ok(JointDistribution::AtomTable { alphabet, n, atoms })
    }

    pub fn alphabet(&self) -> &TupleAlphabet {
        match self {
            JointDistribution::StatisticsUniform { alphabet, .. }
            | JointDistribution::AtomTable { alphabet, .. }
            | JointDistribution::IidTuple { alphabet, .. } => alphabet,
        }
    }

    pub fn arity(&self) -> usize {
        self.alphabet().arity()
    }

    pub fn n(&self) -> usize {
        match self {
            JointDistribution::StatisticsUniform { counts, .. } => counts.iter().sum(),
            JointDistribution::AtomTable { n, .. } | JointDistribution::IidTuple { n, .. } => *n,
        }
    }

    /// Per-coordinate symbol-tuple frequencies (exact): the probability
    /// that a uniformly random coordinate of a sample carries each tuple.
    pub fn atom_marginals(&self) -> Vec<BigRational> {
        let size = self.alphabet().size();
        match self {
            JointDistribution::StatisticsUniform { counts, .. } => {
                let n: usize = counts.iter().sum();
                counts
                    .iter()
                    .map(|&c| BigRational::new(BigInt::from(c), BigInt::from(n)))
                    .collect()
            }
            JointDistribution::AtomTable { n, atoms, .. } => {
                let mut out = vec![BigRational::zero(); size];
                for (w, p) in atoms {
                    for &c in &w.0 {
                        out[c as usize] += p / BigRational::from(BigInt::from(*n));
                    }
                }
                out
            }
            JointDistribution::IidTuple { table, .. } => table.clone(),
        }
    }

    /// Symbol tuples with positive probability.
    pub fn support_symbols(&self) -> Vec<u8> {
        self.atom_marginals()
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(c, _)| c as u8)
            .collect()
    }

    /// Counts of symbol `a` in component `i`, when integral. For the
    /// statistics-uniform form these are the component slice counts.
    pub fn component_counts(&self, i: usize) -> Result<Vec<usize>> {
        match self {
            JointDistribution::StatisticsUniform { alphabet, counts } => {
                let mut out = vec![0usize; alphabet.component_sizes()[i]];
                for (c, &cnt) in counts.iter().enumerate() {
                    let tuple = alphabet.decode(c as u8);
                    out[tuple[i] as usize] += cnt;
                }
                Ok(out)
            }
            _ => Err(Error::Precondition(
                "component counts need the statistics-uniform form".into(),
            )),
        }
    }

    /// The component multi-slice supporting coordinate `i` of samples.
    pub fn component_slice(&self, i: usize) -> Result<MultiSlice> {
        MultiSlice::new(self.component_counts(i)?)
    }

    /// The product analogue: independent coordinates, each carrying the
    /// single-coordinate marginal law.
    pub fn product_version(&self) -> JointDistribution {
        JointDistribution::IidTuple {
            alphabet: self.alphabet().clone(),
            n: self.n(),
            table: self.atom_marginals(),
        }
    }

    /// The product space over the combined alphabet matching the product
    /// version (exact weights when the distribution is statistics-uniform).
    pub fn product_space(&self) -> Result<ProductSpace> {
        match self {
            JointDistribution::StatisticsUniform { counts, .. } => {
                ProductSpace::from_counts(counts)
            }
            _ => {
                let weights: Vec<f64> = self
                    .atom_marginals()
                    .iter()
                    .map(|p| p.to_f64().unwrap_or(0.0))
                    .collect();
                ProductSpace::new(self.n(), weights)
            }
        }
    }

    /// The combined-alphabet slice carrying the statistics-uniform measure.
    pub fn combined_slice(&self) -> Result<MultiSlice> {
        match self {
            JointDistribution::StatisticsUniform { counts, .. } => MultiSlice::new(counts.clone()),
            _ => Err(Error::Precondition(
                "combined slice needs the statistics-uniform form".into(),
            )),
        }
    }

    /// Draw one combined word.
    pub fn sample(&self, rng: &mut Rng) -> Word {
        match self {
            JointDistribution::StatisticsUniform { counts, .. } => {
                MultiSlice::new(counts.clone()).expect("valid counts").sample_uniform(rng)
            }
            JointDistribution::IidTuple { n, table, .. } => {
                // exact inverse-CDF over a common denominator
                let denom = table
                    .iter()
                    .fold(BigInt::from(1), |acc, p| num_integer::lcm(acc, p.denom().clone()));
                let weights: Vec<BigInt> = table
                    .iter()
                    .map(|p| (p * BigRational::from(denom.clone())).to_integer())
                    .collect();
                let total = weights.iter().fold(BigInt::from(0), |a, b| a + b);
                let total_u = total.to_u64().expect("denominator fits u64");
                let mut letters = Vec::with_capacity(*n);
                for _ in 0..*n {
                    let t = BigInt::from(rng.gen_range(0..total_u));
                    let mut acc = BigInt::from(0);
                    let mut chosen = weights.len() - 1;
                    for (c, w) in weights.iter().enumerate() {
                        acc += w;
                        if t < acc {
                            chosen = c;
                            break;
                        }
                    }
                    letters.push(chosen as u8);
                }
                Word(letters)
            }
            JointDistribution::AtomTable { atoms, .. } => {
                let t: f64 = rng.gen();
                let mut acc = 0.0;
                let mut last = None;
                for (w, p) in atoms {
                    acc += p.to_f64().unwrap_or(0.0);
                    last = Some(w);
                    if t < acc {
                        return w.clone();
                    }
                }
                last.expect("nonempty atom table").clone()
            }
        }
    }

    /// Whether the distribution is invariant under simultaneous coordinate
    /// permutations. Exact for the uniform forms; atom tables are checked
    /// against generating transpositions.
    pub fn is_symmetric(&self) -> bool {
        match self {
            JointDistribution::StatisticsUniform { .. } | JointDistribution::IidTuple { .. } => {
                true
            }
            JointDistribution::AtomTable { atoms, n, .. } => {
                for t in 0..n.saturating_sub(1) {
                    for (w, p) in atoms {
                        let pw = w.transposed(t, t + 1);
                        match atoms.get(&pw) {
                            Some(q) if q == p => {}
                            _ => return false,
                        }
                    }
                }
                true
            }
        }
    }
}
