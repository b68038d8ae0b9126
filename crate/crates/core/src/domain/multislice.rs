//! Multi-slices: words of `[m]^n` with a fixed count of every symbol,
//! carrying the uniform measure.

use crate::domain::counting::{entropy2, ln_biguint, multinomial};
use crate::domain::word::Word;
use crate::error::Error;
use crate::rngutil::Rng;
use crate::Result;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng as _;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiSlice {
    m: usize,
    n: usize,
    k: Vec<usize>,
}

impl MultiSlice {
    pub fn new(k: Vec<usize>) -> Result<Self> {
        if k.is_empty() {
            return Err(Error::InvalidDomain("alphabet must be nonempty".into()));
        }
        if k.len() > 250 {
            return Err(Error::InvalidDomain("alphabet too large".into()));
        }
        let n = k.iter().sum();
        Ok(MultiSlice { m: k.len(), n, k })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn counts(&self) -> &[usize] {
        &self.k
    }

    /// True when every symbol count is at least `alpha * n`.
    pub fn is_balanced(&self, alpha: f64) -> bool {
        self.k.iter().all(|&ki| ki as f64 >= alpha * self.n as f64)
    }

    /// Largest `alpha` for which the slice is `alpha`-balanced.
    pub fn balance(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        self.k.iter().copied().min().unwrap_or(0) as f64 / self.n as f64
    }

    /// Number of words in the slice, as an exact multinomial coefficient.
    pub fn size(&self) -> BigUint {
        multinomial(self.n, &self.k)
    }

    /// Size as usize for enumerable slices.
    pub fn size_usize(&self) -> Result<usize> {
        self.size().to_usize().ok_or(Error::ScaleLimit {
            size: usize::MAX,
            cap: usize::MAX,
        })
    }

    pub fn contains(&self, w: &Word) -> bool {
        w.len() == self.n
            && w.0.iter().all(|&s| (s as usize) < self.m)
            && w.counts(self.m) == self.k
    }

    /// Lexicographic rank of a member word.
    pub fn rank(&self, w: &Word) -> Result<BigUint> {
        if !self.contains(w) {
            return Err(Error::WordOutsideDomain(w.to_digits()));
        }
        let mut remaining = self.k.clone();
        let mut left = self.n;
        let mut rank = BigUint::zero();
        for &s in &w.0 {
            let s = s as usize;
            for c in 0..s {
                if remaining[c] > 0 {
                    remaining[c] -= 1;
                    rank += multinomial(left - 1, &remaining);
                    remaining[c] += 1;
                }
            }
            remaining[s] -= 1;
            left -= 1;
        }
        Ok(rank)
    }

    /// Inverse of [`rank`](Self::rank).
    pub fn unrank(&self, index: &BigUint) -> Result<Word> {
        if index >= &self.size() {
            return Err(Error::IndexOutOfRange {
                index: index.to_string(),
                size: self.size().to_string(),
            });
        }
        let mut remaining = self.k.clone();
        let mut left = self.n;
        let mut idx = index.clone();
        let mut letters = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            let mut chosen = None;
            for c in 0..self.m {
                if remaining[c] == 0 {
                    continue;
                }
                remaining[c] -= 1;
                let block = multinomial(left - 1, &remaining);
                if idx < block {
                    chosen = Some(c);
                    break;
                }
                idx -= block;
                remaining[c] += 1;
            }
            let c = chosen.expect("index within range always lands in a block");
            letters.push(c as u8);
            left -= 1;
        }
        Ok(Word(letters))
    }

    pub fn index_of(&self, w: &Word) -> Result<usize> {
        let r = self.rank(w)?;
        r.to_usize().ok_or(Error::IndexOutOfRange {
            index: r.to_string(),
            size: "usize".into(),
        })
    }

    pub fn word_at(&self, index: usize) -> Result<Word> {
        self.unrank(&BigUint::from(index))
    }

    /// All member words in lexicographic order. Only for enumerable slices.
    pub fn words(&self) -> Result<Vec<Word>> {
        let size = self.size_usize()?;
        let mut out = Vec::with_capacity(size);
        // next_permutation walk over the sorted multiset
        let mut current: Vec<u8> = Vec::with_capacity(self.n);
        for (sym, &cnt) in self.k.iter().enumerate() {
            current.extend(std::iter::repeat_n(sym as u8, cnt));
        }
        loop {
            out.push(Word(current.clone()));
            // find rightmost ascent
            let n = current.len();
            if n == 0 {
                break;
            }
            let mut i = n.wrapping_sub(1);
            let mut found = false;
            while i > 0 {
                if current[i - 1] < current[i] {
                    found = true;
                    break;
                }
                i -= 1;
            }
            if !found {
                break;
            }
            let pivot = i - 1;
            let mut j = n - 1;
            while current[j] <= current[pivot] {
                j -= 1;
            }
            current.swap(pivot, j);
            current[pivot + 1..].reverse();
        }
        debug_assert_eq!(out.len(), size);
        Ok(out)
    }

    /// Exact uniform sample: shuffle the symbol multiset.
    pub fn sample_uniform(&self, rng: &mut Rng) -> Word {
        let mut letters: Vec<u8> = Vec::with_capacity(self.n);
        for (sym, &cnt) in self.k.iter().enumerate() {
            letters.extend(std::iter::repeat_n(sym as u8, cnt));
        }
        for i in (1..letters.len()).rev() {
            let j = rng.gen_range(0..=i);
            letters.swap(i, j);
        }
        Word(letters)
    }

    /// The slice with every count halved. Requires even counts.
    pub fn halved(&self) -> Result<MultiSlice> {
        if self.k.iter().any(|&ki| ki % 2 != 0) {
            return Err(Error::Precondition("halving needs even symbol counts".into()));
        }
        MultiSlice::new(self.k.iter().map(|&ki| ki / 2).collect())
    }

    /// Exact size against the entropy-form upper bound
    /// `n^(m^2) * 2^(H(k/n) n)`. Returns `(size, bound)` after asserting
    /// the inequality (compared in natural log to dodge overflow).
    pub fn entropy_bound_check(&self) -> Result<(BigUint, f64)> {
        if self.k.contains(&0) {
            return Err(Error::Precondition(
                "entropy bound check needs positive counts".into(),
            ));
        }
        let size = self.size();
        let nu: Vec<f64> = self.k.iter().map(|&ki| ki as f64 / self.n as f64).collect();
        let h = entropy2(&nu);
        let ln_bound = (self.m * self.m) as f64 * (self.n as f64).ln()
            + h * self.n as f64 * std::f64::consts::LN_2;
        let ln_size = if size.is_one() { 0.0 } else { ln_biguint(&size) };
        assert!(
            ln_size <= ln_bound + 1e-9,
            "multinomial exceeded its entropy bound on {:?}",
            self.k
        );
        Ok((size, ln_bound.exp()))
    }
}

/// Both sides of the entropy-continuity bound
/// `|H(p) - H(q)| <= 4 m eps log2(1/eps)` for pointwise `eps`-close
/// probability vectors. Asserts the inequality and returns `(lhs, rhs)`.
pub fn entropy_distance_bound(p: &[f64], q: &[f64], eps: f64) -> Result<(f64, f64)> {
    if p.len() != q.len() {
        return Err(Error::Precondition("vectors of equal length".into()));
    }
    if !(0.0 < eps && eps < 0.5) {
        return Err(Error::Precondition("eps must lie in (0, 1/2)".into()));
    }
    for (a, b) in p.iter().zip(q) {
        if (a - b).abs() > eps + 1e-15 {
            return Err(Error::Precondition(format!(
                "pointwise gap {} exceeds eps {}",
                (a - b).abs(),
                eps
            )));
        }
    }
    let lhs = (entropy2(p) - entropy2(q)).abs();
    let rhs = 4.0 * p.len() as f64 * eps * (1.0 / eps).log2();
    assert!(lhs <= rhs + 1e-12, "entropy continuity bound failed");
    Ok((lhs, rhs))
}

/// All slices over alphabets of at most `m_max` symbols with word length
/// exactly `n`, counts positive.
pub fn slices_with_positive_counts(n: usize, m_max: usize) -> Vec<MultiSlice> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    fn rec(n: usize, m_max: usize, cur: &mut Vec<usize>, out: &mut Vec<MultiSlice>) {
        if cur.len() > m_max {
            return;
        }
        if n == 0 {
            if !cur.is_empty() {
                out.push(MultiSlice::new(cur.clone()).unwrap());
            }
            return;
        }
        if cur.len() == m_max {
            return;
        }
        for first in 1..=n {
            cur.push(first);
            rec(n - first, m_max, cur, out);
            cur.pop();
        }
    }
    rec(n, m_max, &mut cur, &mut out);
    out
}
