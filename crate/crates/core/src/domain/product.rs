//! Finite product spaces `([m]^n, nu^(x)n)`.

use crate::domain::word::Word;
use crate::error::Error;
use crate::rngutil::Rng;
use crate::Result;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng as _;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductSpace {
    m: usize,
    n: usize,
    nu: Vec<f64>,
    /// Exact weights as fractions `num/denom`, kept when the space is built
    /// from integer counts.
    nu_exact: Option<Vec<(u64, u64)>>,
}

impl ProductSpace {
    pub fn new(n: usize, nu: Vec<f64>) -> Result<Self> {
        if nu.is_empty() {
            return Err(Error::InvalidDomain("alphabet must be nonempty".into()));
        }
        if nu.iter().any(|&w| w < 0.0) {
            return Err(Error::InvalidDomain("weights must be nonnegative".into()));
        }
        let total: f64 = nu.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDomain(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        Ok(ProductSpace { m: nu.len(), n, nu, nu_exact: None })
    }

    /// The product analogue of a slice: `nu(i) = k_i / n`, kept exact.
    pub fn from_counts(counts: &[usize]) -> Result<Self> {
        let n: usize = counts.iter().sum();
        if n == 0 {
            return Err(Error::InvalidDomain("empty word length".into()));
        }
        let nu: Vec<f64> = counts.iter().map(|&k| k as f64 / n as f64).collect();
        let nu_exact = counts.iter().map(|&k| (k as u64, n as u64)).collect();
        Ok(ProductSpace {
            m: counts.len(),
            n,
            nu,
            nu_exact: Some(nu_exact),
        })
    }

    /// Same weights, different word length.
    pub fn with_length(&self, n: usize) -> ProductSpace {
        ProductSpace {
            m: self.m,
            n,
            nu: self.nu.clone(),
            nu_exact: self.nu_exact.clone(),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &[f64] {
        &self.nu
    }

    pub fn weight_exact(&self, symbol: usize) -> Option<BigRational> {
        self.nu_exact.as_ref().map(|w| {
            let (p, q) = w[symbol];
            BigRational::new(p.into(), q.into())
        })
    }

    /// Smallest positive symbol weight.
    pub fn min_positive_weight(&self) -> f64 {
        self.nu
            .iter()
            .copied()
            .filter(|&w| w > 0.0)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn size(&self) -> BigUint {
        BigUint::from(self.m).pow(self.n as u32)
    }

    pub fn size_usize(&self) -> Result<usize> {
        self.size().to_usize().ok_or(Error::ScaleLimit {
            size: usize::MAX,
            cap: usize::MAX,
        })
    }

    pub fn contains(&self, w: &Word) -> bool {
        w.len() == self.n && w.0.iter().all(|&s| (s as usize) < self.m)
    }

    /// Lexicographic index: the word read as a base-`m` numeral.
    pub fn index_of(&self, w: &Word) -> Result<usize> {
        if !self.contains(w) {
            return Err(Error::WordOutsideDomain(w.to_digits()));
        }
        let mut idx = 0usize;
        for &s in &w.0 {
            idx = idx
                .checked_mul(self.m)
                .and_then(|v| v.checked_add(s as usize))
                .ok_or(Error::ScaleLimit { size: usize::MAX, cap: usize::MAX })?;
        }
        Ok(idx)
    }

    pub fn word_at(&self, index: usize) -> Result<Word> {
        let size = self.size_usize()?;
        if index >= size {
            return Err(Error::IndexOutOfRange {
                index: index.to_string(),
                size: size.to_string(),
            });
        }
        let mut letters = vec![0u8; self.n];
        let mut idx = index;
        for i in (0..self.n).rev() {
            letters[i] = (idx % self.m) as u8;
            idx /= self.m;
        }
        Ok(Word(letters))
    }

    /// Probability of a single point.
    pub fn point_measure(&self, w: &Word) -> f64 {
        w.0.iter().map(|&s| self.nu[s as usize]).product()
    }

    pub fn point_measure_exact(&self, w: &Word) -> Option<BigRational> {
        let weights = self.nu_exact.as_ref()?;
        let mut acc = BigRational::one();
        for &s in &w.0 {
            let (p, q) = weights[s as usize];
            if p == 0 {
                return Some(BigRational::zero());
            }
            acc *= BigRational::new(p.into(), q.into());
        }
        Some(acc)
    }

    /// Sample one symbol from `nu`. Uses exact integer arithmetic when the
    /// space came from counts.
    pub fn sample_symbol(&self, rng: &mut Rng) -> u8 {
        if let Some(exact) = &self.nu_exact {
            let denom = exact[0].1;
            let t = rng.gen_range(0..denom);
            let mut acc = 0u64;
            for (sym, &(p, _)) in exact.iter().enumerate() {
                acc += p;
                if t < acc {
                    return sym as u8;
                }
            }
            return (self.m - 1) as u8;
        }
        let t: f64 = rng.gen();
        let mut acc = 0.0;
        for (sym, &w) in self.nu.iter().enumerate() {
            acc += w;
            if t < acc {
                return sym as u8;
            }
        }
        (self.m - 1) as u8
    }

    pub fn sample(&self, rng: &mut Rng) -> Word {
        Word((0..self.n).map(|_| self.sample_symbol(rng)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexing_is_lexicographic() {
        let p = ProductSpace::new(3, vec![0.5, 0.5]).unwrap();
        assert_eq!(p.index_of(&Word(vec![0, 0, 0])).unwrap(), 0);
        assert_eq!(p.index_of(&Word(vec![0, 0, 1])).unwrap(), 1);
        assert_eq!(p.index_of(&Word(vec![1, 1, 1])).unwrap(), 7);
        for i in 0..8 {
            assert_eq!(p.index_of(&p.word_at(i).unwrap()).unwrap(), i);
        }
    }

    #[test]
    fn exact_weights_from_counts() {
        let p = ProductSpace::from_counts(&[2, 2]).unwrap();
        assert_eq!(p.weights(), &[0.5, 0.5]);
        let w = Word(vec![0, 1, 0, 1]);
        let exact = p.point_measure_exact(&w).unwrap();
        assert_eq!(exact, BigRational::new(1.into(), 16.into()));
    }

    #[test]
    fn measures_sum_to_one() {
        let p = ProductSpace::new(3, vec![0.2, 0.3, 0.5]).unwrap();
        let total: f64 = (0..27)
            .map(|i| p.point_measure(&p.word_at(i).unwrap()))
            .sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
}
