//! Real-valued functions on measured domains, with expectation inner
//! products and the decompositions used throughout: junta/degree spaces,
//! Efron-Stein components, and partition-coset spaces on small slices.

pub mod efron_stein;
pub mod hyper;
pub mod junta;
pub mod partition_space;

pub use junta::{DegreeDecomposition, SubspaceBasis};

use crate::domain::{Domain, Word};
use crate::error::Error;
use crate::rngutil::Rng;
use crate::Result;
use rand::Rng as _;
use serde::Serialize;

/// A dense table of real values over a measured domain, indexed by the
/// domain's canonical point order.
#[derive(Debug, Clone, Serialize)]
pub struct RealFunction {
    domain: Domain,
    values: Vec<f64>,
}

impl RealFunction {
    pub fn new(domain: Domain, values: Vec<f64>) -> Result<Self> {
        let size = domain.size()?;
        if values.len() != size {
            return Err(Error::Precondition(format!(
                "value table has {} entries, domain has {} points",
                values.len(),
                size
            )));
        }
        Ok(RealFunction { domain, values })
    }

    pub fn constant(domain: Domain, c: f64) -> Result<Self> {
        let size = domain.size()?;
        Ok(RealFunction { domain, values: vec![c; size] })
    }

    /// Build from a pointwise rule on words.
    pub fn from_fn(domain: Domain, rule: impl Fn(&Word) -> f64) -> Result<Self> {
        let words = domain.words()?;
        let values = words.iter().map(rule).collect();
        Ok(RealFunction { domain, values })
    }

    /// Indicator of `x_A = alpha` (coordinates listed in `coords`).
    pub fn indicator(domain: Domain, coords: &[usize], symbols: &[u8]) -> Result<Self> {
        assert_eq!(coords.len(), symbols.len());
        Self::from_fn(domain, |w| {
            let hit = coords.iter().zip(symbols).all(|(&i, &a)| w.0[i] == a);
            if hit {
                1.0
            } else {
                0.0
            }
        })
    }

    pub fn random(domain: Domain, rng: &mut Rng) -> Result<Self> {
        let size = domain.size()?;
        let values = (0..size).map(|_| rng.gen_range(-1.0..1.0)).collect();
        Ok(RealFunction { domain, values })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Expectation inner product `E[f g]` under the domain measure.
    pub fn inner(&self, other: &RealFunction) -> Result<f64> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch);
        }
        let mu = self.domain.measure_vec()?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .zip(&mu)
            .map(|((a, b), w)| a * b * w)
            .sum())
    }

    pub fn norm2(&self) -> f64 {
        self.inner(self).expect("same domain").max(0.0).sqrt()
    }

    /// Expectation q-norm `(E |f|^q)^(1/q)`.
    pub fn norm_q(&self, q: u32) -> f64 {
        let mu = self.domain.measure_vec().expect("enumerable domain");
        let e: f64 = self
            .values
            .iter()
            .zip(&mu)
            .map(|(v, w)| v.abs().powi(q as i32) * w)
            .sum();
        e.powf(1.0 / q as f64)
    }

    pub fn mean(&self) -> f64 {
        let mu = self.domain.measure_vec().expect("enumerable domain");
        self.values.iter().zip(&mu).map(|(v, w)| v * w).sum()
    }

    pub fn add(&self, other: &RealFunction) -> Result<RealFunction> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch);
        }
        Ok(RealFunction {
            domain: self.domain.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &RealFunction) -> Result<RealFunction> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch);
        }
        Ok(RealFunction {
            domain: self.domain.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, c: f64) -> RealFunction {
        RealFunction {
            domain: self.domain.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    /// The relabeled function `(^pi f)(x) = f(^pi x)`.
    pub fn permuted(&self, perm: &[usize]) -> Result<RealFunction> {
        let words = self.domain.words()?;
        let mut values = vec![0.0; self.values.len()];
        for (idx, w) in words.iter().enumerate() {
            let pw = w.permute(perm);
            let pidx = self.domain.index_of(&pw)?;
            values[idx] = self.values[pidx];
        }
        Ok(RealFunction { domain: self.domain.clone(), values })
    }

    /// Whether `f` is a `J`-junta: invariant under every permutation
    /// fixing `J` pointwise. Checked exhaustively; intended for small `n`.
    pub fn is_junta(&self, junta: &[usize], tol: f64) -> Result<bool> {
        let n = self.domain.n();
        let free: Vec<usize> = (0..n).filter(|i| !junta.contains(i)).collect();
        // generators: transpositions of adjacent free coordinates suffice
        for w in free.windows(2) {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.swap(w[0], w[1]);
            let pf = self.permuted(&perm)?;
            let dev = self
                .values
                .iter()
                .zip(pf.values())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            if dev > tol {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::MultiSlice;
    use crate::rngutil::seeded;

    fn slice_2_2() -> Domain {
        Domain::slice(MultiSlice::new(vec![2, 2]).unwrap())
    }

    #[test]
    fn inner_of_constants_is_one() {
        let d = slice_2_2();
        let one = RealFunction::constant(d, 1.0).unwrap();
        assert!((one.inner(&one).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn indicator_mass_is_half() {
        let d = slice_2_2();
        let f = RealFunction::indicator(d.clone(), &[0], &[0]).unwrap();
        let one = RealFunction::constant(d, 1.0).unwrap();
        assert!((f.inner(&one).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn inner_is_symmetric() {
        let d = slice_2_2();
        let mut rng = seeded(3);
        let f = RealFunction::random(d.clone(), &mut rng).unwrap();
        let g = RealFunction::random(d, &mut rng).unwrap();
        assert!((f.inner(&g).unwrap() - g.inner(&f).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn function_json_shape() {
        let d = Domain::slice(MultiSlice::new(vec![1, 1]).unwrap());
        let f = RealFunction::new(d, vec![0.5, -0.5]).unwrap();
        let js = serde_json::to_string(&f).unwrap();
        assert_eq!(
            js,
            r#"{"domain":{"type":"multislice","n":2,"k":[1,1]},"values":[0.5,-0.5]}"#
        );
    }

    #[test]
    fn junta_detection() {
        let d = slice_2_2();
        let f = RealFunction::indicator(d.clone(), &[0], &[0]).unwrap();
        assert!(f.is_junta(&[0], 1e-12).unwrap());
        assert!(!f.is_junta(&[1], 1e-12).unwrap());
        let mut rng = seeded(4);
        let g = RealFunction::random(d, &mut rng).unwrap();
        assert!(!g.is_junta(&[0], 1e-9).unwrap());
    }
}
