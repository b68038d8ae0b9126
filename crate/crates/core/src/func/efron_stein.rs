//! The Efron-Stein decomposition on product spaces: every function splits
//! uniquely into orthogonal components indexed by coordinate subsets, each
//! component depending only on its subset.

use crate::domain::Domain;
use crate::error::Error;
use crate::func::RealFunction;
use crate::Result;

/// Components indexed by subset bitmask: `components[s]` is `f^{=S}` for
/// the subset `S` encoded by bits of `s`.
#[derive(Debug, Clone)]
pub struct EfronStein {
    pub domain: Domain,
    pub components: Vec<RealFunction>,
}

/// Conditional expectation onto the coordinates of `mask`: averages out
/// every coordinate outside the mask under the product measure.
pub fn average_onto(f: &RealFunction, mask: usize) -> Result<RealFunction> {
    let p = f.domain().as_product()?;
    let n = p.n();
    let size = p.size_usize()?;
    let words = f.domain().words()?;
    let mut num = vec![0.0f64; size];
    let mut idx_of_restriction = vec![0usize; size];
    // group points by their restriction to the mask; accumulate measure-weighted values
    let mut den = vec![0.0f64; size];
    for (i, w) in words.iter().enumerate() {
        let mut key = 0usize;
        for j in 0..n {
            key *= p.m();
            if mask & (1 << j) != 0 {
                key += w.0[j] as usize;
            }
        }
        idx_of_restriction[i] = key;
        let weight = p.point_measure(w);
        num[key] += weight * f.values()[i];
        den[key] += weight;
    }
    let values = (0..size)
        .map(|i| {
            let key = idx_of_restriction[i];
            if den[key] > 0.0 {
                num[key] / den[key]
            } else {
                0.0
            }
        })
        .collect();
    RealFunction::new(f.domain().clone(), values)
}

impl EfronStein {
    /// Exact decomposition by Moebius inversion over the subset lattice.
    pub fn of(f: &RealFunction, cap: usize) -> Result<Self> {
        let p = f.domain().as_product()?;
        let n = p.n();
        let size = p.size_usize()?;
        if size > cap || n > 20 {
            return Err(Error::ScaleLimit { size, cap });
        }
        let masks = 1usize << n;
        let mut averaged: Vec<RealFunction> = Vec::with_capacity(masks);
        for mask in 0..masks {
            averaged.push(average_onto(f, mask)?);
        }
        let mut components = Vec::with_capacity(masks);
        for s in 0..masks {
            let mut comp = RealFunction::constant(f.domain().clone(), 0.0)?;
            // sum over subsets t of s with sign (-1)^{|s|-|t|}
            let mut t = s;
            loop {
                let sign = if (s.count_ones() - t.count_ones()) % 2 == 0 {
                    1.0
                } else {
                    -1.0
                };
                comp = comp.add(&averaged[t].scale(sign))?;
                if t == 0 {
                    break;
                }
                t = (t - 1) & s;
            }
            components.push(comp);
        }
        Ok(EfronStein { domain: f.domain().clone(), components })
    }

    pub fn component(&self, mask: usize) -> &RealFunction {
        &self.components[mask]
    }

    pub fn n(&self) -> usize {
        self.domain.n()
    }

    /// `f^{<=d}`: all components of subset size at most `d`.
    pub fn truncate(&self, d: usize) -> RealFunction {
        let mut acc = RealFunction::constant(self.domain.clone(), 0.0).unwrap();
        for (mask, c) in self.components.iter().enumerate() {
            if mask.count_ones() as usize <= d {
                acc = acc.add(c).unwrap();
            }
        }
        acc
    }

    pub fn reconstruct(&self) -> RealFunction {
        self.truncate(self.n())
    }

    /// Squared norm carried by components of each size.
    pub fn degree_weights(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n() + 1];
        for (mask, c) in self.components.iter().enumerate() {
            out[mask.count_ones() as usize] += c.norm2().powi(2);
        }
        out
    }
}
