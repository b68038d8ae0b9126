//! Integer partitions, the dominance order, and hook-length dimensions.

use crate::domain::counting::factorial;
use crate::error::Error;
use crate::Result;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

/// A partition of `n`: non-increasing positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidDomain("partition needs at least one part".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidDomain("partition parts must be positive".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidDomain("partition parts must be non-increasing".into()));
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }

    /// Dominance: every prefix sum of `self` is at least the matching
    /// prefix sum of `other` (shorter sequences padded with zeros).
    pub fn dominates(&self, other: &Partition) -> Result<bool> {
        if self.n() != other.n() {
            return Err(Error::Precondition(
                "dominance compares partitions of the same integer".into(),
            ));
        }
        let len = self.parts.len().max(other.parts.len());
        let mut a = 0usize;
        let mut b = 0usize;
        for i in 0..len {
            a += self.parts.get(i).copied().unwrap_or(0);
            b += other.parts.get(i).copied().unwrap_or(0);
            if a < b {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn strictly_dominates(&self, other: &Partition) -> Result<bool> {
        Ok(self != other && self.dominates(other)?)
    }

    /// Dimension via the hook-length formula: `n! / prod(hooks)`.
    pub fn hook_dimension(&self) -> BigUint {
        let n = self.n();
        let rows = &self.parts;
        // conjugate column lengths
        let width = rows[0];
        let mut cols = vec![0usize; width];
        for &r in rows {
            for c in cols.iter_mut().take(r) {
                *c += 1;
            }
        }
        let mut denom = BigUint::from(1u32);
        for (i, &r) in rows.iter().enumerate() {
            for j in 0..r {
                let hook = (r - j) + (cols[j] - i) - 1;
                denom *= BigUint::from(hook);
            }
        }
        let dim = factorial(n) / denom;
        self.check_dimension_bounds(&dim);
        dim
    }

    /// Contract of the hook dimension: one-row partitions have dimension
    /// one, and otherwise `dim >= (n/(d e))^d` for `d = min(n - l1, rows)`.
    fn check_dimension_bounds(&self, dim: &BigUint) {
        let n = self.n();
        if self.parts.len() == 1 {
            assert_eq!(dim, &BigUint::from(1u32), "one-row partition must have dimension 1");
            return;
        }
        let d = (n - self.parts[0]).min(self.parts.len());
        if d > 0 {
            let lhs = dim.to_f64().map(|v| v.ln()).unwrap_or_else(|| {
                crate::domain::counting::ln_biguint(dim)
            });
            let rhs = d as f64 * ((n as f64) / (d as f64 * std::f64::consts::E)).ln();
            assert!(
                lhs >= rhs - 1e-9,
                "hook dimension lower bound failed for {:?}: ln dim {} < {}",
                self.parts,
                lhs,
                rhs
            );
        }
    }
}

/// All partitions of `n` in lexicographically decreasing order.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(remaining: usize, max_part: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition { parts: current.clone() });
            return;
        }
        let top = remaining.min(max_part);
        for p in (1..=top).rev() {
            current.push(p);
            rec(remaining - p, p, current, out);
            current.pop();
        }
    }
    rec(n, n, &mut current, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    /// Independent oracle: count standard Young tableaux by backtracking.
    fn syt_count(parts: &[usize]) -> u64 {
        let rows = parts.len();
        let mut fill = vec![0usize; rows]; // cells filled per row
        fn rec(parts: &[usize], fill: &mut Vec<usize>, placed: usize, n: usize) -> u64 {
            if placed == n {
                return 1;
            }
            let mut total = 0;
            for r in 0..parts.len() {
                if fill[r] < parts[r] && (r == 0 || fill[r] < fill[r - 1]) {
                    fill[r] += 1;
                    total += rec(parts, fill, placed + 1, n);
                    fill[r] -= 1;
                }
            }
            total
        }
        rec(parts, &mut fill, 0, parts.iter().sum())
    }

    #[test]
    fn hook_formula_examples() {
        assert_eq!(Partition::new(vec![5]).unwrap().hook_dimension(), BigUint::from(1u32));
        assert_eq!(Partition::new(vec![2, 1]).unwrap().hook_dimension(), BigUint::from(2u32));
        assert_eq!(Partition::new(vec![2, 2]).unwrap().hook_dimension(), BigUint::from(2u32));
    }

    #[test]
    fn hook_formula_matches_syt_enumeration_up_to_8() {
        for n in 1..=8 {
            for lam in partitions_of(n) {
                let by_hooks = lam.hook_dimension();
                let by_syt = BigUint::from(syt_count(lam.parts()));
                assert_eq!(by_hooks, by_syt, "mismatch at {:?}", lam.parts());
            }
        }
    }

    #[test]
    fn squared_dimensions_sum_to_factorial() {
        for n in 1..=8 {
            let mut sum = BigUint::from(0u32);
            for lam in partitions_of(n) {
                let d = lam.hook_dimension();
                sum += &d * &d;
            }
            assert_eq!(sum, factorial(n));
        }
    }

    #[test]
    fn dominance_examples() {
        let p4 = Partition::new(vec![4]).unwrap();
        let p22 = Partition::new(vec![2, 2]).unwrap();
        let p31 = Partition::new(vec![3, 1]).unwrap();
        let p211 = Partition::new(vec![2, 1, 1]).unwrap();
        assert!(p4.dominates(&p22).unwrap());
        assert!(!p22.dominates(&p31).unwrap());
        assert!(p31.dominates(&p211).unwrap());
        assert!(p4
            .dominates(&Partition::new(vec![3]).unwrap())
            .is_err());
    }

    #[test]
    fn dominance_is_a_partial_order_up_to_8() {
        for n in 1..=8 {
            let ps = partitions_of(n);
            for a in &ps {
                assert!(a.dominates(a).unwrap(), "reflexive");
                for b in &ps {
                    if a.dominates(b).unwrap() && b.dominates(a).unwrap() {
                        assert_eq!(a, b, "antisymmetric");
                    }
                    for c in &ps {
                        if a.dominates(b).unwrap() && b.dominates(c).unwrap() {
                            assert!(a.dominates(c).unwrap(), "transitive");
                        }
                    }
                }
            }
        }
    }
}
