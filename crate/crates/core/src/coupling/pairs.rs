//! Enumeration of word pairs with prescribed pair statistics, shared by
//! the exact coupling tables and the conditioned pair operators.
//!
//! The pair statistics of `(x, y)` is the matrix counting, for every
//! symbol pair `(a, b)`, the coordinates where `x` carries `a` and `y`
//! carries `b`. Conditioned on its statistics, the segment coupling is
//! uniform over all pairs achieving it, so enumerating those pairs (with
//! their count) is the one primitive both exact paths need.

use crate::domain::counting::multinomial;
use crate::domain::Word;
use num_bigint::BigUint;
use num_traits::One;

/// Pair statistics matrix: `stats[a][b]` coordinates have `x_i = a`,
/// `y_i = b`. Row sums are the counts of `x`, column sums those of `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairStatistics(pub Vec<Vec<usize>>);

impl PairStatistics {
    pub fn of(x: &Word, y: &Word, ma: usize, mb: usize) -> PairStatistics {
        let mut stats = vec![vec![0usize; mb]; ma];
        for (&a, &b) in x.0.iter().zip(&y.0) {
            stats[a as usize][b as usize] += 1;
        }
        PairStatistics(stats)
    }

    pub fn row_sums(&self) -> Vec<usize> {
        self.0.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<usize> {
        let mb = self.0.first().map(|r| r.len()).unwrap_or(0);
        (0..mb).map(|b| self.0.iter().map(|r| r[b]).sum()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        let m = self.0.len();
        self.0.first().map(|r| r.len()) == Some(m)
            && (0..m).all(|a| (0..m).all(|b| self.0[a][b] == self.0[b][a]))
    }

    /// Number of `y` compatible with any fixed `x` of matching counts:
    /// a product of row multinomials.
    pub fn placements_per_row(&self) -> BigUint {
        let mut acc = BigUint::one();
        for row in &self.0 {
            let k: usize = row.iter().sum();
            acc *= multinomial(k, row);
        }
        acc
    }
}

/// Overlap matrix of the consecutive segment partitions induced by two
/// count vectors: cell `(a, b)` is the length of the intersection of the
/// a-th segment of `left` with the b-th segment of `right`. This is the
/// pair statistics the segment coupling realizes when the two statistics
/// draws are `left` and `right`.
pub fn segment_overlap(left: &[usize], right: &[usize]) -> PairStatistics {
    let mut stats = vec![vec![0usize; right.len()]; left.len()];
    let mut la = 0usize;
    for (a, &ka) in left.iter().enumerate() {
        let (l0, l1) = (la, la + ka);
        let mut rb = 0usize;
        for (b, &kb) in right.iter().enumerate() {
            let (r0, r1) = (rb, rb + kb);
            let lo = l0.max(r0);
            let hi = l1.min(r1);
            if hi > lo {
                stats[a][b] = hi - lo;
            }
            rb = r1;
        }
        la = l1;
    }
    stats.retain(|_| true);
    PairStatistics(stats)
}

/// Visit every pair `(x, y)` whose pair statistics equals `stats`, in a
/// deterministic order. `x` ranges over the slice with the row-sum counts;
/// for each `x` the compatible `y` are produced by writing, into the
/// positions where `x` carries `a`, every multiset permutation of the
/// symbols prescribed by row `a`.
pub fn for_each_pair(
    stats: &PairStatistics,
    xs: &[Word],
    mut visit: impl FnMut(&Word, &Word),
) {
    let ma = stats.0.len();
    for x in xs {
        // positions per x-symbol
        let mut positions: Vec<Vec<usize>> = vec![Vec::new(); ma];
        for (i, &a) in x.0.iter().enumerate() {
            positions[a as usize].push(i);
        }
        // per-row multiset permutations
        let rows: Vec<Vec<Vec<u8>>> = (0..ma)
            .map(|a| multiset_permutations(&stats.0[a]))
            .collect();
        // Cartesian product over rows
        let mut choice = vec![0usize; ma];
        loop {
            let mut y = vec![0u8; x.len()];
            for a in 0..ma {
                let perm = &rows[a][choice[a]];
                for (&pos, &sym) in positions[a].iter().zip(perm) {
                    y[pos] = sym;
                }
            }
            let yw = Word(y);
            visit(x, &yw);
            // advance the product counter
            let mut carry = ma;
            for a in (0..ma).rev() {
                if choice[a] + 1 < rows[a].len() {
                    choice[a] += 1;
                    for c in choice.iter_mut().skip(a + 1) {
                        *c = 0;
                    }
                    carry = a;
                    break;
                }
            }
            if carry == ma {
                break;
            }
        }
    }
}

/// All arrangements of a multiset given by symbol counts, lexicographic.
pub fn multiset_permutations(counts: &[usize]) -> Vec<Vec<u8>> {
    let mut current: Vec<u8> = Vec::new();
    for (sym, &c) in counts.iter().enumerate() {
        current.extend(std::iter::repeat_n(sym as u8, c));
    }
    let mut out = Vec::new();
    if current.is_empty() {
        out.push(current);
        return out;
    }
    loop {
        out.push(current.clone());
        let n = current.len();
        let mut i = n - 1;
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
    out
}
