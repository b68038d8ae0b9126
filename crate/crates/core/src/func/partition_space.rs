//! Partition-indexed subspaces of slice functions, realized through coset
//! indicators. For a partition `lambda` of `n`, a tabloid is a pair
//! `(A, B)`: an ordered set partition of the coordinates and an ordered
//! multiset partition of the symbols, with matching block sizes. The coset
//! it cuts out is the set of slice words whose symbol multiset on each
//! `A_i` equals `B_i`. The span of the coset indicators refines the degree
//! filtration; subtracting the spans of all strictly dominating partitions
//! produces the pure spaces.

use crate::config::Tolerances;
use crate::domain::{partitions_of, Domain, MultiSlice, Partition};
use crate::error::Error;
use crate::func::junta::SubspaceBasis;
use crate::func::RealFunction;
use crate::Result;

/// Enumerate ordered set partitions of `0..n` with the given block sizes.
fn ordered_set_partitions(n: usize, sizes: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    fn rec(
        available: Vec<usize>,
        sizes: &[usize],
        blocks: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        if sizes.is_empty() {
            out.push(blocks.clone());
            return;
        }
        let take = sizes[0];
        // choose `take` elements of `available`; force the smallest remaining
        // element into the block when the next block has the same size? No:
        // blocks are ordered, so all choices are distinct tabloids.
        let mut combo: Vec<usize> = (0..take).collect();
        loop {
            let chosen: Vec<usize> = combo.iter().map(|&i| available[i]).collect();
            let rest: Vec<usize> = available
                .iter()
                .enumerate()
                .filter(|(i, _)| !combo.contains(i))
                .map(|(_, &v)| v)
                .collect();
            blocks.push(chosen);
            rec(rest, &sizes[1..], blocks, out);
            blocks.pop();
            // next combination
            let k = combo.len();
            let n_av = available.len();
            let mut i = k;
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                if combo[i] < n_av - (k - i) {
                    combo[i] += 1;
                    for j in i + 1..k {
                        combo[j] = combo[j - 1] + 1;
                    }
                    break;
                }
                if i == 0 {
                    return;
                }
            }
        }
    }
    rec((0..n).collect(), sizes, &mut blocks, &mut out);
    out
}

/// Enumerate ordered multiset partitions of the symbol counts into blocks
/// of the given sizes. Each block is a per-symbol count vector.
fn multiset_partitions(counts: &[usize], sizes: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    fn fill_block(
        remaining: &mut Vec<usize>,
        sizes: &[usize],
        block: &mut Vec<usize>,
        sym: usize,
        need: usize,
        blocks: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        if need == 0 {
            blocks.push(block.clone());
            rec(remaining, &sizes[1..], blocks, out);
            blocks.pop();
            return;
        }
        if sym == remaining.len() {
            return;
        }
        let max_take = remaining[sym].min(need);
        for take in 0..=max_take {
            block[sym] = take;
            remaining[sym] -= take;
            fill_block(remaining, sizes, block, sym + 1, need - take, blocks, out);
            remaining[sym] += take;
            block[sym] = 0;
        }
    }
    fn rec(
        remaining: &mut Vec<usize>,
        sizes: &[usize],
        blocks: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        if sizes.is_empty() {
            out.push(blocks.clone());
            return;
        }
        let mut block = vec![0usize; remaining.len()];
        fill_block(remaining, sizes, &mut block, 0, sizes[0], blocks, out);
    }
    let mut rem = counts.to_vec();
    rec(&mut rem, sizes, &mut blocks, &mut out);
    out
}

/// All coset indicators of a partition on a slice, nonzero ones only.
pub fn coset_dictionary(slice: &MultiSlice, lambda: &Partition) -> Result<Vec<RealFunction>> {
    if lambda.n() != slice.n() {
        return Err(Error::Precondition("partition must match word length".into()));
    }
    let domain = Domain::slice(slice.clone());
    let words = domain.words()?;
    let sizes = lambda.parts();
    let set_parts = ordered_set_partitions(slice.n(), sizes);
    let sym_parts = multiset_partitions(slice.counts(), sizes);
    let mut out = Vec::new();
    for a in &set_parts {
        for b in &sym_parts {
            let mut values = Vec::with_capacity(words.len());
            let mut any = false;
            for w in &words {
                let mut hit = true;
                for (block, target) in a.iter().zip(b) {
                    let mut c = vec![0usize; slice.m()];
                    for &i in block {
                        c[w.0[i] as usize] += 1;
                    }
                    if &c != target {
                        hit = false;
                        break;
                    }
                }
                values.push(if hit { 1.0 } else { 0.0 });
                any |= hit;
            }
            if any {
                out.push(RealFunction::new(domain.clone(), values)?);
            }
        }
    }
    Ok(out)
}

/// Orthonormal basis of the pure partition space: the span of
/// `lambda`-cosets minus the spans of every strictly dominating partition.
pub fn pure_partition_basis(
    slice: &MultiSlice,
    lambda: &Partition,
    tol: &Tolerances,
) -> Result<SubspaceBasis> {
    let size = slice.size_usize()?;
    if size > tol.partition_cap {
        return Err(Error::ScaleLimit { size, cap: tol.partition_cap });
    }
    let domain = Domain::slice(slice.clone());
    let mu = domain.measure_vec()?;

    // basis of the union of all strictly dominating spans
    let mut dominating: Vec<RealFunction> = Vec::new();
    for mu_part in partitions_of(slice.n()) {
        if mu_part.strictly_dominates(lambda)? {
            for v in coset_dictionary(slice, &mu_part)? {
                gs_push(&mut dominating, v, &mu, tol);
            }
        }
    }
    let offset = dominating.len();
    let mut basis = dominating;
    for v in coset_dictionary(slice, lambda)? {
        gs_push(&mut basis, v, &mu, tol);
    }
    let pure: Vec<RealFunction> = basis.split_off(offset);
    let levels = vec![lambda.parts().first().map(|&l| slice.n() - l).unwrap_or(0); pure.len()];
    Ok(SubspaceBasis {
        domain,
        basis: pure,
        levels,
    })
}

fn gs_push(basis: &mut Vec<RealFunction>, v: RealFunction, mu: &[f64], tol: &Tolerances) {
    let norm_in = wdot(v.values(), v.values(), mu).max(0.0).sqrt();
    if norm_in < 1e-300 {
        return;
    }
    let mut u = v.values().to_vec();
    for _ in 0..2 {
        for b in basis.iter() {
            let c = wdot(&u, b.values(), mu);
            for (ui, bi) in u.iter_mut().zip(b.values()) {
                *ui -= c * bi;
            }
        }
    }
    let res = wdot(&u, &u, mu).max(0.0).sqrt();
    if res / norm_in < tol.rank_cutoff {
        return;
    }
    for ui in u.iter_mut() {
        *ui /= res;
    }
    basis.push(RealFunction::new(v.domain().clone(), u).expect("same domain"));
}

fn wdot(a: &[f64], b: &[f64], mu: &[f64]) -> f64 {
    a.iter().zip(b).zip(mu).map(|((x, y), w)| x * y * w).sum()
}

/// Project `f` onto the span of the `lambda`-cosets.
pub fn partition_project(
    f: &RealFunction,
    slice: &MultiSlice,
    lambda: &Partition,
    tol: &Tolerances,
) -> Result<RealFunction> {
    let size = slice.size_usize()?;
    if size > tol.partition_cap {
        return Err(Error::ScaleLimit { size, cap: tol.partition_cap });
    }
    let mu = f.domain().measure_vec()?;
    let mut basis: Vec<RealFunction> = Vec::new();
    for v in coset_dictionary(slice, lambda)? {
        gs_push(&mut basis, v, &mu, tol);
    }
    let mut out = RealFunction::constant(f.domain().clone(), 0.0)?;
    for b in &basis {
        let c = b.inner(f)?;
        out = out.add(&b.scale(c))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::junta::degree_basis;
    use crate::rngutil::seeded;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn one_row_partition_projects_onto_constants() {
        let s = MultiSlice::new(vec![2, 2]).unwrap();
        let lam = Partition::new(vec![4]).unwrap();
        let d = Domain::slice(s.clone());
        let mut rng = seeded(21);
        let f = RealFunction::random(d.clone(), &mut rng).unwrap();
        let proj = partition_project(&f, &s, &lam, &tol()).unwrap();
        let mean = f.mean();
        for v in proj.values() {
            assert!((v - mean).abs() < 1e-10);
        }
    }

    #[test]
    fn pure_partition_dimensions_on_2_2() {
        let s = MultiSlice::new(vec![2, 2]).unwrap();
        let t = tol();
        let b31 = pure_partition_basis(&s, &Partition::new(vec![3, 1]).unwrap(), &t).unwrap();
        let b22 = pure_partition_basis(&s, &Partition::new(vec![2, 2]).unwrap(), &t).unwrap();
        assert_eq!(b31.basis.len(), 3);
        assert_eq!(b22.basis.len(), 2);

        // the two pure spaces are orthogonal
        for u in &b31.basis {
            for v in &b22.basis {
                assert!(u.inner(v).unwrap().abs() < 1e-9);
            }
        }
    }

    #[test]
    fn partition_spaces_refine_degree_spaces_on_2_2() {
        // sum over lambda with lambda_1 = n-d of dim matches the pure degree dim
        let s = MultiSlice::new(vec![2, 2]).unwrap();
        let d = Domain::slice(s.clone());
        let t = tol();
        let deg = degree_basis(&d, 2, &t).unwrap();
        for dd in 0..=2usize {
            let mut total = 0;
            for lam in partitions_of(4) {
                if lam.parts()[0] == 4 - dd {
                    total += pure_partition_basis(&s, &lam, &t).unwrap().basis.len();
                }
            }
            assert_eq!(total, deg.dim_at(dd), "degree {dd}");
        }
    }

    #[test]
    fn junta_degree_space_equals_partition_sum_on_2_2() {
        // mutual projection residuals vanish between V_{=1} (junta route)
        // and the lambda_1 = 3 pure space (coset route)
        let s = MultiSlice::new(vec![2, 2]).unwrap();
        let d = Domain::slice(s.clone());
        let t = tol();
        let deg = degree_basis(&d, 2, &t).unwrap();
        let p_deg1 = deg.projector_up_to(1).unwrap();
        let p_deg0 = deg.projector_up_to(0).unwrap();

        let b31 = pure_partition_basis(&s, &Partition::new(vec![3, 1]).unwrap(), &t).unwrap();
        for v in &b31.basis {
            // v is inside V_1 and orthogonal to constants
            let inside = p_deg1.apply(v).unwrap();
            assert!(inside.sub(v).unwrap().norm2() < 1e-9);
            assert!(p_deg0.apply(v).unwrap().norm2() < 1e-9);
        }
        // and conversely the pure degree-1 space projects fully into the span
        let mut rng = seeded(33);
        let f = RealFunction::random(d, &mut rng).unwrap();
        let f1 = p_deg1.apply(&f).unwrap().sub(&p_deg0.apply(&f).unwrap()).unwrap();
        let mut proj = RealFunction::constant(f1.domain().clone(), 0.0).unwrap();
        for b in &b31.basis {
            proj = proj.add(&b.scale(b.inner(&f1).unwrap())).unwrap();
        }
        assert!(proj.sub(&f1).unwrap().norm2() < 1e-9);
    }
}
