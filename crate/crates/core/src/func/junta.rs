//! Junta dictionaries and the degree decomposition.
//!
//! On both domains the space of degree-`d` functions is the span of all
//! indicators `1_{x_A = alpha}` with `|A| <= d`. The dictionary is heavily
//! rank-deficient on slices, so the basis is extracted with modified
//! Gram-Schmidt under the expectation inner product and a fixed relative
//! cutoff for dropping dependent vectors.

use crate::config::Tolerances;
use crate::domain::Domain;
use crate::error::Error;
use crate::func::RealFunction;
use crate::linalg::LinearMap;
use crate::Result;
use nalgebra::DMatrix;

/// An orthonormal basis of a subspace, tagged by the level (degree) at
/// which each vector entered.
#[derive(Debug, Clone)]
pub struct SubspaceBasis {
    pub domain: Domain,
    /// Orthonormal vectors under the expectation inner product.
    pub basis: Vec<RealFunction>,
    /// Dictionary level of each basis vector.
    pub levels: Vec<usize>,
}

impl SubspaceBasis {
    /// Orthogonal projector onto the span of the vectors at level `<= d`.
    pub fn projector_up_to(&self, d: usize) -> Result<LinearMap> {
        let size = self.domain.size()?;
        let mu = self.domain.measure_vec()?;
        let mut mat = DMatrix::zeros(size, size);
        for (b, &lvl) in self.basis.iter().zip(&self.levels) {
            if lvl > d {
                continue;
            }
            let v = b.values();
            for x in 0..size {
                let row = v[x];
                if row == 0.0 {
                    continue;
                }
                for y in 0..size {
                    mat[(x, y)] += row * v[y] * mu[y];
                }
            }
        }
        LinearMap::new(self.domain.clone(), self.domain.clone(), mat)
    }

    pub fn projector(&self) -> Result<LinearMap> {
        let top = self.levels.iter().copied().max().unwrap_or(0);
        self.projector_up_to(top)
    }

    /// Project a function onto the span of levels `<= d`.
    pub fn project_up_to(&self, f: &RealFunction, d: usize) -> Result<RealFunction> {
        if f.domain() != &self.domain {
            return Err(Error::DomainMismatch);
        }
        let mut out = RealFunction::constant(self.domain.clone(), 0.0)?;
        for (b, &lvl) in self.basis.iter().zip(&self.levels) {
            if lvl > d {
                continue;
            }
            let c = b.inner(f)?;
            out = out.add(&b.scale(c))?;
        }
        Ok(out)
    }

    pub fn dim_up_to(&self, d: usize) -> usize {
        self.levels.iter().filter(|&&l| l <= d).count()
    }

    pub fn dim_at(&self, d: usize) -> usize {
        self.levels.iter().filter(|&&l| l == d).count()
    }
}

/// All indicator functions `1_{x_A = alpha}` with `|A| = d`, in a
/// deterministic order, zero vectors skipped.
fn level_dictionary(domain: &Domain, d: usize) -> Result<Vec<RealFunction>> {
    let n = domain.n();
    let m = domain.m();
    let mut out = Vec::new();
    if d == 0 {
        out.push(RealFunction::constant(domain.clone(), 1.0)?);
        return Ok(out);
    }
    let mut coords: Vec<usize> = (0..d).collect();
    loop {
        // all symbol patterns on the chosen coordinates
        let mut pattern = vec![0u8; d];
        loop {
            let f = RealFunction::indicator(domain.clone(), &coords, &pattern)?;
            if f.values().iter().any(|&v| v != 0.0) {
                out.push(f);
            }
            // next pattern
            let mut idx = d;
            loop {
                if idx == 0 {
                    break;
                }
                idx -= 1;
                if (pattern[idx] as usize) + 1 < m {
                    pattern[idx] += 1;
                    for p in pattern.iter_mut().skip(idx + 1) {
                        *p = 0;
                    }
                    break;
                }
                if idx == 0 {
                    idx = usize::MAX;
                    break;
                }
            }
            if idx == usize::MAX {
                break;
            }
        }
        // next coordinate subset
        let mut i = d;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if coords[i] < n - (d - i) {
                coords[i] += 1;
                for j in i + 1..d {
                    coords[j] = coords[j - 1] + 1;
                }
                break;
            }
            if i == 0 {
                return Ok(out);
            }
        }
    }
}

/// Modified Gram-Schmidt over a streamed dictionary. `stop_at` allows an
/// early exit once the basis saturates the whole space.
fn mgs_extend(
    basis: &mut Vec<RealFunction>,
    levels: &mut Vec<usize>,
    level: usize,
    dict: Vec<RealFunction>,
    mu: &[f64],
    tol: &Tolerances,
    stop_at: usize,
) {
    for v in dict {
        if basis.len() >= stop_at {
            return;
        }
        let norm_in: f64 = inner_w(v.values(), v.values(), mu).max(0.0).sqrt();
        if norm_in < 1e-300 {
            continue;
        }
        let mut u = v.values().to_vec();
        // two passes of MGS keep orthogonality near machine precision
        for _ in 0..2 {
            for b in basis.iter() {
                let c = inner_w(&u, b.values(), mu);
                for (ui, bi) in u.iter_mut().zip(b.values()) {
                    *ui -= c * bi;
                }
            }
        }
        let res = inner_w(&u, &u, mu).max(0.0).sqrt();
        if res / norm_in < tol.rank_cutoff {
            continue;
        }
        for ui in u.iter_mut() {
            *ui /= res;
        }
        basis.push(RealFunction::new(v.domain().clone(), u).expect("same domain"));
        levels.push(level);
    }
}

fn inner_w(a: &[f64], b: &[f64], mu: &[f64]) -> f64 {
    a.iter().zip(b).zip(mu).map(|((x, y), w)| x * y * w).sum()
}

/// Orthonormal basis of the degree filtration `V_0 <= V_1 <= ... <= V_dmax`,
/// levels recording the degree at which each direction first appears.
pub fn degree_basis(domain: &Domain, dmax: usize, tol: &Tolerances) -> Result<SubspaceBasis> {
    let size = domain.size()?;
    if size > tol.degree_cap {
        return Err(Error::ScaleLimit { size, cap: tol.degree_cap });
    }
    let mu = domain.measure_vec()?;
    let mut basis = Vec::new();
    let mut levels = Vec::new();
    for d in 0..=dmax.min(domain.n()) {
        if basis.len() >= size {
            break;
        }
        let dict = level_dictionary(domain, d)?;
        mgs_extend(&mut basis, &mut levels, d, dict, &mu, tol, size);
    }
    Ok(SubspaceBasis {
        domain: domain.clone(),
        basis,
        levels,
    })
}

/// The dictionary at levels `<= d` before orthogonalization (deduplicated
/// only of exact zero vectors). Exposed for rank oracles in tests.
pub fn junta_dictionary(domain: &Domain, d: usize) -> Result<Vec<RealFunction>> {
    let mut out = Vec::new();
    for j in 0..=d.min(domain.n()) {
        out.extend(level_dictionary(domain, j)?);
    }
    Ok(out)
}

/// A function decomposed along pure-degree components.
#[derive(Debug, Clone)]
pub struct DegreeDecomposition {
    pub components: Vec<RealFunction>,
}

impl DegreeDecomposition {
    /// Split `f` as `sum_d f^{=d}` using a precomputed degree basis.
    pub fn of(f: &RealFunction, basis: &SubspaceBasis) -> Result<Self> {
        let dmax = basis.levels.iter().copied().max().unwrap_or(0);
        let mut components = Vec::with_capacity(dmax + 1);
        let mut prev = RealFunction::constant(f.domain().clone(), 0.0)?;
        for d in 0..=dmax {
            let cum = basis.project_up_to(f, d)?;
            components.push(cum.sub(&prev)?);
            prev = cum;
        }
        Ok(DegreeDecomposition { components })
    }

    pub fn component(&self, d: usize) -> Option<&RealFunction> {
        self.components.get(d)
    }

    /// `f^{<=d}`.
    pub fn truncate(&self, d: usize) -> RealFunction {
        let mut acc = self.components[0].clone();
        for c in self.components.iter().take(d + 1).skip(1) {
            acc = acc.add(c).expect("same domain");
        }
        acc
    }

    pub fn reconstruct(&self) -> RealFunction {
        self.truncate(self.components.len() - 1)
    }

    /// Per-degree squared norms.
    pub fn weights(&self) -> Vec<f64> {
        self.components.iter().map(|c| c.norm2().powi(2)).collect()
    }
}

/// Largest degree `d` with a nonzero pure-degree space, together with the
/// slice-specific cap `n - max_i k_i` it must respect.
pub fn max_degree_check(domain: &Domain, tol: &Tolerances) -> Result<(usize, usize)> {
    let slice = domain.as_slice()?;
    let size = domain.size()?;
    let basis = degree_basis(domain, domain.n(), tol)?;
    assert_eq!(basis.basis.len(), size, "degree spaces must exhaust the slice");
    let max_d = basis.levels.iter().copied().max().unwrap_or(0);
    let cap = slice.n() - slice.counts().iter().copied().max().unwrap_or(0);
    assert!(
        max_d <= cap,
        "pure degree {} exceeds cap {} on {:?}",
        max_d,
        cap,
        slice.counts()
    );
    Ok((max_d, cap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::MultiSlice;
    use crate::linalg::projector_deviation;
    use crate::rngutil::seeded;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn slice_2_2() -> Domain {
        Domain::slice(MultiSlice::new(vec![2, 2]).unwrap())
    }

    /// Independent rank oracle: Gaussian elimination on the Gram matrix of
    /// the raw dictionary.
    fn gram_rank(dict: &[RealFunction], mu: &[f64]) -> usize {
        let n = dict.len();
        let mut g = vec![vec![0.0f64; n]; n];
        for i in 0..n {
            for j in 0..n {
                g[i][j] = inner_w(dict[i].values(), dict[j].values(), mu);
            }
        }
        let mut rank = 0;
        let mut row = 0;
        for col in 0..n {
            let mut piv = row;
            for r in row..n {
                if g[r][col].abs() > g[piv][col].abs() {
                    piv = r;
                }
            }
            if g[piv][col].abs() < 1e-9 {
                continue;
            }
            g.swap(row, piv);
            let p = g[row][col];
            for r in 0..n {
                if r != row {
                    let factor = g[r][col] / p;
                    for c in 0..n {
                        g[r][c] -= factor * g[row][c];
                    }
                }
            }
            rank += 1;
            row += 1;
            if row == n {
                break;
            }
        }
        rank
    }

    #[test]
    fn dictionary_count_before_dedup() {
        // level 0 constant + 4 coordinates x 2 symbols
        let d = slice_2_2();
        let dict = junta_dictionary(&d, 1).unwrap();
        assert_eq!(dict.len(), 9);
    }

    #[test]
    fn degree_one_span_has_rank_four_on_2_2() {
        // the dictionary is rank-deficient: sum_i 1_{x_i=1} = 2 on the slice
        let d = slice_2_2();
        let mu = d.measure_vec().unwrap();
        let dict = junta_dictionary(&d, 1).unwrap();
        let oracle = gram_rank(&dict, &mu);
        let basis = degree_basis(&d, 1, &tol()).unwrap();
        assert_eq!(basis.basis.len(), oracle);
        assert_eq!(oracle, 4);
    }

    #[test]
    fn pure_degree_dimensions_on_2_2() {
        let d = slice_2_2();
        let basis = degree_basis(&d, 4, &tol()).unwrap();
        let dims: Vec<usize> = (0..=4).map(|i| basis.dim_at(i)).collect();
        // verified against the Gram-rank oracle level by level
        let mu = d.measure_vec().unwrap();
        for dd in 0..=4usize {
            let oracle = gram_rank(&junta_dictionary(&d, dd).unwrap(), &mu);
            assert_eq!(basis.dim_up_to(dd), oracle, "cumulative dim at degree {dd}");
        }
        assert_eq!(dims, vec![1, 3, 2, 0, 0]);
    }

    #[test]
    fn projectors_are_orthogonal_projections() {
        let d = slice_2_2();
        let basis = degree_basis(&d, 2, &tol()).unwrap();
        for dd in 0..=2 {
            let p = basis.projector_up_to(dd).unwrap();
            assert!(projector_deviation(&p).unwrap() < 1e-9);
        }
    }

    #[test]
    fn constant_has_only_level_zero() {
        let d = slice_2_2();
        let basis = degree_basis(&d, 2, &tol()).unwrap();
        let f = RealFunction::constant(d, 3.25).unwrap();
        let dec = DegreeDecomposition::of(&f, &basis).unwrap();
        assert!((dec.components[0].values()[0] - 3.25).abs() < 1e-12);
        for c in &dec.components[1..] {
            assert!(c.norm2() < 1e-12);
        }
    }

    #[test]
    fn centered_dictator_is_pure_degree_one() {
        let d = slice_2_2();
        let basis = degree_basis(&d, 2, &tol()).unwrap();
        let raw = RealFunction::indicator(d.clone(), &[0], &[0]).unwrap();
        let f = raw.sub(&RealFunction::constant(d, 0.5).unwrap()).unwrap();
        let dec = DegreeDecomposition::of(&f, &basis).unwrap();
        assert!(dec.components[0].norm2() < 1e-12, "mean is zero");
        assert!(dec.components[2].norm2() < 1e-10, "no degree-2 part");
        let diff = dec.components[1].sub(&f).unwrap();
        assert!(diff.norm2() < 1e-10);
    }

    #[test]
    fn parseval_and_reconstruction_on_random_functions() {
        let d = slice_2_2();
        let basis = degree_basis(&d, 4, &tol()).unwrap();
        let mut rng = seeded(12);
        for _ in 0..20 {
            let f = RealFunction::random(d.clone(), &mut rng).unwrap();
            let dec = DegreeDecomposition::of(&f, &basis).unwrap();
            let rec = dec.reconstruct();
            assert!(rec.sub(&f).unwrap().norm2() < 1e-9);
            let total: f64 = dec.weights().iter().sum();
            assert!((total - f.norm2().powi(2)).abs() < 1e-9);
        }
    }

    #[test]
    fn max_degree_examples() {
        let t = tol();
        let (d, cap) = max_degree_check(&slice_2_2(), &t).unwrap();
        assert_eq!((d, cap), (2, 2));

        let one_point = Domain::slice(MultiSlice::new(vec![3]).unwrap());
        let (d, cap) = max_degree_check(&one_point, &t).unwrap();
        assert_eq!((d, cap), (0, 0));

        let s222 = Domain::slice(MultiSlice::new(vec![2, 2, 2]).unwrap());
        let (d, cap) = max_degree_check(&s222, &t).unwrap();
        assert_eq!((d, cap), (4, 4));
    }

    #[test]
    fn permutation_commutes_with_degree_projection() {
        let d = slice_2_2();
        let basis = degree_basis(&d, 2, &tol()).unwrap();
        let mut rng = seeded(9);
        let f = RealFunction::random(d.clone(), &mut rng).unwrap();
        let perm = vec![2usize, 0, 3, 1];
        for dd in 0..=2 {
            let a = basis.project_up_to(&f.permuted(&perm).unwrap(), dd).unwrap();
            let b = basis.project_up_to(&f, dd).unwrap().permuted(&perm).unwrap();
            assert!(a.sub(&b).unwrap().norm2() < 1e-9);
        }
    }
}
