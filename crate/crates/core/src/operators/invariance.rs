//! Numeric checks of the invariance machinery: the low-degree gap bound,
//! the eigenvalue bound behind it, near-commutation of lifting with degree
//! truncation, and the multilinear / simplex gap evaluations.

use crate::coupling::{JointDistribution, JointTable};
use crate::domain::{Domain, ProductSpace};
use crate::error::Error;
use crate::func::junta::SubspaceBasis;
use crate::func::RealFunction;
use crate::linalg::LinearMap;
use crate::Result;
use num_traits::ToPrimitive;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct LowDegGap {
    pub gap: f64,
    pub zeta: f64,
    pub bound: f64,
    pub pass: bool,
}

/// The squared lifting error of a degree-`<= d` function: the expectation
/// under one coupling of `(f(x) - T_C f(y))^2` against `8 sqrt(d zeta)
/// ||f||^2`, where `T_C` comes from a possibly different coupling and
/// `zeta` is the worst per-coordinate disagreement of the two tables.
pub fn verify_lowdeg_invariance(
    f: &RealFunction,
    table_lift: &JointTable,
    table_sample: &JointTable,
    d: usize,
) -> Result<LowDegGap> {
    let lift = table_lift.lift()?;
    let lifted = lift.apply(f)?;
    let product = &table_sample.product;
    let slice_domain = Domain::slice(table_sample.slice.clone());
    if f.domain() != &slice_domain {
        return Err(Error::DomainMismatch);
    }
    let gap = table_sample.expect(|x, y| {
        let fx = f.values()[table_sample.slice.index_of(x).expect("member")];
        let ty = lifted.values()[product.index_of(y).expect("member")];
        (fx - ty) * (fx - ty)
    });
    let zeta = table_lift.zeta_max().max(table_sample.zeta_max());
    let norm_sq = f.norm2().powi(2);
    let bound = 8.0 * (d as f64 * zeta).sqrt() * norm_sq;
    Ok(LowDegGap {
        gap,
        zeta,
        bound,
        pass: gap <= bound + 1e-12,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct LowDegEigen {
    pub max_eigenvalue: f64,
    pub zeta: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Eigenvalues of `(I - S)* (I - S)` restricted to degree `<= d`, where
/// `S = T_{C'}^* T_C`, against `16 d zeta`.
pub fn lowdeg_eigen_check(
    table_lift: &JointTable,
    table_back: &JointTable,
    basis: &SubspaceBasis,
    d: usize,
    slack: f64,
) -> Result<LowDegEigen> {
    let s = table_back.lift_adjoint()?.compose(&table_lift.lift()?)?;
    let id = LinearMap::identity(s.source().clone())?;
    let delta = id.sub(&s)?;
    let quad = delta.adjoint()?.compose(&delta)?;
    let p = basis.projector_up_to(d)?;
    let restricted = p.compose(&quad)?.compose(&p)?;
    let eigen = restricted.symmetric_eigenvalues()?;
    let max_eigenvalue = eigen.first().copied().unwrap_or(0.0);
    let zeta = table_lift.zeta_max().max(table_back.zeta_max());
    let bound = 16.0 * d as f64 * zeta;
    Ok(LowDegEigen {
        max_eigenvalue,
        zeta,
        bound,
        pass: max_eigenvalue <= bound + slack,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct TruncationResidual {
    pub residual: f64,
    pub zeta: f64,
    /// `residual / (d^(7/4) alpha^(-1/4) zeta^(1/4) ||f||)`: the constant
    /// the family is expected to keep bounded.
    pub ratio: f64,
}

/// How far lifting is from commuting with degree truncation:
/// `||(T_C f)^{<= d} - T_C(f^{<= d})||`. The slice basis drives `f^{<=d}`,
/// the product basis drives the truncation of the lifted function.
pub fn verify_truncation_commutes(
    f: &RealFunction,
    table: &JointTable,
    d: usize,
    slice_basis: &SubspaceBasis,
    product_basis: &SubspaceBasis,
) -> Result<TruncationResidual> {
    let lift = table.lift()?;
    let lifted_then_truncated = product_basis.project_up_to(&lift.apply(f)?, d)?;
    let truncated_then_lifted = lift.apply(&slice_basis.project_up_to(f, d)?)?;
    let residual = lifted_then_truncated
        .sub(&truncated_then_lifted)?
        .norm2();
    let zeta = table.zeta_max();
    let alpha = table.slice.balance();
    let norm = f.norm2();
    let denom = (d as f64).powf(1.75) * alpha.powf(-0.25) * zeta.powf(0.25) * norm;
    let ratio = if denom > 1e-300 { residual / denom } else { 0.0 };
    Ok(TruncationResidual { residual, zeta, ratio })
}

/// Lifting cannot produce lower degrees: the mass of `T_C f` strictly
/// below `d` for `f` in the pure degree-`d` space.
pub fn degree_decrease_mass(
    f_pure_d: &RealFunction,
    table: &JointTable,
    d: usize,
    product_basis: &SubspaceBasis,
) -> Result<f64> {
    let lifted = table.lift()?.apply(f_pure_d)?;
    if d == 0 {
        return Ok(0.0);
    }
    Ok(product_basis.project_up_to(&lifted, d - 1)?.norm2())
}

#[derive(Debug, Clone, Serialize)]
pub struct MultilinearGap {
    pub slice_side: f64,
    pub product_side: f64,
    pub gap: f64,
    /// Product of the 2-norms of the inputs, for the epsilon-form record.
    pub norm_product: f64,
}

/// Both sides of the invariance statement for a statistics-uniform joint
/// law: the expectation of the product of the `f_i` under the law, against
/// the expectation of the product of the lifted functions under the
/// product version. `lifted[i]` must be `T_{C_i} f_i` on the component
/// product space.
pub fn multilinear_gap(
    mu: &JointDistribution,
    fs: &[RealFunction],
    lifted: &[RealFunction],
    max_points: usize,
) -> Result<MultilinearGap> {
    let al = mu.alphabet().clone();
    let r = al.arity();
    if r > 3 {
        return Err(Error::Precondition("exact mode handles arity at most three".into()));
    }
    if fs.len() != r || lifted.len() != r {
        return Err(Error::Precondition("one function per component".into()));
    }
    let combined = mu.combined_slice()?;
    let slice_words = combined.words()?;
    let comp_slices: Vec<_> = (0..r)
        .map(|i| mu.component_slice(i))
        .collect::<Result<Vec<_>>>()?;
    let comp_products: Vec<ProductSpace> = comp_slices
        .iter()
        .map(|s| ProductSpace::from_counts(s.counts()))
        .collect::<Result<Vec<_>>>()?;

    // slice side: uniform over the combined slice
    let mut slice_side = 0.0;
    for w in &slice_words {
        let mut prod = 1.0;
        for i in 0..r {
            let xi = comp_slices[i].index_of(&al.project(w, i))?;
            prod *= fs[i].values()[xi];
        }
        slice_side += prod;
    }
    slice_side /= slice_words.len() as f64;

    // product side: iid coordinates over the support symbols
    let marginals = mu.atom_marginals();
    let support: Vec<u8> = (0..al.size() as u8)
        .filter(|&c| !marginals[c as usize].to_f64().unwrap_or(0.0).is_nan()
            && marginals[c as usize].to_f64().unwrap_or(0.0) > 0.0)
        .collect();
    let n = mu.n();
    let total = (support.len() as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    if total as usize > max_points {
        return Err(Error::ScaleLimit { size: total as usize, cap: max_points });
    }
    let weights: Vec<f64> = support
        .iter()
        .map(|&c| marginals[c as usize].to_f64().unwrap_or(0.0))
        .collect();
    let mut product_side = 0.0;
    let mut digits = vec![0usize; n];
    loop {
        let word = crate::domain::Word(digits.iter().map(|&d| support[d]).collect());
        let mut weight = 1.0;
        for &d in &digits {
            weight *= weights[d];
        }
        let mut prod = 1.0;
        for i in 0..r {
            let yi = comp_products[i].index_of(&al.project(&word, i))?;
            prod *= lifted[i].values()[yi];
        }
        product_side += weight * prod;
        // advance
        let mut pos = n;
        for i in (0..n).rev() {
            if digits[i] + 1 < support.len() {
                digits[i] += 1;
                for dj in digits.iter_mut().skip(i + 1) {
                    *dj = 0;
                }
                pos = i;
                break;
            }
        }
        if pos == n {
            break;
        }
    }

    let norm_product: f64 = fs.iter().map(|f| f.norm2()).product();
    Ok(MultilinearGap {
        slice_side,
        product_side,
        gap: (slice_side - product_side).abs(),
        norm_product,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SimplexGap {
    pub slice_side: f64,
    pub product_side: f64,
    pub gap: f64,
    pub max_component_gap: f64,
    pub bound: f64,
    pub pass: bool,
}

/// The label-assignment form: encode each label function through the
/// simplex, lift componentwise, and evaluate the multilinear extension of
/// the predicate on the product side.
pub fn simplex_gap(
    mu: &JointDistribution,
    labels: &[Vec<u8>],
    lifts: &[LinearMap],
    predicate: &dyn Fn(&[u8]) -> f64,
    max_points: usize,
) -> Result<SimplexGap> {
    let al = mu.alphabet().clone();
    let r = al.arity();
    let comp_slices: Vec<_> = (0..r)
        .map(|i| mu.component_slice(i))
        .collect::<Result<Vec<_>>>()?;
    // indicator components per label value, lifted
    let mut indicators: Vec<Vec<RealFunction>> = Vec::with_capacity(r);
    let mut lifted: Vec<Vec<RealFunction>> = Vec::with_capacity(r);
    for i in 0..r {
        let m_i = al.component_sizes()[i];
        let domain = Domain::slice(comp_slices[i].clone());
        let mut comps = Vec::with_capacity(m_i);
        for sym in 0..m_i as u8 {
            let values: Vec<f64> = labels[i]
                .iter()
                .map(|&l| if l == sym { 1.0 } else { 0.0 })
                .collect();
            comps.push(RealFunction::new(domain.clone(), values)?);
        }
        lifted.push(
            comps
                .iter()
                .map(|c| lifts[i].apply(c))
                .collect::<Result<Vec<_>>>()?,
        );
        indicators.push(comps);
    }

    // slice side: P evaluated on the labels directly
    let combined = mu.combined_slice()?;
    let slice_words = combined.words()?;
    let mut slice_side = 0.0;
    for w in &slice_words {
        let mut tuple = vec![0u8; r];
        for i in 0..r {
            let xi = comp_slices[i].index_of(&al.project(w, i))?;
            tuple[i] = labels[i][xi];
        }
        slice_side += predicate(&tuple);
    }
    slice_side /= slice_words.len() as f64;

    // product side: multilinear extension over the lifted simplex vectors
    let marginals = mu.atom_marginals();
    let support: Vec<u8> = (0..al.size() as u8)
        .filter(|&c| marginals[c as usize].to_f64().unwrap_or(0.0) > 0.0)
        .collect();
    let n = mu.n();
    let total = (support.len() as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    if total as usize > max_points {
        return Err(Error::ScaleLimit { size: total as usize, cap: max_points });
    }
    let weights: Vec<f64> = support
        .iter()
        .map(|&c| marginals[c as usize].to_f64().unwrap_or(0.0))
        .collect();
    let comp_products: Vec<ProductSpace> = comp_slices
        .iter()
        .map(|s| ProductSpace::from_counts(s.counts()))
        .collect::<Result<Vec<_>>>()?;
    let sizes: Vec<usize> = al.component_sizes().to_vec();

    let mut product_side = 0.0;
    let mut component_sums = vec![0.0f64; sizes.iter().product::<usize>()];
    let mut component_slice_sums = vec![0.0f64; component_sums.len()];
    let mut digits = vec![0usize; n];
    loop {
        let word = crate::domain::Word(digits.iter().map(|&d| support[d]).collect());
        let mut weight = 1.0;
        for &d in &digits {
            weight *= weights[d];
        }
        // simplex vectors at this point
        let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(r);
        for i in 0..r {
            let yi = comp_products[i].index_of(&al.project(&word, i))?;
            vectors.push(lifted[i].iter().map(|g| g.values()[yi]).collect());
        }
        // multilinear extension: sum over symbol tuples
        let mut tilde = 0.0;
        let mut tuple = vec![0u8; r];
        loop {
            let mut coeff = 1.0;
            for i in 0..r {
                coeff *= vectors[i][tuple[i] as usize];
            }
            if coeff != 0.0 {
                tilde += predicate(&tuple) * coeff;
            }
            // per-tuple bookkeeping for the componentwise gap
            let mut code = 0usize;
            for i in 0..r {
                code = code * sizes[i] + tuple[i] as usize;
            }
            component_sums[code] += weight * coeff;
            // advance the tuple
            let mut pos = r;
            for i in (0..r).rev() {
                if (tuple[i] as usize) + 1 < sizes[i] {
                    tuple[i] += 1;
                    for tj in tuple.iter_mut().skip(i + 1) {
                        *tj = 0;
                    }
                    pos = i;
                    break;
                }
            }
            if pos == r {
                break;
            }
        }
        product_side += weight * tilde;
        let mut pos = n;
        for i in (0..n).rev() {
            if digits[i] + 1 < support.len() {
                digits[i] += 1;
                for dj in digits.iter_mut().skip(i + 1) {
                    *dj = 0;
                }
                pos = i;
                break;
            }
        }
        if pos == n {
            break;
        }
    }

    // slice-side componentwise products for the same tuples
    for w in &slice_words {
        let mut code = 0usize;
        for i in 0..r {
            let xi = comp_slices[i].index_of(&al.project(w, i))?;
            code = code * sizes[i] + labels[i][xi] as usize;
        }
        component_slice_sums[code] += 1.0 / slice_words.len() as f64;
    }
    let max_component_gap = component_sums
        .iter()
        .zip(&component_slice_sums)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    let m_product: f64 = sizes.iter().product::<usize>() as f64;
    let bound = m_product * max_component_gap;
    let gap = (slice_side - product_side).abs();
    Ok(SimplexGap {
        slice_side,
        product_side,
        gap,
        max_component_gap,
        bound,
        pass: gap <= bound + 1e-9,
    })
}
