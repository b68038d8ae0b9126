//! Spectral diagnostics: single-coordinate spectral gaps, per-degree
//! contraction profiles, annihilation profiles, and tensor-power
//! contraction on product spaces.

use crate::domain::{Domain, ProductSpace};
use crate::error::Error;
use crate::func::junta::SubspaceBasis;
use crate::linalg::LinearMap;
use crate::stats::linear_fit;
use crate::Result;
use nalgebra::DMatrix;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct GapReport {
    pub lambda2: f64,
    pub alpha: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Second singular value of a single-coordinate kernel against the
/// `1 - alpha^2/2` bound. `atoms[a][b]` is the probability of the symbol
/// pair `(a, b)`; both marginals must agree.
pub fn spectral_gap_check(atoms: &[Vec<f64>], slack: f64) -> Result<GapReport> {
    let m = atoms.len();
    let row: Vec<f64> = (0..m).map(|a| atoms[a].iter().sum()).collect();
    let col: Vec<f64> = (0..m).map(|b| (0..m).map(|a| atoms[a][b]).sum()).collect();
    for (a, (r, c)) in row.iter().zip(&col).enumerate() {
        if (r - c).abs() > 1e-12 {
            return Err(Error::Precondition(format!(
                "marginals differ at symbol {a}: {r} vs {c}"
            )));
        }
    }
    let total: f64 = row.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::Precondition("atoms must sum to one".into()));
    }
    let nu = row;
    let alpha = atoms
        .iter()
        .flatten()
        .copied()
        .filter(|&p| p > 0.0)
        .fold(f64::INFINITY, f64::min);
    // T f(y) = E[f(x) | y]
    let space = Domain::product(ProductSpace::new(1, nu.clone())?);
    let mut mat = DMatrix::zeros(m, m);
    for y in 0..m {
        for x in 0..m {
            if nu[y] > 0.0 {
                mat[(y, x)] = atoms[x][y] / nu[y];
            }
        }
    }
    let t = LinearMap::new(space.clone(), space, mat)?;
    let sv = t.singular_values();
    let lambda2 = sv.get(1).copied().unwrap_or(0.0);
    let bound = 1.0 - alpha * alpha / 2.0;
    Ok(GapReport {
        lambda2,
        alpha,
        bound,
        pass: lambda2 <= bound + slack,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ContractionProfile {
    /// `sigma[d]` is the largest measured singular value of the operator
    /// restricted to the pure degree-`d` space.
    pub sigma: Vec<f64>,
    /// Decay rate from regressing `ln sigma_d` on `-d` over positive
    /// entries.
    pub delta_hat: f64,
    pub strictly_decreasing: bool,
}

/// Per-degree top singular values of an endomorphism of slice functions.
pub fn contraction_profile(
    t: &LinearMap,
    basis: &SubspaceBasis,
    dmax: usize,
) -> Result<ContractionProfile> {
    let mut sigma = Vec::with_capacity(dmax + 1);
    for d in 0..=dmax {
        let p = pure_degree_projector(basis, d)?;
        sigma.push(t.restricted_norm(&p)?);
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (d, &s) in sigma.iter().enumerate() {
        if s > 1e-12 {
            xs.push(d as f64);
            ys.push(s.ln());
        }
    }
    let (slope, _) = linear_fit(&xs, &ys);
    let delta_hat = (-slope).exp() - 1.0;
    let strictly_decreasing = sigma.windows(2).all(|w| w[0] > w[1] + 1e-12);
    Ok(ContractionProfile {
        sigma,
        delta_hat,
        strictly_decreasing,
    })
}

/// Projector onto the pure degree-`d` space of a degree basis.
pub fn pure_degree_projector(basis: &SubspaceBasis, d: usize) -> Result<LinearMap> {
    let up = basis.projector_up_to(d)?;
    if d == 0 {
        return Ok(up);
    }
    let low = basis.projector_up_to(d - 1)?;
    up.sub(&low)
}

/// Largest measured singular value of the operator restricted to
/// functions of degree strictly above `d` (the annihilation profile for a
/// pair law; equals the best possible `|E[f(x) g(y)]|` over unit-norm
/// high-degree `f` and unit-norm `g`).
pub fn annihilation_profile(
    t: &LinearMap,
    basis: &SubspaceBasis,
    dmax: usize,
) -> Result<Vec<f64>> {
    let id = LinearMap::identity(basis.domain.clone())?;
    let mut out = Vec::with_capacity(dmax + 1);
    for d in 0..=dmax {
        let high = id.sub(&basis.projector_up_to(d)?)?;
        out.push(t.restricted_norm(&high)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct ProductContraction {
    pub sigma: f64,
    /// `lambda_2^(d/2)`, the spectral route.
    pub bound_spectral: f64,
    /// `(1 - alpha^2/2)^(d/2)`, the atom-floor route.
    pub bound_alpha: f64,
    pub pass: bool,
}

/// Contraction of a tensor-power kernel on components of Efron-Stein size
/// at least `d`. `atoms` is the single-coordinate pair law (equal
/// marginals); the product space has `n` coordinates.
pub fn product_contraction_check(
    atoms: &[Vec<f64>],
    n: usize,
    d: usize,
    basis: &SubspaceBasis,
    slack: f64,
) -> Result<ProductContraction> {
    let gap = spectral_gap_check(atoms, slack)?;
    let m = atoms.len();
    let nu: Vec<f64> = (0..m).map(|a| atoms[a].iter().sum()).collect();
    let space = Domain::product(ProductSpace::new(n, nu.clone())?);
    if basis.domain != space {
        return Err(Error::DomainMismatch);
    }
    // tensor kernel
    let size = space.size()?;
    let words = space.words()?;
    let mut single = vec![vec![0.0f64; m]; m];
    for y in 0..m {
        for x in 0..m {
            if nu[y] > 0.0 {
                single[y][x] = atoms[x][y] / nu[y];
            }
        }
    }
    let mut mat = DMatrix::zeros(size, size);
    for (yi, yw) in words.iter().enumerate() {
        for (xi, xw) in words.iter().enumerate() {
            let mut p = 1.0;
            for i in 0..n {
                p *= single[yw.0[i] as usize][xw.0[i] as usize];
                if p == 0.0 {
                    break;
                }
            }
            mat[(yi, xi)] = p;
        }
    }
    let t = LinearMap::new(space.clone(), space.clone(), mat)?;
    let sigma = if d == 0 {
        t.operator_norm()
    } else {
        let id = LinearMap::identity(space)?;
        let high = id.sub(&basis.projector_up_to(d - 1)?)?;
        t.restricted_norm(&high)?
    };
    let bound_spectral = gap.lambda2.powf(d as f64 / 2.0);
    let bound_alpha = gap.bound.powf(d as f64 / 2.0);
    Ok(ProductContraction {
        sigma,
        bound_spectral,
        bound_alpha,
        pass: sigma <= bound_spectral + slack && sigma <= bound_alpha + slack,
    })
}

/// Eigenvalues of a self-adjoint endomorphism together with the degree
/// profile of its eigenvectors.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<f64>,
    /// For each eigenvector, its squared-norm mass per degree level.
    pub degree_profile: Vec<Vec<f64>>,
    pub trace: f64,
    pub trace_from_eigenvalues: f64,
}

pub fn spectrum_report(t: &LinearMap, basis: &SubspaceBasis) -> Result<SpectrumReport> {
    let eigenvalues = t.symmetric_eigenvalues()?;
    let trace: f64 = (0..t.matrix().nrows()).map(|i| t.matrix()[(i, i)]).sum();
    let trace_from_eigenvalues: f64 = eigenvalues.iter().sum();
    // degree profile via projectors applied to an eigenbasis is costly;
    // report the profile of the operator itself instead: mass of each
    // pure-degree projector under the operator's image
    let dmax = basis.levels.iter().copied().max().unwrap_or(0);
    let mut degree_profile = Vec::new();
    for d in 0..=dmax {
        let p = pure_degree_projector(basis, d)?;
        let tp = t.compose(&p)?;
        degree_profile.push(vec![tp.operator_norm()]);
    }
    Ok(SpectrumReport {
        eigenvalues,
        degree_profile,
        trace,
        trace_from_eigenvalues,
    })
}
