//! Dense operators between measured function spaces.
//!
//! A [`LinearMap`] stores the matrix of an operator in point-indicator
//! coordinates together with the source and target measures. Adjoints,
//! eigenvalues and singular values are all taken with respect to the
//! expectation inner products, which concretely means conjugating by
//! `diag(measure)^(1/2)` before handing the matrix to the eigensolver.

use crate::domain::Domain;
use crate::error::Error;
use crate::func::RealFunction;
use crate::Result;
use nalgebra::DMatrix;

#[derive(Debug, Clone)]
pub struct LinearMap {
    source: Domain,
    target: Domain,
    /// `mat[(y, x)]` is the coefficient of `f(x)` in `(T f)(y)`.
    mat: DMatrix<f64>,
    source_measure: Vec<f64>,
    target_measure: Vec<f64>,
}

impl LinearMap {
    pub fn new(source: Domain, target: Domain, mat: DMatrix<f64>) -> Result<Self> {
        let source_measure = source.measure_vec()?;
        let target_measure = target.measure_vec()?;
        if mat.ncols() != source_measure.len() || mat.nrows() != target_measure.len() {
            return Err(Error::Precondition("matrix shape does not match domains".into()));
        }
        Ok(LinearMap {
            source,
            target,
            mat,
            source_measure,
            target_measure,
        })
    }

    pub fn identity(domain: Domain) -> Result<Self> {
        let size = domain.size()?;
        LinearMap::new(domain.clone(), domain, DMatrix::identity(size, size))
    }

    pub fn source(&self) -> &Domain {
        &self.source
    }

    pub fn target(&self) -> &Domain {
        &self.target
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn apply(&self, f: &RealFunction) -> Result<RealFunction> {
        if f.domain() != &self.source {
            return Err(Error::DomainMismatch);
        }
        let v = nalgebra::DVector::from_column_slice(f.values());
        let out = &self.mat * v;
        RealFunction::new(self.target.clone(), out.as_slice().to_vec())
    }

    /// `self` after `other`: `(self . other)(f) = self(other(f))`.
    pub fn compose(&self, other: &LinearMap) -> Result<LinearMap> {
        if other.target != self.source {
            return Err(Error::DomainMismatch);
        }
        LinearMap::new(
            other.source.clone(),
            self.target.clone(),
            &self.mat * &other.mat,
        )
    }

    /// Adjoint with respect to the expectation inner products:
    /// `<T f, g>_target = <f, T* g>_source`.
    pub fn adjoint(&self) -> Result<LinearMap> {
        let rows = self.source_measure.len();
        let cols = self.target_measure.len();
        let mut adj = DMatrix::zeros(rows, cols);
        for x in 0..rows {
            let mx = self.source_measure[x];
            for y in 0..cols {
                let my = self.target_measure[y];
                adj[(x, y)] = if mx > 0.0 { self.mat[(y, x)] * my / mx } else { 0.0 };
            }
        }
        LinearMap::new(self.target.clone(), self.source.clone(), adj)
    }

    pub fn scale(&self, c: f64) -> LinearMap {
        LinearMap {
            source: self.source.clone(),
            target: self.target.clone(),
            mat: &self.mat * c,
            source_measure: self.source_measure.clone(),
            target_measure: self.target_measure.clone(),
        }
    }

    pub fn sub(&self, other: &LinearMap) -> Result<LinearMap> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::DomainMismatch);
        }
        LinearMap::new(self.source.clone(), self.target.clone(), &self.mat - &other.mat)
    }

    /// Max row-sum deviation from stochasticity `(rows sum to one,
    /// entries nonnegative)`.
    pub fn stochastic_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for y in 0..self.mat.nrows() {
            let mut row = 0.0;
            for x in 0..self.mat.ncols() {
                let v = self.mat[(y, x)];
                if v < 0.0 {
                    worst = worst.max(-v);
                }
                row += v;
            }
            worst = worst.max((row - 1.0).abs());
        }
        worst
    }

    /// The matrix conjugated into plain `l2` coordinates:
    /// `B = D_t^(1/2) M D_s^(-1/2)`. Operator norms and singular values of
    /// the measured map equal those of `B`.
    fn whitened(&self) -> DMatrix<f64> {
        let mut b = self.mat.clone();
        for y in 0..b.nrows() {
            let wy = self.target_measure[y].sqrt();
            for x in 0..b.ncols() {
                let wx = self.source_measure[x].sqrt();
                b[(y, x)] = if wx > 0.0 { b[(y, x)] * wy / wx } else { 0.0 };
            }
        }
        b
    }

    /// Singular values in decreasing order, with respect to the measures.
    pub fn singular_values(&self) -> Vec<f64> {
        let b = self.whitened();
        let mut sv: Vec<f64> = b.svd(false, false).singular_values.iter().copied().collect();
        sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
        sv
    }

    pub fn operator_norm(&self) -> f64 {
        self.singular_values().first().copied().unwrap_or(0.0)
    }

    /// Eigenvalues of a self-adjoint endomorphism, decreasing. Fails if the
    /// whitened matrix is visibly asymmetric.
    pub fn symmetric_eigenvalues(&self) -> Result<Vec<f64>> {
        if self.source != self.target {
            return Err(Error::Precondition("eigenvalues need an endomorphism".into()));
        }
        let b = self.whitened();
        let asym = (&b - b.transpose()).abs().max();
        if asym > 1e-8 {
            return Err(Error::Precondition(format!(
                "operator is not self-adjoint (asymmetry {asym:.3e})"
            )));
        }
        let sym = (&b + b.transpose()) * 0.5;
        let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
        Ok(ev)
    }

    /// Largest measured singular value of `self` applied after the given
    /// projector on the source side.
    pub fn restricted_norm(&self, projector: &LinearMap) -> Result<f64> {
        Ok(self.compose(projector)?.operator_norm())
    }
}

/// Deviation of `P` from being an orthogonal projector: max of the
/// idempotence defect and the self-adjointness defect.
pub fn projector_deviation(p: &LinearMap) -> Result<f64> {
    let pp = p.compose(p)?;
    let idem = (&pp.mat - &p.mat).abs().max();
    let adj = p.adjoint()?;
    let sa = (&adj.mat - &p.mat).abs().max();
    Ok(idem.max(sa))
}
