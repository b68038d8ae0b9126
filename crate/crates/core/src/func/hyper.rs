//! Hypercontractivity probe: compares `||f||_q` against `||f||_2` for
//! low-degree functions. On product spaces the ratio is asserted against
//! the explicit bound `(10 q / alpha)^d`; on slices the constant is not
//! pinned down, so the probe only records the ratio.

use crate::domain::Domain;
use crate::error::Error;
use crate::func::RealFunction;
use crate::Result;

#[derive(Debug, Clone)]
pub struct HyperProbe {
    pub q: u32,
    pub degree: usize,
    pub norm_q: f64,
    pub ratio: f64,
    /// Product-space bound `(10q/alpha)^d`, when applicable.
    pub bound: Option<f64>,
}

/// Probe a function already projected to degree `<= degree`. Even `q` only.
pub fn hypercontractivity_probe(
    f: &RealFunction,
    q: u32,
    degree: usize,
) -> Result<HyperProbe> {
    if q < 2 || !q.is_multiple_of(2) {
        return Err(Error::Precondition("q must be an even integer >= 2".into()));
    }
    let nq = f.norm_q(q);
    let n2 = f.norm2();
    // a zero function gives ratio 1 by convention
    let ratio = if n2 < 1e-300 { 1.0 } else { nq / n2 };
    let bound = match f.domain() {
        Domain::Product { .. } => {
            let p = f.domain().as_product()?;
            let alpha = p.min_positive_weight();
            let b = (10.0 * q as f64 / alpha).powi(degree as i32);
            assert!(
                ratio <= b + 1e-9,
                "product hypercontractivity bound failed: ratio {ratio} > {b}"
            );
            Some(b)
        }
        Domain::Slice { .. } => None,
    };
    Ok(HyperProbe {
        q,
        degree,
        norm_q: nq,
        ratio,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Tolerances;
    use crate::domain::{MultiSlice, ProductSpace};
    use crate::func::junta::{degree_basis, DegreeDecomposition};
    use crate::rngutil::seeded;

    #[test]
    fn constant_has_ratio_one() {
        let d = Domain::product(ProductSpace::new(2, vec![0.5, 0.5]).unwrap());
        let f = RealFunction::constant(d, 2.0).unwrap();
        let probe = hypercontractivity_probe(&f, 4, 0).unwrap();
        assert!((probe.ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn centered_dictator_on_cube() {
        let d = Domain::product(ProductSpace::new(4, vec![0.5, 0.5]).unwrap());
        let f = RealFunction::indicator(d.clone(), &[0], &[0])
            .unwrap()
            .sub(&RealFunction::constant(d, 0.5).unwrap())
            .unwrap();
        let probe = hypercontractivity_probe(&f, 4, 1).unwrap();
        assert!(probe.ratio <= 40.0 / 0.5 + 1e-9);
        assert!(probe.bound.is_some());
        // for a +-1/2 valued function all norms agree
        assert!((probe.ratio - 1.0).abs() < 1e-9);
    }

    #[test]
    fn degree_one_slice_ratio_is_recorded() {
        let s = Domain::slice(MultiSlice::new(vec![4, 4]).unwrap());
        let tol = Tolerances::default();
        let basis = degree_basis(&s, 1, &tol).unwrap();
        let mut rng = seeded(17);
        let f = RealFunction::random(s, &mut rng).unwrap();
        let dec = DegreeDecomposition::of(&f, &basis).unwrap();
        let f1 = dec.component(1).unwrap();
        let probe = hypercontractivity_probe(f1, 4, 1).unwrap();
        assert!(probe.ratio.is_finite());
        assert!(probe.bound.is_none());

        let zero = RealFunction::constant(f1.domain().clone(), 0.0).unwrap();
        let probe = hypercontractivity_probe(&zero, 4, 1).unwrap();
        assert_eq!(probe.ratio, 1.0);
    }
}
