//! Noise operators: the cyclic-shift smoothing on multi-slices and the
//! standard product-space noise.

use crate::domain::{Domain, MultiSlice, ProductSpace, Word};
use crate::error::Error;
use crate::linalg::LinearMap;
use crate::rngutil::Rng;
use crate::Result;
use nalgebra::DMatrix;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::Rng as _;

/// Resolve `beta * n` to an integer, rejecting non-integral requests.
pub fn noise_beta_n(n: usize, beta: f64) -> Result<usize> {
    let raw = beta * n as f64;
    let rounded = raw.round();
    if (raw - rounded).abs() > 1e-9 {
        return Err(Error::Precondition(format!(
            "beta*n = {raw} is not an integer; nearest feasible beta is {}",
            rounded / n as f64
        )));
    }
    Ok(rounded as usize)
}

/// The cyclic successor map over the symbols that actually occur in the
/// slice; absent symbols are skipped so the shift stays inside the slice.
fn support_cycle(counts: &[usize]) -> Vec<Option<u8>> {
    let support: Vec<usize> = (0..counts.len()).filter(|&j| counts[j] > 0).collect();
    let mut next = vec![None; counts.len()];
    for (pos, &j) in support.iter().enumerate() {
        next[j] = Some(support[(pos + 1) % support.len()] as u8);
    }
    next
}

/// Slice noise: in every occupied symbol class pick `beta_n` coordinates
/// and shift their symbol cyclically to the next occupied one. Stays
/// inside the slice, and is doubly stochastic for the uniform measure.
pub fn noise_multislice(slice: &MultiSlice, beta_n: usize) -> Result<LinearMap> {
    let min_count = slice
        .counts()
        .iter()
        .copied()
        .filter(|&k| k > 0)
        .min()
        .unwrap_or(0);
    if beta_n > min_count {
        return Err(Error::Precondition(format!(
            "shift budget {beta_n} exceeds the smallest occupied class {min_count}"
        )));
    }
    let domain = Domain::slice(slice.clone());
    let size = slice.size_usize()?;
    let next = support_cycle(slice.counts());
    let occupied = next.iter().filter(|n| n.is_some()).count();
    if occupied <= 1 || beta_n == 0 {
        return LinearMap::identity(domain);
    }
    let words = slice.words()?;
    let mut denom = BigUint::from(1u32);
    for &kj in slice.counts() {
        if kj > 0 {
            denom *= crate::domain::counting::binomial(kj, beta_n);
        }
    }
    let p = 1.0 / denom.to_f64().expect("denominator fits f64");
    let mut mat = DMatrix::zeros(size, size);
    for (xi, x) in words.iter().enumerate() {
        for (yi, y) in words.iter().enumerate() {
            if shift_consistent(x, y, &next, beta_n) {
                // rows are indexed by the input point here; the operator
                // averages f over outputs, so mat[(x, y)] = P(y | x)
                mat[(xi, yi)] = p;
            }
        }
    }
    LinearMap::new(domain.clone(), domain, mat)
}

pub(crate) fn shift_consistent_words(x: &Word, y: &Word, m: usize, beta_n: usize) -> bool {
    let mut counts = vec![0usize; m];
    for &a in &x.0 {
        counts[a as usize] += 1;
    }
    let next = support_cycle(&counts);
    shift_consistent(x, y, &next, beta_n)
}

fn shift_consistent(x: &Word, y: &Word, next: &[Option<u8>], beta_n: usize) -> bool {
    let mut flips = vec![0usize; next.len()];
    for (&a, &b) in x.0.iter().zip(&y.0) {
        if a == b {
            continue;
        }
        match next[a as usize] {
            Some(succ) if succ == b => flips[a as usize] += 1,
            _ => return false,
        }
    }
    next.iter()
        .enumerate()
        .all(|(j, n)| n.is_none() || flips[j] == beta_n)
}

/// One sample from the slice noise kernel, for slices too large to
/// enumerate.
pub fn sample_slice_noise(slice: &MultiSlice, beta_n: usize, x: &Word, rng: &mut Rng) -> Word {
    let mut y = x.0.clone();
    let next = support_cycle(slice.counts());
    let occupied = next.iter().filter(|n| n.is_some()).count();
    if occupied <= 1 || beta_n == 0 {
        return Word(y);
    }
    for sym in 0..slice.m() {
        let Some(succ) = next[sym] else { continue };
        let class: Vec<usize> = (0..x.len()).filter(|&i| x.0[i] as usize == sym).collect();
        if class.is_empty() {
            continue;
        }
        let mut idx: Vec<usize> = (0..class.len()).collect();
        for i in (1..idx.len()).rev() {
            let j = rng.gen_range(0..=i);
            idx.swap(i, j);
        }
        for &t in idx.iter().take(beta_n) {
            y[class[t]] = succ;
        }
    }
    Word(y)
}

/// Standard product noise: each coordinate is kept with probability `rho`
/// and resampled from its marginal otherwise.
pub fn noise_product(p: &ProductSpace, rho: f64) -> Result<LinearMap> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::Precondition("rho must lie in [0, 1]".into()));
    }
    let domain = Domain::product(p.clone());
    let size = p.size_usize()?;
    let words = domain.words()?;
    let mut mat = DMatrix::zeros(size, size);
    for (xi, x) in words.iter().enumerate() {
        for (yi, y) in words.iter().enumerate() {
            let mut prob = 1.0;
            for i in 0..p.n() {
                let keep = if x.0[i] == y.0[i] { rho } else { 0.0 };
                prob *= keep + (1.0 - rho) * p.weights()[y.0[i] as usize];
                if prob == 0.0 {
                    break;
                }
            }
            mat[(xi, yi)] = prob;
        }
    }
    LinearMap::new(domain.clone(), domain, mat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Tolerances;
    use crate::func::efron_stein::EfronStein;
    use crate::func::RealFunction;
    use crate::rngutil::seeded;

    #[test]
    fn beta_resolution() {
        assert_eq!(noise_beta_n(4, 0.25).unwrap(), 1);
        assert!(noise_beta_n(4, 0.3).is_err());
    }

    #[test]
    fn zero_shift_is_identity() {
        let s = MultiSlice::new(vec![2, 2]).unwrap();
        let t = noise_multislice(&s, 0).unwrap();
        let dev = (t.matrix() - DMatrix::<f64>::identity(6, 6)).abs().max();
        assert!(dev < 1e-15);
    }

    #[test]
    fn slice_noise_is_doubly_stochastic() {
        let s = MultiSlice::new(vec![2, 2]).unwrap();
        let t = noise_multislice(&s, 1).unwrap();
        assert!(t.stochastic_deviation() < 1e-12);
        // column sums all equal (uniform stationary law)
        let mat = t.matrix();
        for col in 0..6 {
            let sum: f64 = (0..6).map(|row| mat[(row, col)]).sum();
            assert!((sum - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn slice_noise_commutes_with_permutations() {
        let s = MultiSlice::new(vec![2, 2]).unwrap();
        let t = noise_multislice(&s, 1).unwrap();
        let d = Domain::slice(s);
        let mut rng = seeded(10);
        let mut perm = vec![0usize, 1, 2, 3];
        loop {
            for _ in 0..2 {
                let f = RealFunction::random(d.clone(), &mut rng).unwrap();
                let a = t.apply(&f.permuted(&perm).unwrap()).unwrap();
                let b = t.apply(&f).unwrap().permuted(&perm).unwrap();
                assert!(a.sub(&b).unwrap().norm2() < 1e-12);
            }
            // next permutation
            let n = perm.len();
            let mut i = n - 1;
            while i > 0 && perm[i - 1] >= perm[i] {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            let mut j = n - 1;
            while perm[j] <= perm[i - 1] {
                j -= 1;
            }
            perm.swap(i - 1, j);
            perm[i..].reverse();
        }
    }

    #[test]
    fn sampler_matches_kernel() {
        let s = MultiSlice::new(vec![2, 2]).unwrap();
        let t = noise_multislice(&s, 1).unwrap();
        let x = s.word_at(0).unwrap();
        let mut rng = seeded(11);
        let trials = 40_000;
        let mut counts = vec![0u64; 6];
        for _ in 0..trials {
            let y = sample_slice_noise(&s, 1, &x, &mut rng);
            counts[s.index_of(&y).unwrap()] += 1;
        }
        for yi in 0..6 {
            let expect = t.matrix()[(0, yi)];
            let got = counts[yi] as f64 / trials as f64;
            assert!((got - expect).abs() < 0.01, "cell {yi}: {got} vs {expect}");
        }
    }

    #[test]
    fn product_noise_limits() {
        let p = ProductSpace::new(2, vec![0.5, 0.5]).unwrap();
        let id = noise_product(&p, 1.0).unwrap();
        assert!((id.matrix() - DMatrix::<f64>::identity(4, 4)).abs().max() < 1e-12);
        let avg = noise_product(&p, 0.0).unwrap();
        for r in 0..4 {
            for c in 0..4 {
                assert!((avg.matrix()[(r, c)] - 0.25).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn product_noise_scales_efron_stein_components() {
        let p = ProductSpace::new(3, vec![0.5, 0.5]).unwrap();
        let d = Domain::product(p.clone());
        let rho = 0.6;
        let t = noise_product(&p, rho).unwrap();
        let mut rng = seeded(12);
        let f = RealFunction::random(d, &mut rng).unwrap();
        let es = EfronStein::of(&f, Tolerances::default().degree_cap).unwrap();
        for mask in 0..8usize {
            let comp = es.component(mask);
            let expect = comp.scale(rho.powi(mask.count_ones() as i32));
            let got = t.apply(comp).unwrap();
            assert!(
                got.sub(&expect).unwrap().norm2() < 1e-10,
                "eigenvalue failed on mask {mask}"
            );
        }
    }
}
