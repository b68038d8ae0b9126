//! Exact counting primitives: factorials, multinomials, base-2 entropy.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub fn factorial(n: usize) -> BigUint {
    let mut acc = BigUint::one();
    for i in 2..=n {
        acc *= BigUint::from(i);
    }
    acc
}

/// Multinomial coefficient `n! / (parts[0]! ... parts[r-1]!)`. Parts must
/// sum to `n`; zero parts are fine (their factorial is one).
pub fn multinomial(n: usize, parts: &[usize]) -> BigUint {
    assert_eq!(parts.iter().sum::<usize>(), n, "multinomial parts must sum to n");
    let mut num = factorial(n);
    for &p in parts {
        num /= factorial(p);
    }
    num
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    multinomial(n, &[k, n - k])
}

/// Base-2 entropy of a probability vector; zero entries contribute zero.
pub fn entropy2(p: &[f64]) -> f64 {
    p.iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.log2())
        .sum()
}

/// Natural log of a positive big integer, for comparisons against
/// entropy-style bounds that overflow f64.
pub fn ln_biguint(v: &BigUint) -> f64 {
    if let Some(f) = v.to_f64() {
        if f.is_finite() && f > 0.0 {
            return f.ln();
        }
    }
    let bits = v.bits();
    let shift = bits.saturating_sub(53);
    let top = (v >> shift).to_f64().expect("53-bit mantissa fits");
    top.ln() + (shift as f64) * std::f64::consts::LN_2
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().expect("rational fits in f64")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multinomial_values() {
        assert_eq!(multinomial(4, &[2, 2]), BigUint::from(6u32));
        assert_eq!(multinomial(6, &[2, 2, 2]), BigUint::from(90u32));
        assert_eq!(multinomial(3, &[3]), BigUint::from(1u32));
        assert_eq!(multinomial(5, &[0, 5]), BigUint::from(1u32));
    }

    #[test]
    fn pascal_recurrence() {
        // slice_size(n,k) = sum_j slice_size(n-1, k with k_j decremented)
        for (n, k) in [(6usize, vec![3usize, 2, 1]), (5, vec![2, 3]), (7, vec![2, 2, 3])] {
            let total = multinomial(n, &k);
            let mut sum = BigUint::zero();
            for j in 0..k.len() {
                if k[j] == 0 {
                    continue;
                }
                let mut kk = k.clone();
                kk[j] -= 1;
                sum += multinomial(n - 1, &kk);
            }
            assert_eq!(total, sum);
        }
    }

    #[test]
    fn ln_of_large_value() {
        let v = factorial(100);
        let approx = ln_biguint(&v);
        // Stirling: ln(100!) ~ 363.739
        assert!((approx - 363.739).abs() < 0.01);
    }

    #[test]
    fn entropy_of_fair_coin_is_one() {
        assert!((entropy2(&[0.5, 0.5]) - 1.0).abs() < 1e-12);
        assert!(entropy2(&[1.0, 0.0]).abs() < 1e-12);
    }
}
