//! Property tests for the structural invariants: ranking is a bijection,
//! decompositions reconstruct and satisfy Parseval, and component
//! orthogonality holds on products.

use mslice_core::config::Tolerances;
use mslice_core::domain::{Domain, MultiSlice, ProductSpace, Word};
use mslice_core::func::efron_stein::EfronStein;
use mslice_core::func::junta::{degree_basis, DegreeDecomposition};
use mslice_core::func::RealFunction;
use num_bigint::BigUint;
use proptest::prelude::*;

fn arb_counts() -> impl Strategy<Value = Vec<usize>> {
    // up to three symbols, total length at most eight, positive counts
    prop::collection::vec(1usize..=4, 1..=3).prop_filter("length cap", |k| {
        k.iter().sum::<usize>() <= 8
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_unrank_is_a_bijection(k in arb_counts(), salt in 0usize..1000) {
        let slice = MultiSlice::new(k).unwrap();
        let size = slice.size_usize().unwrap();
        let index = salt % size;
        let w = slice.unrank(&BigUint::from(index)).unwrap();
        prop_assert!(slice.contains(&w));
        prop_assert_eq!(slice.index_of(&w).unwrap(), index);
    }

    #[test]
    fn words_enumerate_in_rank_order(k in arb_counts()) {
        let slice = MultiSlice::new(k).unwrap();
        let words = slice.words().unwrap();
        for (i, w) in words.iter().enumerate() {
            prop_assert_eq!(slice.index_of(w).unwrap(), i);
        }
        // lexicographic order is strict
        for pair in words.windows(2) {
            prop_assert!(pair[0] < pair[1]);
        }
    }

    #[test]
    fn degree_decomposition_reconstructs(values in prop::collection::vec(-1.0f64..1.0, 6)) {
        let tol = Tolerances::default();
        let d = Domain::slice(MultiSlice::new(vec![2, 2]).unwrap());
        let basis = degree_basis(&d, 4, &tol).unwrap();
        let f = RealFunction::new(d, values).unwrap();
        let dec = DegreeDecomposition::of(&f, &basis).unwrap();
        prop_assert!(dec.reconstruct().sub(&f).unwrap().norm2() < 1e-9);
        let total: f64 = dec.weights().iter().sum();
        prop_assert!((total - f.norm2().powi(2)).abs() < 1e-9);
    }

    #[test]
    fn efron_stein_is_orthogonal(values in prop::collection::vec(-1.0f64..1.0, 8)) {
        let d = Domain::product(ProductSpace::new(3, vec![0.5, 0.5]).unwrap());
        let f = RealFunction::new(d, values).unwrap();
        let es = EfronStein::of(&f, 1 << 20).unwrap();
        prop_assert!(es.reconstruct().sub(&f).unwrap().norm2() < 1e-10);
        for s in 0..8usize {
            for t in 0..s {
                prop_assert!(es.components[s].inner(&es.components[t]).unwrap().abs() < 1e-10);
            }
        }
    }

    #[test]
    fn digit_serialization_round_trips(letters in prop::collection::vec(0u8..9, 0..12)) {
        let w = Word(letters);
        prop_assert_eq!(Word::from_digits(&w.to_digits()).unwrap(), w);
    }
}
