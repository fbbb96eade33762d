//! Checks that tie several modules together.

use num_bigint::BigInt;
use proptest::prelude::*;
use psialg::geometry::{alpha_from_config, random_config, verify_vanishing};
use psialg::series::{curve_module_series, lee_series, lee_series_restricted};
use psialg::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn degree(n: usize, max_total: u32) -> impl Strategy<Value = DegreeVector> {
    prop::collection::vec(0..=max_total, n)
        .prop_filter("total bound", move |v| v.iter().sum::<u32>() <= max_total)
        .prop_map(DegreeVector)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn brute_force_matches_lee_a4(a in degree(4, 5)) {
        let spec: QPresentation = build_an(&(), 4, PivotScheme::cyclic(4)).unwrap();
        let lee = lee_series(4, Bound::Total(5)).unwrap();
        prop_assert_eq!(BigInt::from(graded_dim(&spec, &a)), lee.coefficient(&a));
    }

    #[test]
    fn pivot_choice_does_not_change_hilbert_function(a in degree(5, 4)) {
        let p = PrimeModulus::default();
        let c: FpPresentation = build_an(&p, 5, PivotScheme::cyclic(5)).unwrap();
        let d: FpPresentation = build_an(&p, 5, PivotScheme::common_for_an(5)).unwrap();
        prop_assert_eq!(graded_dim(&c, &a), graded_dim(&d, &a));
    }

    #[test]
    fn groebner_counts_match_slices_a5(a in degree(5, 4)) {
        let p = PrimeModulus::default();
        let spec: FpPresentation = build_an(&p, 5, PivotScheme::cyclic(5)).unwrap();
        let gb = GroebnerBasis::of_spec(&spec, &MonomialOrder::grevlex(), Some(4));
        prop_assert_eq!(gb.standard_monomial_count(&a).unwrap(), graded_dim(&spec, &a) as u64);
    }

    #[test]
    fn config_points_satisfy_relations(seed in any::<u64>(), n in 3usize..=5, m in 0usize..=2) {
        let spec: QPresentation = build_bnm(&(), n, m).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cfg = random_config(&mut rng, &(), n, m, 40).unwrap();
        prop_assert!(verify_vanishing(&spec, &alpha_from_config(&cfg, &spec).unwrap()).is_ok());
    }
}

#[test]
fn restricted_series_match_brute_force() {
    for (n, m) in [(2, 2), (3, 1), (3, 2)] {
        let spec: QPresentation = build_bnm(&(), n, m).unwrap();
        let lee = lee_series_restricted(n, m, Bound::Total(4)).unwrap();
        for a in DegreeVector::up_to_total(n, 4) {
            assert_eq!(BigInt::from(graded_dim(&spec, &a)), lee.coefficient(&a), "B_{n},{m} at {a}");
        }
    }
}

#[test]
fn curve_module_factorization() {
    for n in [4, 5] {
        let lhs = curve_module_series(n, Bound::Total(6)).unwrap();
        let rhs = lee_series_restricted(n - 1, 1, Bound::Total(6)).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn conifold_coefficients() {
    let spec: QPresentation = build_bnm(&(), 2, 2).unwrap();
    for a in DegreeVector::up_to_total(2, 6) {
        assert_eq!(graded_dim(&spec, &a) as u32, a.0[0] + a.0[1] + 1);
    }
}

/// Smoothness in codimension five for A_5 needs every 8x8 minor of a 20x15
/// Jacobian, about 8e8 of them. Kept for anyone with the hardware; the
/// default budget refuses it.
#[test]
#[ignore = "A_5 singular locus is far beyond the minor budget"]
fn a5_singular_locus_small() {
    use psialg::geometry::singular_locus_dim;
    let p = PrimeModulus::default();
    let a5: FpPresentation = build_an(&p, 5, PivotScheme::cyclic(5)).unwrap();
    let dim = singular_locus_dim(&a5, 8, u128::MAX).unwrap();
    assert!(dim.at_most(2), "{dim}");
}
