//! Property tests for the crate's algebraic invariants.

use proptest::prelude::*;

use aperture_core::algebra::{
    cont_accessibility, factor_profile, sum_profiles, sym_accessibility, AlgebraFactor,
    CandidateAlgebra, DivisionRing, FactorProfile,
};
use aperture_core::bell::{chsh_value, ChshConfig, MeasurementSetting};
use aperture_core::quantum::{born_probability, luders_update};
use aperture_core::random::{haar_unitary, random_density, random_projection, rng_from};
use aperture_core::search::{enumerate_candidates, SearchBounds};
use num_rational::Rational64;

fn arb_ring() -> impl Strategy<Value = DivisionRing> {
    prop_oneof![
        Just(DivisionRing::R),
        Just(DivisionRing::C),
        Just(DivisionRing::H),
    ]
}

fn arb_factor() -> impl Strategy<Value = AlgebraFactor> {
    (arb_ring(), 1u32..6).prop_map(|(ring, m)| AlgebraFactor::new(ring, m))
}

proptest! {
    #[test]
    fn profile_sum_is_order_insensitive(factors in prop::collection::vec(arb_factor(), 1..8)) {
        let profiles: Vec<FactorProfile> = factors.iter().map(|f| factor_profile(*f)).collect();
        let forward = sum_profiles(&profiles).unwrap();
        let mut reversed = profiles.clone();
        reversed.reverse();
        prop_assert_eq!(forward, sum_profiles(&reversed).unwrap());
        // Associativity: fold in two halves.
        let (left, right) = profiles.split_at(profiles.len() / 2);
        if !left.is_empty() && !right.is_empty() {
            let combined = sum_profiles(&[
                sum_profiles(left).unwrap(),
                sum_profiles(right).unwrap(),
            ])
            .unwrap();
            prop_assert_eq!(forward, combined);
        }
    }

    #[test]
    fn canonical_form_is_permutation_invariant(factors in prop::collection::vec(arb_factor(), 1..8)) {
        let a = CandidateAlgebra::new(factors.clone()).unwrap();
        let mut shuffled = factors;
        shuffled.rotate_left(1);
        let b = CandidateAlgebra::new(shuffled).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn sym_times_four_is_a_perfect_square(g in 0u64..1000, a in 0u64..1000) {
        let p = FactorProfile::new(0, 0, g, a);
        let four_sym = sym_accessibility(&p) * Rational64::from_integer(4);
        prop_assert!(four_sym.is_integer());
        let w = (2 * g + a) as i64;
        prop_assert_eq!(four_sym.to_integer(), w * w);
    }

    #[test]
    fn cont_scales_back_exactly(h in 0u64..1_000_000, n in 0u32..40) {
        let c = cont_accessibility(h, n);
        let back = c * Rational64::new(1i64 << n, 1);
        prop_assert!(back.is_integer());
        prop_assert_eq!(back.to_integer() as u64, h * h);
    }

    #[test]
    fn factor_k_matches_real_dimension(factor in arb_factor()) {
        let p = factor_profile(factor);
        prop_assert_eq!(p.k, factor.real_dim());
        prop_assert!(p.g + p.a <= p.k);
        if factor.ring != DivisionRing::R {
            prop_assert!(p.k >= p.r);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sub_bound_enumeration_is_a_filter(disc in 1u64..40, summands in 1usize..4) {
        let big = SearchBounds::new(40, 3).unwrap();
        let sub = SearchBounds::new(disc, summands).unwrap();
        let big_set: std::collections::BTreeSet<CandidateAlgebra> =
            enumerate_candidates(&big).collect();
        let sub_set: std::collections::BTreeSet<CandidateAlgebra> =
            enumerate_candidates(&sub).collect();
        let filtered: std::collections::BTreeSet<CandidateAlgebra> = big_set
            .into_iter()
            .filter(|c| {
                let p = c.profile();
                p.k * p.r <= disc
                    && c.num_factors() <= summands
                    && c.factors().iter().all(|f| sub.admits(*f))
            })
            .collect();
        prop_assert_eq!(sub_set, filtered);
    }

    #[test]
    fn born_probability_is_clamped_and_luders_idempotent(seed in 0u64..5000) {
        let mut rng = rng_from(seed);
        let rho = random_density::<f64, _>(6, &mut rng);
        let p = random_projection::<f64, _>(6, 1 + (seed % 5) as usize, &mut rng);
        let prob = born_probability(&rho, &p).unwrap();
        prop_assert!((0.0..=1.0).contains(&prob));
        if prob > 1e-6 {
            let once = luders_update(&rho, &p).unwrap();
            let twice = luders_update(&once, &p).unwrap();
            prop_assert!(once.distance(&twice) < 1e-12);
        }
    }

    #[test]
    fn chsh_never_exceeds_the_quantum_bound(
        a in 0.0f64..std::f64::consts::TAU,
        a2 in 0.0f64..std::f64::consts::TAU,
        b in 0.0f64..std::f64::consts::TAU,
        b2 in 0.0f64..std::f64::consts::TAU,
    ) {
        let cfg = ChshConfig {
            a: MeasurementSetting::planar(a),
            a_prime: MeasurementSetting::planar(a2),
            b: MeasurementSetting::planar(b),
            b_prime: MeasurementSetting::planar(b2),
            state: aperture_core::bell::singlet_state::<f64>(),
        };
        let value = chsh_value(&cfg).unwrap();
        prop_assert!(value <= 2.0 * std::f64::consts::SQRT_2 + 1e-9);
    }

    #[test]
    fn evolution_preserves_trace_and_spectrum(seed in 0u64..5000) {
        let mut rng = rng_from(seed);
        let rho = random_density::<f64, _>(4, &mut rng);
        let u = haar_unitary::<f64, _>(4, &mut rng);
        let moved = aperture_core::quantum::evolve(&rho, &u).unwrap();
        let before = aperture_core::quantum::matrix::hermitian_eigenvalues(rho.matrix());
        let after = aperture_core::quantum::matrix::hermitian_eigenvalues(moved.matrix());
        for (x, y) in before.iter().zip(after.iter()) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }
}
