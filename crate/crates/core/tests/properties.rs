use approx::assert_relative_eq;
use proptest::prelude::*;

use qnoise::channels::gamma_of;
use qnoise::measures::{gd_lower_bound_from, negativity_via_trace_norm};
use qnoise::random::{random_classical_quantum_state, random_density_matrix, random_product_state, random_unitary, seeded_rng};
use qnoise::state::diagnose;
use qnoise::{bloch_decomposition, evolve, gd_lower_bound, negativity, ChannelFamily, GdConvention};

fn family() -> impl Strategy<Value = ChannelFamily> {
    prop::sample::select(ChannelFamily::NAMED.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evolution_preserves_validity(seed in any::<u64>(), fa in family(), fb in family(),
                                    qa in 0.0..3.0f64, qb in 0.0..3.0f64, t in 0.0..10.0f64) {
        let rho0 = random_density_matrix(3, 3, &mut seeded_rng(seed));
        let rho = evolve(&rho0, fa, fb, qa, qb, t).unwrap();
        prop_assert!(diagnose(rho.matrix()).is_valid());
    }

    #[test]
    fn local_channels_do_not_increase_negativity(seed in any::<u64>(), fa in family(), fb in family(),
                                                 qa in 0.0..3.0f64, qb in 0.0..3.0f64, t in 0.0..5.0f64) {
        let rho0 = random_density_matrix(3, 3, &mut seeded_rng(seed));
        let rho = evolve(&rho0, fa, fb, qa, qb, t).unwrap();
        prop_assert!(negativity(&rho) <= negativity(&rho0) + 1e-10);
    }

    #[test]
    fn negativity_definitions_agree(seed in any::<u64>()) {
        let rho = random_density_matrix(3, 3, &mut seeded_rng(seed));
        assert_relative_eq!(negativity(&rho), negativity_via_trace_norm(&rho), epsilon = 1e-10);
    }

    #[test]
    fn measures_are_local_unitary_invariant(seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let rho = random_density_matrix(3, 3, &mut rng);
        let (u, w) = (random_unitary(3, &mut rng), random_unitary(3, &mut rng));
        let rotated = rho.apply_local_unitaries(&u, &w).unwrap();
        assert_relative_eq!(negativity(&rho), negativity(&rotated), epsilon = 1e-10);
        let (a, b) = (
            gd_lower_bound(&rho, GdConvention::RAW).unwrap(),
            gd_lower_bound(&rotated, GdConvention::RAW).unwrap(),
        );
        assert_relative_eq!(a, b, epsilon = 1e-10);
    }

    #[test]
    fn bloch_decomposition_round_trips(seed in any::<u64>()) {
        let rho = random_density_matrix(3, 3, &mut seeded_rng(seed));
        let back = bloch_decomposition(&rho).unwrap().synthesize().unwrap();
        let err = qnoise::linalg::max_abs_diff(&back, rho.matrix());
        prop_assert!(err < 1e-10, "reconstruction error {err}");
    }

    #[test]
    fn product_and_classical_quantum_states_have_no_discord(seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        for rho in [random_product_state(3, 3, &mut rng), random_classical_quantum_state(3, 3, &mut rng)] {
            let b = bloch_decomposition(&rho).unwrap();
            prop_assert!(gd_lower_bound_from(&b, GdConvention::RAW.unclamped()).abs() < 1e-10);
        }
    }

    #[test]
    fn gamma_is_monotone(q in 0.0..5.0f64, t in 0.0..5.0f64, dq in 0.0..1.0f64, dt in 0.0..1.0f64) {
        let g = gamma_of(q, t).unwrap();
        prop_assert!((0.0..=1.0).contains(&g));
        prop_assert!(gamma_of(q + dq, t).unwrap() >= g);
        prop_assert!(gamma_of(q, t + dt).unwrap() >= g);
    }
}
