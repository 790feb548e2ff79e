use std::f64::consts::{PI, TAU};

use interface_analysis::construct::{hide_in_random_frame, random_interface};
use interface_analysis::{analyze_in_basis, classify, LocalBasis, Regime};
use linalg_core::random::haar_unitary;
use linalg_core::vector;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn regime_from(k: u8) -> Regime {
    [Regime::A, Regime::B0, Regime::B1, Regime::B2][k as usize % 4]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn analysis_is_basis_covariant(seed in any::<u64>(), ts in 0.0..PI, ps in 0.0..TAU,
                                   ti in 0.0..PI, pi in 0.0..TAU) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = haar_unitary(&mut rng, 4);
        let b = LocalBasis::from_bloch(ts, ps, ti, pi);
        let a = analyze_in_basis(&u, &b).unwrap();
        let moved = analyze_in_basis(&b.transform(&u), &LocalBasis::computational()).unwrap();
        prop_assert!(a.matrix.max_abs_diff(&moved.matrix) <= 1e-12);
        prop_assert!((a.alpha - moved.alpha).abs() <= 1e-12);
        prop_assert!((a.beta - moved.beta).abs() <= 1e-12);
        prop_assert!((a.omega - moved.omega).abs() <= 1e-12);
    }

    #[test]
    fn feasible_analysis_satisfies_normalisation(seed in any::<u64>(), k in 0u8..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_interface(&mut rng, regime_from(k), None);
        let (hidden, _) = hide_in_random_frame(&mut rng, &u);
        let v = classify(&hidden).unwrap();
        prop_assert!(!v.exploitable || v.in_u_star);
        let a = v.analysis.expect("constructed instances are feasible");
        prop_assert!(a.matrix[(2, 0)].norm() <= 1e-8 && a.matrix[(3, 0)].norm() <= 1e-8);
        prop_assert!((a.alpha * a.alpha + a.beta * a.beta - 1.0).abs() <= 1e-10);
        prop_assert!((a.gamma.norm_sqr() + a.omega * a.omega - 1.0).abs() <= 1e-10);
        if let Some(p1) = a.psi1 {
            prop_assert!(vector::inner(&a.psi0, &p1).norm() <= 1e-10);
        }
    }

    #[test]
    fn verdict_is_consistent_for_haar_input(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = haar_unitary(&mut rng, 4);
        let v = classify(&u).unwrap();
        prop_assert!(!v.exploitable || v.in_u_star);
        prop_assert_eq!(v.exploitable, v.failure_reason.is_none());
        if let Some(a) = &v.analysis {
            if v.in_u_star {
                prop_assert!(a.corner_residual() < 1e-16);
            }
        }
    }
}
