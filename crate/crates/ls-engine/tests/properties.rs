use interface_analysis::construct::random_interface;
use interface_analysis::{analyze_in_basis, LocalBasis, Regime};
use linalg_core::random::random_state;
use linalg_core::ComplexMatrix;
use ls_engine::{initial_state, ls_sequence, run_ls, SYSTEM};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn regime(k: u8) -> Regime {
    [Regime::A, Regime::B0, Regime::B1][k as usize % 3]
}

/// Trace distance of two qubit density matrices.
fn trace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let d = a - b;
    let x = d[(0, 0)].re;
    (x * x + d[(0, 1)].norm_sqr()).sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn leakage_is_beta_power_for_any_input(seed in any::<u64>(), k in 0u8..3, n in 0usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = analyze_in_basis(&random_interface(&mut rng, regime(k), None), &LocalBasis::computational()).unwrap();
        let psi = random_state(&mut rng, 2);
        prop_assume!(psi[1].norm() > 1e-3);
        let r = run_ls(&a, n, (psi[0], psi[1])).unwrap();
        prop_assert!((r.xi_measured - a.beta.powi(n as i32 + 1)).abs() <= 1e-9);
        prop_assert!(r.final_state.is_normalized(1e-10));
    }

    #[test]
    fn system_forgets_its_input(seed in any::<u64>(), k in 0u8..3, n in 0usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = analyze_in_basis(&random_interface(&mut rng, regime(k), None), &LocalBasis::computational()).unwrap();
        let seq = ls_sequence(&a, n).unwrap();
        let leak = a.beta.powi(n as i32 + 1);
        let mut reduced = Vec::new();
        for _ in 0..50 {
            let psi = random_state(&mut rng, 2);
            let mut st = initial_state(n + 2, (psi[0], psi[1]));
            seq.execute(&mut st).unwrap();
            let rho = st.partial_trace(&[SYSTEM]).unwrap();
            let purity = rho.matmul(&rho).trace().re;
            prop_assert!(purity >= 1.0 - 2.0 * leak * leak - 1e-12);
            reduced.push(rho);
        }
        for i in 0..reduced.len() {
            for j in 0..i {
                prop_assert!(trace_distance(&reduced[i], &reduced[j]) <= 2.0 * leak + 1e-12);
            }
        }
    }

    #[test]
    fn composed_sequence_is_unitary(seed in any::<u64>(), k in 0u8..3, n in 0usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = analyze_in_basis(&random_interface(&mut rng, regime(k), None), &LocalBasis::computational()).unwrap();
        let m = ls_sequence(&a, n).unwrap().to_matrix().unwrap();
        prop_assert!(m.unitarity_defect() <= 1e-9);
    }
}
