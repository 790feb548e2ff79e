use interface_analysis::construct::random_interface;
use interface_analysis::{analyze_in_basis, InterfaceAnalysis, LocalBasis, Regime};
use linalg_core::{gates, vector, ComplexMatrix, StateVector, C64};
use ls_engine::{
    build_s_n, build_w_n, build_w_n_via_adjoint, initial_state, ls_sequence, ls_sequence_via_adjoint, run_ls,
    run_ls_via_adjoint, GateSequence, LsError, Step, INTERFACE, SYSTEM,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn instance(seed: u64, regime: Regime, beta: Option<f64>) -> InterfaceAnalysis {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = random_interface(&mut rng, regime, beta);
    analyze_in_basis(&u, &LocalBasis::computational()).unwrap()
}

#[test]
fn zero_registers_is_a_single_interface_use() {
    let a = instance(1, Regime::B0, Some(0.5));
    let seq = build_s_n(&a, 0).unwrap();
    assert_eq!(seq.steps(), &[Step::ApplyInterface { adjoint: false, system: SYSTEM }]);
}

#[test]
fn s_n_structure() {
    let a = instance(1, Regime::B0, Some(0.5));
    let seq = build_s_n(&a, 5).unwrap();
    assert_eq!(seq.interface_uses(), 6);
    assert_eq!(seq.steps().iter().filter(|s| matches!(s, Step::Swap { .. })).count(), 5);
}

#[test]
fn two_registers_on_excited_input_match_expansion() {
    let a = instance(7, Regime::B0, Some(0.6));
    let n = 2;
    let seq = build_s_n(&a, n).unwrap();
    let mut st = initial_state(4, (re(0.0), re(1.0)));
    seq.execute(&mut st).unwrap();

    // Slots in time order: R1, R2, I. The k-th escape leaves φ in earlier
    // slots, ψ1 in slot k and ψ0 afterwards.
    let psi0 = a.psi0;
    let psi1 = a.psi1.unwrap();
    let phi = a.phi.unwrap();
    let (alpha, beta) = (a.alpha, a.beta);
    let slot_state = |k: usize, slot: usize| -> [C64; 2] {
        if slot < k {
            phi
        } else if slot == k {
            psi1
        } else {
            psi0
        }
    };
    for s in 0..2 {
        for i in 0..2 {
            for r1 in 0..2 {
                for r2 in 0..2 {
                    let expect = if s == 0 {
                        (1..=3)
                            .map(|k| {
                                re(alpha * beta.powi(k as i32 - 1))
                                    * slot_state(k, 3)[i]
                                    * slot_state(k, 1)[r1]
                                    * slot_state(k, 2)[r2]
                            })
                            .sum::<C64>()
                    } else {
                        re(beta.powi(3)) * phi[i] * phi[r1] * phi[r2]
                    };
                    let got = st.amplitude(&[s, i, r1, r2]);
                    assert!((got - expect).norm() <= 1e-12, "({s}{i}{r1}{r2}): {got} vs {expect}");
                }
            }
        }
    }
}

#[test]
fn ground_input_stays_put() {
    let a = instance(3, Regime::B1, Some(0.4));
    let seq = build_s_n(&a, 2).unwrap();
    let mut st = initial_state(4, (re(1.0), re(0.0)));
    seq.execute(&mut st).unwrap();
    let expect = StateVector::product(&[vec![re(1.0), re(0.0)], a.psi0.to_vec(), a.psi0.to_vec(), a.psi0.to_vec()]);
    assert!(vector::max_abs_diff(st.amplitudes(), expect.amplitudes()) <= 1e-12);
}

#[test]
fn w_n_reproduces_prescribed_images() {
    for (seed, n) in [(11u64, 0usize), (12, 1), (13, 3), (14, 5)] {
        let a = instance(seed, Regime::B0, None);
        let w = build_w_n(&a, n).unwrap();
        assert!(w.unitarity_defect() <= 1e-10);

        // Independent construction of the sources by running S_n on |0⟩_S
        // and |1⟩_S and reading off the |0⟩_S branch.
        let seq = build_s_n(&a, n).unwrap();
        let mut ground = initial_state(n + 2, (re(1.0), re(0.0)));
        seq.execute(&mut ground).unwrap();
        let mut excited = initial_state(n + 2, (re(0.0), re(1.0)));
        seq.execute(&mut excited).unwrap();
        let fixed = ground.component(SYSTEM, 0).unwrap();
        let mut moved = excited.component(SYSTEM, 0).unwrap();
        moved.normalize().unwrap();

        let dim = 1 << (n + 1);
        let img0 = w.apply(fixed.amplitudes());
        let img1 = w.apply(moved.amplitudes());
        assert!(vector::max_abs_diff(&img0, &vector::basis(dim, 0)) <= 1e-12);
        assert!(vector::max_abs_diff(&img1, &vector::basis(dim, dim / 2)) <= 1e-12);
    }
}

#[test]
fn w_0_with_computational_psi0() {
    // SWAP-like block form: ψ0 = |0⟩, ψ1 = |1⟩.
    let s = 0.6f64;
    let c = (1.0 - s * s).sqrt();
    let u = ComplexMatrix::from_real_rows(&[
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, c, -s],
        [0.0, 0.0, s, c],
        [0.0, 1.0, 0.0, 0.0],
    ]);
    let a = analyze_in_basis(&u, &LocalBasis::computational()).unwrap();
    assert!(a.in_u_star());
    let w = build_w_n(&a, 0).unwrap();
    assert!(w.approx_eq(&ComplexMatrix::identity(2), 1e-12));
}

#[test]
fn ground_input_transfers_with_unit_fidelity() {
    let a = instance(5, Regime::A, Some(0.7));
    let r = run_ls(&a, 3, (re(1.0), re(0.0))).unwrap();
    assert!((r.fidelity_to_ideal - 1.0).abs() <= 1e-12);
    assert!(!r.xi_observable);
    assert_eq!(r.xi_measured, r.xi_predicted);
}

#[test]
fn half_power_example_leaks_one_eighth() {
    let a = instance(21, Regime::B0, Some(std::f64::consts::FRAC_1_SQRT_2));
    let r = run_ls(&a, 5, (re(0.6), C64::new(0.0, 0.8))).unwrap();
    assert!((r.xi_measured - 0.125).abs() <= 1e-9);
}

#[test]
fn xi_law_for_random_instances() {
    let regimes = [Regime::A, Regime::B0, Regime::B1];
    for seed in 0..6u64 {
        let a = instance(100 + seed, regimes[seed as usize % 3], None);
        for n in 1..=8 {
            let r = run_ls(&a, n, (re(0.8), re(0.6))).unwrap();
            assert!((r.xi_measured - a.beta.powi(n as i32 + 1)).abs() <= 1e-9, "n={n}");
            let (s0, s1) = r.success_amplitudes;
            let total = s0.norm_sqr() + s1.norm_sqr() + (0.6 * r.xi_measured).powi(2);
            assert!((total - 1.0).abs() <= 1e-9);
            assert!(r.final_state.is_normalized(1e-10));
        }
    }
}

#[test]
fn adjoint_route_uses_only_interface_and_swaps() {
    let a = instance(31, Regime::B0, Some(0.5));
    let w = build_w_n_via_adjoint(&a, 3).unwrap();
    assert!(w
        .steps()
        .iter()
        .all(|s| matches!(s, Step::ApplyInterface { .. } | Step::Swap { .. })));
    assert!(w.steps().iter().any(|s| matches!(s, Step::ApplyInterface { adjoint: true, .. })));
}

#[test]
fn adjoint_route_single_register_leakage() {
    let a = instance(32, Regime::B0, Some(0.55));
    let r = run_ls_via_adjoint(&a, 1, (re(0.6), re(0.8))).unwrap();
    assert!((r.xi_measured - 0.55f64.powi(2)).abs() <= 1e-9);
}

#[test]
fn adjoint_route_matches_direct_route_state() {
    let a = instance(33, Regime::B0, Some(std::f64::consts::FRAC_1_SQRT_2));
    let input = (re(0.6), re(0.8));
    for n in [1usize, 2, 4] {
        let direct = run_ls(&a, n, input).unwrap();
        let via = run_ls_via_adjoint(&a, n, input).unwrap();
        let extended = direct.final_state.extend(&[re(1.0), re(0.0)]);
        let overlap = extended.overlap_sqr(&via.final_state);
        assert!(overlap >= 1.0 - 1e-9, "n={n}: overlap {overlap}");
    }
}

#[test]
fn whole_sequences_are_unitary() {
    let a = instance(41, Regime::B1, Some(0.45));
    for n in 0..=4 {
        assert!(ls_sequence(&a, n).unwrap().to_matrix().unwrap().unitarity_defect() <= 1e-9);
        assert!(ls_sequence_via_adjoint(&a, n).unwrap().to_matrix().unwrap().unitarity_defect() <= 1e-9);
    }
}

#[test]
fn adjoint_sequence_inverts() {
    let a = instance(42, Regime::B0, None);
    let seq = ls_sequence(&a, 2).unwrap();
    let m = seq.to_matrix().unwrap();
    let inv = seq.adjoint().to_matrix().unwrap();
    assert!(inv.matmul(&m).approx_eq(&ComplexMatrix::identity(m.rows()), 1e-10));
}

#[test]
fn invalid_inputs_are_rejected() {
    let a = instance(51, Regime::B0, Some(0.5));
    assert!(matches!(run_ls(&a, 2, (re(1.0), re(1.0))), Err(LsError::InputNotNormalized(_))));

    let id = analyze_in_basis(&ComplexMatrix::identity(4), &LocalBasis::computational()).unwrap();
    assert!(matches!(build_w_n(&id, 2), Err(LsError::BetaSaturated(_))));
    assert!(matches!(build_w_n_via_adjoint(&id, 2), Err(LsError::BetaSaturated(_))));

    let not_block = analyze_in_basis(&gates::cnot().matmul(&linalg_core::tensor(&gates::hadamard(), &gates::hadamard())), &LocalBasis::computational()).unwrap();
    assert!(!not_block.in_u_star());
    assert!(matches!(build_s_n(&not_block, 1), Err(LsError::NotInUStar)));
    assert!(matches!(build_s_n(&a, 13), Err(LsError::TooManyRegisters(13, 12))));
}

#[test]
fn sequence_validation() {
    let mut seq = GateSequence::new(gates::swap(), 2, false).unwrap();
    assert!(seq.push(Step::Swap { a: SYSTEM, b: INTERFACE }).is_err());
    assert!(seq.push(Step::Swap { a: INTERFACE, b: INTERFACE }).is_err());
    assert!(seq.push(Step::Swap { a: INTERFACE, b: 4 }).is_err());
    assert!(seq.push(Step::ApplyInterface { adjoint: false, system: 2 }).is_err());
    assert!(seq
        .push(Step::RegisterUnitary { matrix: ComplexMatrix::identity(4).scale_real(2.0), targets: vec![1, 2] })
        .is_err());
    assert!(seq.push(Step::RegisterUnitary { matrix: gates::hadamard(), targets: vec![0] }).is_err());
    assert!(seq.push(Step::RegisterUnitary { matrix: gates::cnot(), targets: vec![2, 2] }).is_err());
    assert!(seq.push(Step::Wait { duration: f64::NAN }).is_err());
    assert!(seq.push(Step::RegisterUnitary { matrix: gates::cnot(), targets: vec![3, 1] }).is_ok());
    assert!(GateSequence::new(ComplexMatrix::identity(2), 0, false).is_err());

    let mut wrong = StateVector::zero(vec![2, 2]);
    assert!(seq.execute(&mut wrong).is_err());
}

#[test]
fn wait_applies_system_hamiltonian() {
    let z = gates::pauli_z();
    let mut seq = GateSequence::new(ComplexMatrix::identity(4), 0, false).unwrap().with_system_hamiltonian(z).unwrap();
    seq.push(Step::Wait { duration: std::f64::consts::FRAC_PI_2 }).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut st = initial_state(2, (re(h), re(h)));
    seq.execute(&mut st).unwrap();
    // e^{−iZπ/2} = diag(−i, i)
    assert!((st.amplitude(&[0, 0]) - C64::new(0.0, -h)).norm() < 1e-12);
    assert!((st.amplitude(&[1, 0]) - C64::new(0.0, h)).norm() < 1e-12);
}
