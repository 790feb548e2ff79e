use interface_analysis::construct::{hide_in_random_frame, random_interface, InterfaceParams};
use interface_analysis::{
    analyze_in_basis, classify, find_feasible_basis, search_feasible_basis, FailureReason, LocalBasis,
    Regime, ACCEPT_RESIDUAL,
};
use linalg_core::random::{haar_unitary, random_phase};
use linalg_core::{
    expm_hermitian, gates, operator_schmidt, schmidt_number, singular_values, tensor, vector, ComplexMatrix, C64,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol
}

#[test]
fn swap_reads_off_directly() {
    let a = analyze_in_basis(&gates::swap(), &LocalBasis::computational()).unwrap();
    // SWAP|10⟩ = |01⟩, so column |10⟩ has top (0, 1) and empty bottom.
    assert!((a.alpha - 1.0).abs() < 1e-15);
    assert!(a.beta.abs() < 1e-15);
    assert!(close(a.psi0[0], C64::new(1.0, 0.0), 1e-15) && a.psi0[1].norm() < 1e-15);
    let psi1 = a.psi1.unwrap();
    assert!(psi1[0].norm() < 1e-15 && close(psi1[1], C64::new(1.0, 0.0), 1e-15));
    assert!(a.phi.is_none());
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    let expect = if (i, j) == (l, k) { 1.0 } else { 0.0 };
                    assert!(close(a.element(i, j, k, l), C64::new(expect, 0.0), 1e-15));
                }
            }
        }
    }
}

#[test]
fn identity_quantities() {
    let a = analyze_in_basis(&ComplexMatrix::identity(4), &LocalBasis::computational()).unwrap();
    assert_eq!((a.alpha, a.beta, a.omega), (0.0, 1.0, 1.0));
    assert_eq!(a.gamma, C64::new(0.0, 0.0));
    assert!(a.psi1.is_none());
    assert!(!a.is_exploitable());
}

#[test]
fn non_unitary_rejected() {
    let m = ComplexMatrix::identity(4).scale_real(1.1);
    assert!(analyze_in_basis(&m, &LocalBasis::computational()).is_err());
    assert!(classify(&m).is_err());
    assert!(analyze_in_basis(&ComplexMatrix::identity(2), &LocalBasis::computational()).is_err());
}

#[test]
fn swap_search_returns_computational_basis() {
    let found = search_feasible_basis(&gates::swap()).unwrap().unwrap();
    assert_eq!(found.residual, 0.0);
    assert_eq!(found.angles, [0.0; 4]);
    assert!(found.basis.product().approx_eq(&ComplexMatrix::identity(4), 1e-15));
}

#[test]
fn identity_is_in_u_star_but_degenerate() {
    let v = classify(&ComplexMatrix::identity(4)).unwrap();
    assert!(v.in_u_star && !v.exploitable);
    assert_eq!(v.failure_reason, Some(FailureReason::ControlledUnitaryDegenerate));
}

fn block_families(rng: &mut ChaCha8Rng) -> (ComplexMatrix, ComplexMatrix) {
    let zero = C64::new(0.0, 0.0);
    let w = haar_unitary(rng, 3);
    let first = ComplexMatrix::from_fn(4, 4, |i, j| match (i, j) {
        (0, 0) => random_phase(&mut ChaCha8Rng::seed_from_u64(7)),
        (0, _) | (_, 0) => zero,
        _ => w[(i - 1, j - 1)],
    });
    let a = haar_unitary(rng, 2);
    let b = haar_unitary(rng, 2);
    let p0 = ComplexMatrix::diagonal(&[C64::new(1.0, 0.0), zero]);
    let p1 = ComplexMatrix::diagonal(&[zero, C64::new(1.0, 0.0)]);
    let second = &tensor(&p0, &a) + &tensor(&p1, &b);
    (first, second)
}

#[test]
fn block_families_have_feasible_bases() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let (first, second) = block_families(&mut rng);
        for u in [&first, &second] {
            let (hidden, _) = hide_in_random_frame(&mut rng, u);
            let f = search_feasible_basis(&hidden).unwrap().expect("feasible basis exists");
            assert!(f.residual < ACCEPT_RESIDUAL);
            let a = analyze_in_basis(&hidden, &f.basis).unwrap();
            assert!(a.in_u_star());
        }
        let v = classify(&second).unwrap();
        assert!(!v.exploitable, "controlled block form must not be exploitable");
    }
}

/// `(⟨s1| ⊗ I) U (|s0⟩ ⊗ I)` for `|s0⟩` at Bloch angles `(θ, φ)`.
fn corner_block(u: &ComplexMatrix, theta: f64, phi: f64) -> ComplexMatrix {
    let s0 = [C64::new((theta / 2.0).cos(), 0.0), C64::from_polar((theta / 2.0).sin(), phi)];
    let s1 = vector::perp2(&s0);
    ComplexMatrix::from_fn(2, 2, |j, l| {
        (0..2)
            .flat_map(|a| (0..2).map(move |b| (a, b)))
            .map(|(a, b)| s1[a].conj() * u[(2 * a + j, 2 * b + l)] * s0[b])
            .sum()
    })
}

#[test]
fn haar_random_verdict_agrees_with_dense_grid() {
    // A basis is feasible iff the 2×2 corner block for |0⟩_S is singular;
    // |0⟩_I is then its kernel. Scan |0⟩_S at resolution π/200.
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..3 {
        let u = haar_unitary(&mut rng, 4);
        let mut grid_min = f64::INFINITY;
        let steps = 200;
        for a in 0..=steps {
            let theta = std::f64::consts::PI * a as f64 / steps as f64;
            for b in 0..2 * steps {
                let phi = std::f64::consts::PI * b as f64 / steps as f64;
                let s = singular_values(&corner_block(&u, theta, phi)).unwrap();
                grid_min = grid_min.min(s[1]);
            }
        }
        let found = search_feasible_basis(&u).unwrap();
        let grid_says_feasible = grid_min < 0.02;
        assert_eq!(found.is_some(), grid_says_feasible, "grid minimum {grid_min}");
        if let Some(f) = found {
            let s = singular_values(&corner_block(&u, f.angles[0], f.angles[1])).unwrap();
            assert!(s[1] < 1e-7, "corner block at returned basis is not singular: {}", s[1]);
        }
    }
}

#[test]
fn hidden_construction_is_recovered() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for regime in [Regime::A, Regime::B0, Regime::B1, Regime::B2] {
        for _ in 0..5 {
            let u = random_interface(&mut rng, regime, None);
            let direct = analyze_in_basis(&u, &LocalBasis::computational()).unwrap();
            assert_eq!(direct.regime(), regime);
            let (hidden, frame) = hide_in_random_frame(&mut rng, &u);
            let framed = analyze_in_basis(&hidden, &frame).unwrap();
            assert!((framed.beta - direct.beta).abs() < 1e-12);
            assert!(framed.in_u_star());
            let v = classify(&hidden).unwrap();
            assert!(v.exploitable, "{regime:?} instance not recognised");
        }
    }
}

#[test]
fn exploitable_instances_have_schmidt_number_at_least_three() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let regimes = [Regime::A, Regime::B0, Regime::B1, Regime::B2];
    for k in 0..100 {
        let u = random_interface(&mut rng, regimes[k % 4], None);
        let (hidden, _) = hide_in_random_frame(&mut rng, &u);
        let v = classify(&hidden).unwrap();
        assert!(v.exploitable);
        let n = schmidt_number(&operator_schmidt(&hidden).unwrap());
        assert!(n >= 3, "exploitable unitary with Schmidt number {n}");
    }
}

#[test]
fn controlled_and_local_unitaries_are_not_exploitable() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let zero = C64::new(0.0, 0.0);
    let p0 = ComplexMatrix::diagonal(&[C64::new(1.0, 0.0), zero]);
    let p1 = ComplexMatrix::diagonal(&[zero, C64::new(1.0, 0.0)]);
    for _ in 0..10 {
        let controlled = &tensor(&p0, &haar_unitary(&mut rng, 2)) + &tensor(&p1, &haar_unitary(&mut rng, 2));
        let local = tensor(&haar_unitary(&mut rng, 2), &haar_unitary(&mut rng, 2));
        for u in [controlled, local] {
            let (hidden, _) = hide_in_random_frame(&mut rng, &u);
            assert!(schmidt_number(&operator_schmidt(&hidden).unwrap()) <= 2);
            let v = classify(&hidden).unwrap();
            assert!(!v.exploitable);
        }
    }
}

#[test]
fn zz_evolution_is_never_exploitable() {
    let z = gates::pauli_z();
    let h = &tensor(&z, &z) + &tensor(&z, &ComplexMatrix::identity(2));
    for t in [0.1, 0.7, std::f64::consts::FRAC_PI_3, 2.0] {
        let u = expm_hermitian(&h, t).unwrap();
        let v = classify(&u).unwrap();
        assert!(v.in_u_star && !v.exploitable);
    }
}

#[test]
fn assemble_rejects_inconsistent_columns() {
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let p = InterfaceParams {
        psi0: [one, zero],
        psi1: [zero, one],
        alpha: 0.6,
        phi: [one, zero],
        gamma: C64::new(0.8, 0.0),
        omega: 0.6,
        phi_prime: [one, zero],
    };
    assert!(p.assemble().is_err());
}

#[test]
fn feasible_basis_prefers_smaller_beta() {
    // Every basis with |0⟩_S = |0⟩ is feasible for this controlled unitary
    // and has β = 1, so the tie-break picks θ_S = 0.
    let zero = C64::new(0.0, 0.0);
    let p0 = ComplexMatrix::diagonal(&[C64::new(1.0, 0.0), zero]);
    let p1 = ComplexMatrix::diagonal(&[zero, C64::new(1.0, 0.0)]);
    let u = &tensor(&p0, &gates::hadamard()) + &tensor(&p1, &gates::pauli_x());
    let f = search_feasible_basis(&u).unwrap().unwrap();
    assert!((f.beta - 1.0).abs() < 1e-9);
    assert_eq!(f.angles[0], 0.0);
    assert!(find_feasible_basis(&u).unwrap().is_some());
}
