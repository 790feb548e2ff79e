use linalg_core::random::{haar_unitary, random_state};
use linalg_core::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_matrix(seed: u64, r: usize, c_: usize) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ComplexMatrix::new(r, c_, random_state(&mut rng, r * c_)).unwrap()
}

fn random_hermitian(seed: u64, n: usize) -> ComplexMatrix {
    let g = random_matrix(seed, n, n);
    &g + &g.adjoint()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tensor_is_associative(seed in any::<u64>()) {
        let a = random_matrix(seed, 2, 2);
        let b = random_matrix(seed.wrapping_add(1), 3, 2);
        let c_ = random_matrix(seed.wrapping_add(2), 2, 3);
        let l = tensor(&tensor(&a, &b), &c_);
        let r = tensor(&a, &tensor(&b, &c_));
        prop_assert!(l.max_abs_diff(&r) <= 1e-12);
    }

    #[test]
    fn expm_is_a_one_parameter_group(seed in any::<u64>(), t in -2.0f64..2.0, s in -2.0f64..2.0) {
        let h = random_hermitian(seed, 4);
        let lhs = expm_hermitian(&h, t).unwrap().matmul(&expm_hermitian(&h, s).unwrap());
        prop_assert!(lhs.max_abs_diff(&expm_hermitian(&h, t + s).unwrap()) <= 1e-10);
        prop_assert!(expm_hermitian(&h, t).unwrap().is_unitary(1e-10));
    }

    #[test]
    fn partial_traces_compose(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = StateVector::new(random_state(&mut rng, 16), vec![2, 2, 2, 2]).unwrap();
        // Trace out subsystem 2, then subsystem 1 of what is left.
        let step = partial_trace_density(&s.density(), &[2, 2, 2, 2], &[0, 1, 3]).unwrap();
        let two_steps = partial_trace_density(&step, &[2, 2, 2], &[0, 2]).unwrap();
        let direct = s.partial_trace(&[0, 3]).unwrap();
        prop_assert!(two_steps.max_abs_diff(&direct) <= 1e-12);
        prop_assert!((direct.trace() - re(1.0)).norm() <= 1e-12);
    }

    #[test]
    fn completion_is_unitary_and_exact(seed in any::<u64>(), k in 1usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = haar_unitary(&mut rng, 8);
        let w = haar_unitary(&mut rng, 8);
        let src: Vec<_> = (0..k).map(|j| v.column(j)).collect();
        let tgt: Vec<_> = (0..k).map(|j| w.column(j)).collect();
        let u = complete_to_unitary(&src, &tgt).unwrap();
        prop_assert!(u.unitarity_defect() <= 1e-10);
        for (a, b) in src.iter().zip(&tgt) {
            prop_assert!(vector::max_abs_diff(&u.apply(a), b) <= 1e-12);
        }
    }

    #[test]
    fn schmidt_coefficients_carry_the_frobenius_norm(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = haar_unitary(&mut rng, 4);
        let s = operator_schmidt(&u).unwrap();
        let total: f64 = s.iter().map(|x| x * x).sum();
        prop_assert!((total - 4.0).abs() <= 1e-10);
    }

    #[test]
    fn local_conjugation_preserves_schmidt_coefficients(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = haar_unitary(&mut rng, 4);
        let a = tensor(&haar_unitary(&mut rng, 2), &haar_unitary(&mut rng, 2));
        let b = tensor(&haar_unitary(&mut rng, 2), &haar_unitary(&mut rng, 2));
        let s1 = operator_schmidt(&u).unwrap();
        let s2 = operator_schmidt(&a.matmul(&u).matmul(&b)).unwrap();
        for (x, y) in s1.iter().zip(&s2) {
            prop_assert!((x - y).abs() <= 1e-10);
        }
    }
}
