use io_composition::{random_transfer, verify_lemma1, IoChannel, Transfer};
use linalg_core::eigh;
use linalg_core::random::haar_unitary;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn channel(seed: u64, xi_out: f64, xi_in: f64, registers: usize) -> (IoChannel, linalg_core::ComplexMatrix) {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let u_m = haar_unitary(&mut r, 4);
    let out = Transfer::matrix(random_transfer(&mut r, xi_out, registers).unwrap()).unwrap();
    let inn = Transfer::matrix(random_transfer(&mut r, xi_in, registers).unwrap().adjoint()).unwrap();
    (IoChannel::new(out, u_m.clone(), inn, xi_out, xi_in).unwrap(), u_m)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, ..ProptestConfig::default() })]

    #[test]
    fn lemma1_bound_never_violated(seed in any::<u64>(), xi_out in 0.0f64..=1.0, xi_in in 0.0f64..=1.0, regs in 1usize..=2) {
        let (ch, u_m) = channel(seed, xi_out, xi_in, regs);
        let rep = verify_lemma1(&ch, &u_m, 8, seed).unwrap();
        prop_assert!(rep.within_bound(), "{:?}", rep);
        prop_assert!(rep.oracle_distance <= rep.bound + 1e-7, "{:?}", rep);
    }

    #[test]
    fn composed_channel_is_completely_positive(seed in any::<u64>(), xi_out in 0.0f64..=1.0, xi_in in 0.0f64..=1.0) {
        let (ch, _) = channel(seed, xi_out, xi_in, 1);
        let choi = ch.choi_matrix().unwrap();
        prop_assert!(eigh(&choi).unwrap().values[0] >= -1e-9);
        let reduced = linalg_core::partial_trace_density(&choi, &[4, 4], &[0]).unwrap();
        prop_assert!(reduced.approx_eq(&linalg_core::ComplexMatrix::identity(4), 1e-10));
    }
}
