//! Random unitaries and states for sampling experiments.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::decomp::qr_positive;
use crate::matrix::ComplexMatrix;
use crate::C64;

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
/// of `R`'s diagonal pushed into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    loop {
        let g = ComplexMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
        // A singular Ginibre draw has probability zero; redraw if it happens.
        if let Ok((q, _)) = qr_positive(&g) {
            return q;
        }
    }
}

/// Uniformly random unit vector.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..dim).map(|_| gaussian(rng)).collect();
        if let Some(u) = crate::vector::normalized(&v, 1e-12) {
            return u;
        }
    }
}

/// `e^{iχ}` with χ uniform on `[0, 2π)`.
pub fn random_phase<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
}
