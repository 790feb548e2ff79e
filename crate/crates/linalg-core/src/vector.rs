//! Helpers for plain complex vectors.

use crate::C64;

/// `⟨a|b⟩`, conjugate-linear in the first argument.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    assert_eq!(a.len(), b.len(), "inner product of unequal lengths");
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Returns `a / ‖a‖`, or `None` when the norm is below `tol`.
pub fn normalized(a: &[C64], tol: f64) -> Option<Vec<C64>> {
    let n = norm(a);
    (n > tol).then(|| a.iter().map(|x| x / n).collect())
}

pub fn scale(a: &[C64], c: C64) -> Vec<C64> {
    a.iter().map(|x| x * c).collect()
}

pub fn add(a: &[C64], b: &[C64]) -> Vec<C64> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[C64], b: &[C64]) -> Vec<C64> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `a += c·b`
pub fn axpy(a: &mut [C64], c: C64, b: &[C64]) {
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter_mut().zip(b) {
        *x += c * y;
    }
}

/// Kronecker product of two vectors, first argument most significant.
pub fn kron(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

/// Kronecker product of a list of vectors, left to right.
pub fn kron_all<V: AsRef<[C64]>>(parts: &[V]) -> Vec<C64> {
    parts
        .iter()
        .fold(vec![C64::new(1.0, 0.0)], |acc, p| kron(&acc, p.as_ref()))
}

/// Computational basis vector `|index⟩` in dimension `dim`.
pub fn basis(dim: usize, index: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); dim];
    v[index] = C64::new(1.0, 0.0);
    v
}

/// A unit vector orthogonal to a 2-dimensional unit vector `(a, b)`:
/// `(−b̄, ā)`.
pub fn perp2(v: &[C64]) -> [C64; 2] {
    assert_eq!(v.len(), 2);
    [-v[1].conj(), v[0].conj()]
}

/// Largest entrywise modulus of `a − b`.
pub fn max_abs_diff(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Largest deviation of the Gram matrix of `vs` from the identity.
pub fn orthonormality_defect<V: AsRef<[C64]>>(vs: &[V]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, a) in vs.iter().enumerate() {
        for (j, b) in vs.iter().enumerate().skip(i) {
            let g = inner(a.as_ref(), b.as_ref());
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g - target).norm());
        }
    }
    worst
}
