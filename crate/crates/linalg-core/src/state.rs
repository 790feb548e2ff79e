use crate::error::{LinalgError, Result};
use crate::matrix::ComplexMatrix;
use crate::vector;
use crate::C64;

/// Pure state on a tensor product of subsystems, most significant first.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<C64>,
    dims: Vec<usize>,
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

fn check_targets(targets: &[usize], count: usize) -> Result<()> {
    for (n, &t) in targets.iter().enumerate() {
        if t >= count {
            return Err(LinalgError::InvalidSubsystem { index: t, count });
        }
        if targets[..n].contains(&t) {
            return Err(LinalgError::RepeatedSubsystem(t));
        }
    }
    Ok(())
}

/// Flat offsets of every joint level of `targets`, first target most significant.
fn target_offsets(dims: &[usize], strides: &[usize], targets: &[usize]) -> Vec<usize> {
    let mut offsets = vec![0usize];
    for &t in targets {
        let mut next = Vec::with_capacity(offsets.len() * dims[t]);
        for &o in &offsets {
            for d in 0..dims[t] {
                next.push(o + d * strides[t]);
            }
        }
        offsets = next;
    }
    offsets
}

/// Flat indices with every target digit equal to zero.
fn base_indices(dims: &[usize], strides: &[usize], targets: &[usize]) -> Vec<usize> {
    let others: Vec<usize> = (0..dims.len()).filter(|i| !targets.contains(i)).collect();
    target_offsets(dims, strides, &others)
}

impl StateVector {
    pub fn new(amplitudes: Vec<C64>, dims: Vec<usize>) -> Result<Self> {
        let dim: usize = dims.iter().product();
        if dim != amplitudes.len() {
            return Err(LinalgError::DimensionMismatch { expected: dim, got: amplitudes.len() });
        }
        Ok(Self { amplitudes, dims })
    }

    /// `|0…0⟩` on the given subsystems.
    pub fn zero(dims: Vec<usize>) -> Self {
        let dim = dims.iter().product();
        Self { amplitudes: vector::basis(dim, 0), dims }
    }

    /// Product state of the given factors.
    pub fn product<V: AsRef<[C64]>>(factors: &[V]) -> Self {
        let dims = factors.iter().map(|f| f.as_ref().len()).collect();
        Self { amplitudes: vector::kron_all(factors), dims }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn subsystem_dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    /// Flat index of a multi-index given per subsystem.
    pub fn index_of(&self, digits: &[usize]) -> usize {
        assert_eq!(digits.len(), self.dims.len());
        digits.iter().zip(&self.dims).fold(0, |acc, (d, n)| {
            assert!(d < n);
            acc * n + d
        })
    }

    pub fn amplitude(&self, digits: &[usize]) -> C64 {
        self.amplitudes[self.index_of(digits)]
    }

    pub fn norm(&self) -> f64 {
        vector::norm(&self.amplitudes)
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm();
        if n < 1e-300 {
            return Err(LinalgError::ZeroNorm(n));
        }
        for a in &mut self.amplitudes {
            *a /= n;
        }
        Ok(())
    }

    pub fn inner(&self, other: &Self) -> C64 {
        vector::inner(&self.amplitudes, &other.amplitudes)
    }

    /// `|⟨self|other⟩|²`
    pub fn overlap_sqr(&self, other: &Self) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Applies `op` to the listed subsystems; the first target is the most
    /// significant factor of `op`.
    pub fn apply(&mut self, op: &ComplexMatrix, targets: &[usize]) -> Result<()> {
        check_targets(targets, self.dims.len())?;
        let d: usize = targets.iter().map(|&t| self.dims[t]).product();
        if op.rows() != d || op.cols() != d {
            return Err(LinalgError::DimensionMismatch { expected: d, got: op.rows() });
        }
        let st = strides(&self.dims);
        let offsets = target_offsets(&self.dims, &st, targets);
        let bases = base_indices(&self.dims, &st, targets);
        let m = op.as_slice();
        let mut gathered = vec![C64::new(0.0, 0.0); d];
        for base in bases {
            for (g, o) in gathered.iter_mut().zip(&offsets) {
                *g = self.amplitudes[base + o];
            }
            for (r, o) in offsets.iter().enumerate() {
                let row = &m[r * d..(r + 1) * d];
                self.amplitudes[base + o] = row.iter().zip(&gathered).map(|(a, b)| a * b).sum();
            }
        }
        Ok(())
    }

    /// Exchanges two subsystems of equal dimension.
    pub fn swap(&mut self, a: usize, b: usize) -> Result<()> {
        check_targets(&[a, b], self.dims.len())?;
        if self.dims[a] != self.dims[b] {
            return Err(LinalgError::DimensionMismatch { expected: self.dims[a], got: self.dims[b] });
        }
        let st = strides(&self.dims);
        let n = self.dims[a];
        for base in base_indices(&self.dims, &st, &[a, b]) {
            for i in 0..n {
                for j in (i + 1)..n {
                    self.amplitudes.swap(base + i * st[a] + j * st[b], base + j * st[a] + i * st[b]);
                }
            }
        }
        Ok(())
    }

    /// Unnormalised state of the remaining subsystems after projecting
    /// `subsystem` onto `|level⟩`.
    pub fn component(&self, subsystem: usize, level: usize) -> Result<Self> {
        check_targets(&[subsystem], self.dims.len())?;
        if level >= self.dims[subsystem] {
            return Err(LinalgError::DimensionMismatch { expected: self.dims[subsystem], got: level });
        }
        let st = strides(&self.dims);
        let amplitudes = base_indices(&self.dims, &st, &[subsystem])
            .into_iter()
            .map(|b| self.amplitudes[b + level * st[subsystem]])
            .collect();
        let mut dims = self.dims.clone();
        dims.remove(subsystem);
        Ok(Self { amplitudes, dims })
    }

    /// Appends a subsystem in state `factor` as the least significant factor.
    pub fn extend(&self, factor: &[C64]) -> Self {
        let mut dims = self.dims.clone();
        dims.push(factor.len());
        Self { amplitudes: vector::kron(&self.amplitudes, factor), dims }
    }

    pub fn density(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes, &self.amplitudes)
    }

    /// Reduced density operator on `keep`, in ascending subsystem order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<ComplexMatrix> {
        check_targets(keep, self.dims.len())?;
        let mut keep: Vec<usize> = keep.to_vec();
        keep.sort_unstable();
        let traced: Vec<usize> = (0..self.dims.len()).filter(|i| !keep.contains(i)).collect();
        let st = strides(&self.dims);
        let k_off = target_offsets(&self.dims, &st, &keep);
        let t_off = target_offsets(&self.dims, &st, &traced);
        let dk = k_off.len();
        let mut rho = ComplexMatrix::zeros(dk, dk);
        for i in 0..dk {
            for j in i..dk {
                let v: C64 = t_off
                    .iter()
                    .map(|t| self.amplitudes[k_off[i] + t] * self.amplitudes[k_off[j] + t].conj())
                    .sum();
                rho[(i, j)] = v;
                rho[(j, i)] = v.conj();
            }
        }
        Ok(rho)
    }
}

/// Partial trace of a density operator on subsystems with dimensions `dims`,
/// keeping `keep` in ascending order.
pub fn partial_trace_density(rho: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    let dim: usize = dims.iter().product();
    if rho.rows() != dim || rho.cols() != dim {
        return Err(LinalgError::DimensionMismatch { expected: dim, got: rho.rows() });
    }
    check_targets(keep, dims.len())?;
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep.contains(i)).collect();
    let st = strides(dims);
    let k_off = target_offsets(dims, &st, &keep);
    let t_off = target_offsets(dims, &st, &traced);
    Ok(ComplexMatrix::from_fn(k_off.len(), k_off.len(), |i, j| {
        t_off.iter().map(|t| rho[(k_off[i] + t, k_off[j] + t)]).sum()
    }))
}

/// Embeds `op` acting on `targets` into the full space with dimensions `dims`.
pub fn embed_operator(op: &ComplexMatrix, targets: &[usize], dims: &[usize]) -> Result<ComplexMatrix> {
    let dim: usize = dims.iter().product();
    let mut columns = Vec::with_capacity(dim);
    for c in 0..dim {
        let mut s = StateVector::new(vector::basis(dim, c), dims.to_vec())?;
        s.apply(op, targets)?;
        columns.push(s.into_amplitudes());
    }
    Ok(ComplexMatrix::from_columns(&columns))
}
