use linalg_core::{ComplexMatrix, StateVector, C64, UNITARY_TOL};
use ls_engine::INTERFACE;

use crate::transfer::Transfer;
use crate::{IoError, Result};

pub const DEFAULT_ENV_DIM: usize = 2;
pub const MAX_ENV_DIM: usize = 4;

/// Output transfer, unitary target on `I ⊗ E`, input transfer.
///
/// Simulated layout: `S, I, R1 … Rm, E`, where `m` is the larger register
/// count of the two transfers. Both transfers act on the leading qubits
/// and share the registers.
#[derive(Clone, Debug)]
pub struct IoChannel {
    output: Transfer,
    target: ComplexMatrix,
    input: Transfer,
    xi_out: f64,
    xi_in: f64,
}

fn check_xi(xi: f64) -> Result<()> {
    if (0.0..=1.0).contains(&xi) {
        Ok(())
    } else {
        Err(IoError::InvalidXi(xi))
    }
}

impl IoChannel {
    /// `target` is a unitary on `qubit ⊗ E`; its size fixes `dim E`.
    pub fn new(output: Transfer, target: ComplexMatrix, input: Transfer, xi_out: f64, xi_in: f64) -> Result<Self> {
        check_xi(xi_out)?;
        check_xi(xi_in)?;
        if !target.is_square() || target.rows() % 2 != 0 {
            return Err(IoError::Dimension(format!("target is {}x{}", target.rows(), target.cols())));
        }
        let env = target.rows() / 2;
        if !(1..=MAX_ENV_DIM).contains(&env) {
            return Err(IoError::EnvDim(env));
        }
        target.require_unitary(UNITARY_TOL)?;
        Ok(Self { output, target, input, xi_out, xi_in })
    }

    pub fn output(&self) -> &Transfer {
        &self.output
    }

    pub fn input(&self) -> &Transfer {
        &self.input
    }

    pub fn target(&self) -> &ComplexMatrix {
        &self.target
    }

    pub fn xi_out(&self) -> f64 {
        self.xi_out
    }

    pub fn xi_in(&self) -> f64 {
        self.xi_in
    }

    pub fn env_dim(&self) -> usize {
        self.target.rows() / 2
    }

    /// Register qubits shared by the two transfers.
    pub fn registers(&self) -> usize {
        self.output.qubits().max(self.input.qubits()) - 2
    }

    /// `dim(S ⊗ E)`
    pub fn port_dim(&self) -> usize {
        2 * self.env_dim()
    }

    pub(crate) fn layout(&self) -> Vec<usize> {
        let mut dims = vec![2; 2 + self.registers()];
        dims.push(self.env_dim());
        dims
    }

    pub(crate) fn placement(qubits: usize, offset: usize) -> Vec<usize> {
        (offset..offset + qubits).collect()
    }

    pub(crate) fn env_index(&self, offset: usize) -> usize {
        offset + 2 + self.registers()
    }

    /// Output, then the target on `I, E`, then input, on a state whose
    /// `S` sits at `offset`.
    pub(crate) fn propagate(&self, state: &mut StateVector, offset: usize) -> Result<()> {
        self.output.apply(state, &Self::placement(self.output.qubits(), offset))?;
        state.apply(&self.target, &[offset + INTERFACE, self.env_index(offset)])?;
        self.input.apply(state, &Self::placement(self.input.qubits(), offset))?;
        Ok(())
    }

    /// Full-layout state `|Ψ⟩_SE ⊗ |0⟩_IR`.
    pub(crate) fn embed(&self, psi: &[C64]) -> StateVector {
        let dims = self.layout();
        let block: usize = dims[1..dims.len() - 1].iter().product::<usize>() * self.env_dim();
        let mut amps = vec![C64::new(0.0, 0.0); 2 * block];
        let de = self.env_dim();
        for (j, z) in psi.iter().enumerate() {
            amps[(j / de) * block + j % de] = *z;
        }
        StateVector::new(amps, dims).expect("layout dimensions agree")
    }

    /// Final full-layout state for the pure port state `psi`.
    pub fn propagate_pure(&self, psi: &[C64]) -> Result<StateVector> {
        if psi.len() != self.port_dim() {
            return Err(IoError::Dimension(format!("input has length {}, expected {}", psi.len(), self.port_dim())));
        }
        let mut st = self.embed(psi);
        self.propagate(&mut st, 0)?;
        Ok(st)
    }

    /// Choi matrix `Σ_jk |j⟩⟨k| ⊗ Φ(|j⟩⟨k|)`, obtained by sending one half of
    /// the unnormalised maximally entangled state through the channel.
    pub fn choi_matrix(&self) -> Result<ComplexMatrix> {
        let d = self.port_dim();
        let mut dims = vec![d];
        dims.extend(self.layout());
        let inner: usize = dims[1..].iter().product();
        let block = inner / 2;
        let de = self.env_dim();
        let mut amps = vec![C64::new(0.0, 0.0); d * inner];
        for j in 0..d {
            amps[j * inner + (j / de) * block + j % de] = C64::new(1.0, 0.0);
        }
        let mut st = StateVector::new(amps, dims.clone())?;
        self.propagate(&mut st, 1)?;
        Ok(st.partial_trace(&[0, 1, dims.len() - 1])?)
    }

    /// `Φ` applied to an arbitrary operator on `S ⊗ E`, by linearity over
    /// the images of the port basis.
    pub fn apply_phi(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let d = self.port_dim();
        if x.rows() != d || x.cols() != d {
            return Err(IoError::Dimension(format!("operator is {}x{}, expected {d}x{d}", x.rows(), x.cols())));
        }
        let images: Vec<StateVector> = (0..d)
            .map(|j| self.propagate_pure(&linalg_core::vector::basis(d, j)))
            .collect::<Result<_>>()?;
        let de = self.env_dim();
        let total = images[0].dim();
        let block = total / 2;
        let mid = block / de;
        let port = |s: usize, t: usize, e: usize| s * block + t * de + e;
        Ok(ComplexMatrix::from_fn(d, d, |a, b| {
            let (sa, ea, sb, eb) = (a / de, a % de, b / de, b % de);
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..d {
                for k in 0..d {
                    let xjk = x[(j, k)];
                    if xjk == C64::new(0.0, 0.0) {
                        continue;
                    }
                    let (vj, vk) = (images[j].amplitudes(), images[k].amplitudes());
                    let s: C64 = (0..mid).map(|t| vj[port(sa, t, ea)] * vk[port(sb, t, eb)].conj()).sum();
                    acc += xjk * s;
                }
            }
            acc
        }))
    }
}

/// `Φ(|ψ⟩⟨ψ|)` on `S ⊗ E`: the output transfer, the target on `I ⊗ E`, the
/// input transfer, and a partial trace over `I` and the registers.
pub fn compose_phi(ch: &IoChannel, psi: &[C64]) -> Result<ComplexMatrix> {
    let n: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    if (n - 1.0).abs() > 1e-10 {
        return Err(IoError::InputNotNormalized(n));
    }
    let st = ch.propagate_pure(psi)?;
    let last = st.subsystem_dims().len() - 1;
    Ok(st.partial_trace(&[0, last])?)
}
