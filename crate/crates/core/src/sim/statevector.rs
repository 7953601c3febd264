use crate::circuits::CircuitInstance;
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64, ONE, ZERO};
use crate::operator::{apply_gate, check_cap, DenseOperator, PauliString, PureState};

/// Dense amplitudes over `n` qubits (for multi-copy states n = copies · qubits).
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    pub n: usize,
    pub amps: Vec<C64>,
}

impl StateVector {
    pub fn zero(n: usize) -> Result<Self> {
        check_cap(1 << n)?;
        let mut amps = vec![ZERO; 1 << n];
        amps[0] = ONE;
        Ok(StateVector { n, amps })
    }

    pub fn from_pure(p: &PureState) -> Self {
        StateVector { n: p.n, amps: p.amplitudes().to_vec() }
    }

    pub fn apply_local(&mut self, support: &[usize], g: &CMatrix) {
        apply_gate(&mut self.amps, self.n, support, g);
    }

    pub fn apply_circuit(&mut self, c: &CircuitInstance) -> Result<()> {
        if c.n != self.n {
            return Err(Error::DimensionMismatch(format!("circuit on {} qubits, state on {}", c.n, self.n)));
        }
        for g in &c.gates {
            let local = g.element.to_local_dense(g.support.len())?;
            self.apply_local(&g.support, &local);
        }
        Ok(())
    }

    /// Applies the circuit's adjoint (gates reversed and inverted).
    pub fn apply_circuit_inverse(&mut self, c: &CircuitInstance) -> Result<()> {
        for g in c.gates.iter().rev() {
            let local = g.element.to_local_dense(g.support.len())?.adjoint();
            self.apply_local(&g.support, &local);
        }
        Ok(())
    }

    /// Applies the same circuit to each of `k` copies of an n-qubit register
    /// stored in this (k·n)-qubit vector.
    pub fn apply_circuit_copies(&mut self, c: &CircuitInstance, k: usize) -> Result<()> {
        if c.n * k != self.n {
            return Err(Error::DimensionMismatch("copy count does not match".into()));
        }
        for g in &c.gates {
            let local = g.element.to_local_dense(g.support.len())?;
            for copy in 0..k {
                let pos: Vec<usize> = g.support.iter().map(|q| copy * c.n + q).collect();
                apply_gate(&mut self.amps, self.n, &pos, &local);
            }
        }
        Ok(())
    }

    pub fn pauli_expectation(&self, p: &PauliString) -> C64 {
        assert_eq!(p.n, self.n);
        let mut acc = ZERO;
        for (i, &a) in self.amps.iter().enumerate() {
            if a == ZERO {
                continue;
            }
            let (j, amp) = p.apply_basis(i);
            acc += self.amps[j].conj() * amp * a;
        }
        acc
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// ⟨ψ|A|ψ⟩.
pub fn dense_expectation(state: &StateVector, obs: &DenseOperator) -> Result<C64> {
    if obs.dim() != state.amps.len() {
        return Err(Error::DimensionMismatch(format!("observable dim {} vs state dim {}", obs.dim(), state.amps.len())));
    }
    let av = obs.mat().mul_vec(&state.amps);
    Ok(state.amps.iter().zip(&av).map(|(a, b)| a.conj() * b).sum())
}
