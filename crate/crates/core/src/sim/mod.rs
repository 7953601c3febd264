//! Evaluation backends: dense statevector, stabilizer tableau, and Gaussian
//! (Majorana covariance) states.

pub mod gaussian;
pub mod stabilizer;
pub mod statevector;

pub use gaussian::{gaussian_amplitude_sq, gaussian_majorana_quadratic, pfaffian, GaussianState};
pub use stabilizer::StabilizerState;
pub use statevector::{dense_expectation, StateVector};

use crate::circuits::CircuitInstance;
use crate::error::Result;
use crate::operator::DenseOperator;

/// Anything a circuit can act on.
#[derive(Clone, Debug)]
pub enum Target {
    Dense(StateVector),
    Stabilizer(StabilizerState),
    Gaussian(GaussianState),
    /// k-copy operator X ↦ U^{⊗k} X U^{†⊗k}.
    Operator(DenseOperator),
}

pub fn apply_circuit(c: &CircuitInstance, target: &mut Target) -> Result<()> {
    match target {
        Target::Dense(s) => s.apply_circuit(c),
        Target::Stabilizer(s) => s.apply_circuit(c),
        Target::Gaussian(s) => s.apply_circuit(c),
        Target::Operator(op) => {
            let (n, k) = op.tag().ok_or(crate::Error::Unfactorized)?;
            if n != c.n {
                return Err(crate::Error::DimensionMismatch("operator and circuit sizes differ".into()));
            }
            let mut m = op.mat().clone();
            for g in &c.gates {
                let local = g.element.to_local_dense(g.support.len())?;
                for copy in 0..k {
                    crate::operator::conjugate_gate_on_copy(&mut m, n, k, copy, &g.support, &local);
                }
            }
            *op = DenseOperator::with_tag(m, n, k)?;
            Ok(())
        }
    }
}
