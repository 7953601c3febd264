//! Runnable witnesses, twirl distances, anti-concentration values and
//! superblock checks, each producing an [`ExperimentReport`].

pub mod anticoncentration;
pub mod catalog;
pub mod designs;
pub mod montecarlo;
pub mod ppt;
pub mod report;
pub mod witnesses;

pub use anticoncentration::{
    chi_from_transfer, matchgate_patch_step, matchgate_transfer_chi, matchgate_transfer_matrix_corrected, matchgate_transfer_matrix_displayed,
    matchgate_uniform_chi, matchgate_uniform_chi_exact, matchgate_uniform_chi_f64, orthogonal_anticoncentration,
    orthogonal_wall_bound, orthogonal_wall_sum, AntiConcentrationMode,
};
pub use catalog::{list_experiments, run_experiment, CatalogEntry};
pub use designs::{clifford_enumeration_deviation, epr_relative_error_diagnostic, gluing_check, haar_fourth_moment, t4_witness_gap};
pub use montecarlo::{monte_carlo, monte_carlo_vec, Estimate, Welford};
pub use ppt::{distinct_projector, is_distinct, ppt_twirl_distance, ppt_twirl_distance_pure_power, DistinctFlavor};
pub use report::{ExperimentReport, Params};
pub use witnesses::{
    clifford4_distinguisher, matchgate_state_witness, orthogonal_epr_distinguisher, state_design_witness,
    symplectic_j_distinguisher, symplectic_state_witness,
};

use crate::circuits::{sample_circuit, sample_group_element, Boundary, CircuitInstance, CircuitSpec, GateElement};
use crate::error::{Error, Result};
use crate::groups::clifford::CliffordTableau;
use crate::groups::GroupTag;
use crate::linalg::CMatrix;
use crate::operator::PauliString;
use crate::rng::RngStream;
use crate::sim::GaussianState;
use serde_json::json;
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub seed: u64,
    pub workers: usize,
}

impl RunOptions {
    pub fn new(seed: u64) -> Self {
        RunOptions { seed, workers: 1 }
    }

    /// Root stream of an experiment: the stream id is derived from its name.
    pub fn stream(&self, id: &str) -> RngStream {
        let h = Sha256::digest(id.as_bytes());
        RngStream::new(self.seed, u64::from_le_bytes(h[..8].try_into().unwrap()))
    }
}

/// Which unitaries an experiment averages over.
#[derive(Clone, Debug, PartialEq)]
pub enum Ensemble {
    /// The group's uniform distribution on all n qubits.
    Haar,
    /// The depth-0 circuit.
    Identity,
    Circuit(CircuitSpec),
}

impl Ensemble {
    /// Open-boundary 1D brickwork of Haar bricks: arity 3 for symplectic
    /// bricks, 2 otherwise.
    pub fn brickwork(group: GroupTag, n: usize, depth: usize) -> Result<Self> {
        let r = if group == GroupTag::Sp { 3 } else { 2 };
        Ok(Ensemble::Circuit(CircuitSpec::brickwork_1d(n, depth, group, r.min(n), Boundary::Open)?))
    }

    pub fn parse(name: &str, group: GroupTag, n: usize, depth: usize) -> Result<Self> {
        match name {
            "haar" => Ok(Ensemble::Haar),
            "identity" => Ok(Ensemble::Identity),
            "brickwork" => Self::brickwork(group, n, depth),
            _ => Err(Error::InvalidInput(format!("unknown ensemble {name}"))),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Ensemble::Haar => "haar".into(),
            Ensemble::Identity => "identity".into(),
            Ensemble::Circuit(c) => format!("circuit(depth={})", c.depth()),
        }
    }

    fn check_n(&self, n: usize) -> Result<()> {
        match self {
            Ensemble::Circuit(c) if c.n() != n => Err(Error::DimensionMismatch(format!("circuit on {} qubits, experiment on {n}", c.n()))),
            _ => Ok(()),
        }
    }
}

/// Dense unitary drawn from the ensemble.
pub(crate) fn draw_dense(group: GroupTag, ens: &Ensemble, n: usize, s: &RngStream) -> Result<CMatrix> {
    match ens {
        Ensemble::Haar => sample_group_element(group, n, &mut s.rng())?.to_local_dense(n),
        Ensemble::Identity => Ok(CMatrix::identity(1 << n)),
        Ensemble::Circuit(c) => sample_circuit(c, s)?.to_dense(),
    }
}

/// A Clifford draw kept symbolic.
pub(crate) enum CliffordDraw {
    Global(CliffordTableau),
    Circuit(CircuitInstance),
}

impl CliffordDraw {
    /// U P U†
    pub fn conjugate(&self, p: &PauliString) -> Result<PauliString> {
        match self {
            CliffordDraw::Global(t) => Ok(t.conjugate(p)),
            CliffordDraw::Circuit(c) => {
                let mut q = *p;
                for g in &c.gates {
                    match &g.element {
                        GateElement::Identity => {}
                        GateElement::Clifford(t) => q = t.conjugate_on(&q, &g.support),
                        _ => return Err(Error::Routing("Clifford witness needs Clifford gates".into())),
                    }
                }
                Ok(q)
            }
        }
    }
}

pub(crate) fn draw_clifford(ens: &Ensemble, n: usize, s: &RngStream) -> Result<CliffordDraw> {
    Ok(match ens {
        Ensemble::Haar => CliffordDraw::Global(crate::groups::clifford::sample_uniform_clifford(n, &mut s.rng())),
        Ensemble::Identity => CliffordDraw::Global(CliffordTableau::identity(n)),
        Ensemble::Circuit(c) => CliffordDraw::Circuit(sample_circuit(c, s)?),
    })
}

/// Output state U|0ⁿ⟩ of a matchgate draw.
pub(crate) fn draw_gaussian(ens: &Ensemble, n: usize, s: &RngStream) -> Result<GaussianState> {
    let mut st = GaussianState::vacuum(n);
    match ens {
        Ensemble::Haar => st.apply_rotation(&crate::groups::matchgate::sample_haar_matchgate(n, &mut s.rng())),
        Ensemble::Identity => {}
        Ensemble::Circuit(c) => st.apply_circuit(&sample_circuit(c, s)?)?,
    }
    Ok(st)
}

pub(crate) fn base_params(n: usize, ens: &Ensemble, samples: u64) -> Params {
    let mut p = Params::new();
    p.insert("n".into(), json!(n));
    p.insert("ensemble".into(), json!(ens.label()));
    p.insert("samples".into(), json!(samples));
    p
}

pub(crate) fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, f64)> {
    let t = std::time::Instant::now();
    let v = f()?;
    Ok((v, t.elapsed().as_secs_f64()))
}
