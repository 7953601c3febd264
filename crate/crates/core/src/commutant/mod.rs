//! Commutants of k-fold tensor powers, Gram/Weingarten tables and exact twirls.
//!
//! Twirl: Φ(A) = Σ_{σ,τ} Wg(τ,σ) tr(σ†A) τ with Wg the pseudo-inverse of the
//! Gram matrix G(σ,τ) = tr(σ†τ).

pub mod lagrangian;
pub mod pairings;
pub mod vk;

pub use lagrangian::{enumerate_sigma_kk, StochasticLagrangianSubspace};
pub use pairings::{brauer_compose, enumerate_pairings, permutations, BrauerProduct, Pairing};
pub use vk::matchgate_basis_vk;

use crate::error::{Error, Result};
use crate::groups::symplectic::SymplecticForm;
use crate::groups::GroupTag;
use crate::linalg::{pinv, CMatrix, RMatrix, C64, ZERO};
use crate::operator::{apply_gate, check_cap, permutation_matrix_1q, DenseOperator, FactorizedOperator, SparseOperator};
use crate::rng::complex_normal;
use rand::Rng;
use serde::{Deserialize, Serialize};

pub const PINV_CUTOFF: f64 = 1e-10;

/// Single-qubit J = iY.
pub fn j_local() -> CMatrix {
    CMatrix::from_real(2, 2, &[0.0, 1.0, -1.0, 0.0])
}

pub fn permutation_operator(perm: &[usize], n: usize) -> FactorizedOperator {
    FactorizedOperator::uniform(n, perm.len(), permutation_matrix_1q(perm))
}

pub fn rep_orthogonal(s: &Pairing, n: usize) -> FactorizedOperator {
    FactorizedOperator::uniform(n, s.k, s.local_factor(None))
}

/// Brauer representation with J factors on the qubits selected by the form.
pub fn rep_symplectic(s: &Pairing, n: usize, form: &SymplecticForm) -> FactorizedOperator {
    let j = j_local();
    let with_j = s.local_factor(Some(&j));
    let plain = s.local_factor(None);
    let factors = (0..n).map(|q| if (form.x >> q) & 1 == 1 { with_j.clone() } else { plain.clone() }).collect();
    FactorizedOperator::new(n, s.k, factors)
}

pub fn r_subspace(t: &StochasticLagrangianSubspace, n: usize) -> FactorizedOperator {
    FactorizedOperator::uniform(n, t.k, t.local_factor())
}

pub fn r_subspace_dense(t: &StochasticLagrangianSubspace, n: usize) -> Result<DenseOperator> {
    r_subspace(t, n).to_dense()
}

/// Π_o = 2ⁿ|Ω⟩⟨Ω| on two copies.
pub fn pi_o(n: usize) -> FactorizedOperator {
    rep_orthogonal(&Pairing::from_pairs(2, &[(0, 1), (2, 3)]).unwrap(), n)
}

/// Positive Π_s = 2ⁿ (J⊗I)|Ω⟩⟨Ω|(J⊗I)†. Equals −R_Sp({{1,2},{3,4}}).
pub fn pi_s(form: &SymplecticForm) -> FactorizedOperator {
    let p = Pairing::from_pairs(2, &[(0, 1), (2, 3)]).unwrap();
    let j = j_local();
    let omega = p.local_factor(None);
    let ls = j.kron(&CMatrix::identity(2));
    let pos = ls.matmul(&omega).matmul(&ls.adjoint());
    let factors = (0..form.n).map(|q| if (form.x >> q) & 1 == 1 { pos.clone() } else { omega.clone() }).collect();
    FactorizedOperator::new(form.n, 2, factors)
}

#[derive(Clone, Debug)]
pub enum BasisElement {
    Factorized(FactorizedOperator),
    Dense(DenseOperator),
}

impl BasisElement {
    pub fn to_sparse(&self) -> SparseOperator {
        match self {
            BasisElement::Factorized(f) => f.to_sparse(),
            BasisElement::Dense(d) => SparseOperator::from_dense(d.mat()),
        }
    }

    pub fn to_dense(&self) -> Result<DenseOperator> {
        match self {
            BasisElement::Factorized(f) => f.to_dense(),
            BasisElement::Dense(d) => Ok(d.clone()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CommutantBasis {
    pub group: GroupTag,
    pub n: usize,
    pub k: usize,
    pub labels: Vec<String>,
    pub elements: Vec<BasisElement>,
    /// Brauer labels for O/Sp, permutations for U.
    pub pairings: Vec<Pairing>,
}

impl CommutantBasis {
    pub fn build(group: GroupTag, n: usize, k: usize) -> Result<Self> {
        match group {
            GroupTag::Sp => Self::symplectic(n, k, &SymplecticForm::standard(n)?),
            _ => Self::build_inner(group, n, k, None),
        }
    }

    pub fn symplectic(n: usize, k: usize, form: &SymplecticForm) -> Result<Self> {
        if form.n != n {
            return Err(Error::DimensionMismatch("form acts on a different qubit count".into()));
        }
        Self::build_inner(GroupTag::Sp, n, k, Some(form))
    }

    fn build_inner(group: GroupTag, n: usize, k: usize, form: Option<&SymplecticForm>) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::InvalidInput("n and k must be positive".into()));
        }
        let mut labels = vec![];
        let mut elements = vec![];
        let mut prs = vec![];
        match group {
            GroupTag::U => {
                for p in permutations(k) {
                    labels.push(format!("perm{:?}", p.iter().map(|c| c + 1).collect::<Vec<_>>()));
                    prs.push(Pairing::from_permutation(&p));
                    elements.push(BasisElement::Factorized(permutation_operator(&p, n)));
                }
            }
            GroupTag::O | GroupTag::Sp => {
                for p in enumerate_pairings(k)? {
                    labels.push(p.to_string());
                    let e = match form {
                        Some(f) => rep_symplectic(&p, n, f),
                        None => rep_orthogonal(&p, n),
                    };
                    elements.push(BasisElement::Factorized(e));
                    prs.push(p);
                }
            }
            GroupTag::Cl => {
                if n + 1 < k {
                    return Err(Error::BasisNotIndependent(format!("Clifford commutant needs n ≥ k−1 (n={n}, k={k})")));
                }
                for t in enumerate_sigma_kk(k)? {
                    labels.push(t.to_string());
                    elements.push(BasisElement::Factorized(r_subspace(&t, n)));
                }
            }
            GroupTag::M => {
                if k != 2 {
                    return Err(Error::InvalidInput("matchgate commutant is implemented for k = 2".into()));
                }
                for j in 0..=2 * n {
                    labels.push(format!("V_{j}"));
                    elements.push(BasisElement::Dense(matchgate_basis_vk(n, j)?));
                }
            }
        }
        Ok(CommutantBasis { group, n, k, labels, elements, pairings: prs })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        1 << (self.n * self.k)
    }

    /// tr(σ_i† σ_j).
    pub fn inner(&self, i: usize, j: usize) -> C64 {
        match (&self.elements[i], &self.elements[j]) {
            (BasisElement::Factorized(a), BasisElement::Factorized(b)) => a.inner(b),
            (BasisElement::Dense(a), BasisElement::Dense(b)) => a.inner(b),
            (a, b) => {
                let sa = a.to_sparse();
                let db = b.to_dense().expect("dense basis element fits the cap");
                sa.entries.iter().map(|&(r, c, v)| v.conj() * db.mat()[(r, c)]).sum()
            }
        }
    }

    pub fn gram(&self) -> Result<RMatrix> {
        let m = self.len();
        let mut g = RMatrix::zeros(m, m);
        for i in 0..m {
            for j in i..m {
                let v = self.inner(i, j);
                if v.im.abs() > 1e-9 * v.norm().max(1.0) {
                    return Err(Error::InvalidInput(format!("complex Gram entry {v} at ({i},{j})")));
                }
                g[(i, j)] = v.re;
                g[(j, i)] = v.re;
            }
        }
        Ok(g)
    }

    pub fn weingarten(&self) -> Result<WeingartenTable> {
        let gram = self.gram()?;
        let wg = pinv(&gram, PINV_CUTOFF);
        Ok(WeingartenTable { group: self.group, n: self.n, k: self.k, labels: self.labels.clone(), gram, wg })
    }

    /// c_σ = tr(σ† A) for a sparse A.
    pub fn coefficients_sparse(&self, a: &SparseOperator) -> Vec<C64> {
        let dense = a.to_dense();
        self.elements
            .iter()
            .map(|e| e.to_sparse().entries.iter().map(|&(r, c, v)| v.conj() * dense[(r, c)]).sum())
            .collect()
    }

    pub fn coefficients_dense(&self, a: &DenseOperator) -> Vec<C64> {
        self.elements
            .iter()
            .map(|e| match e {
                BasisElement::Dense(d) => d.inner(a),
                f => f.to_sparse().entries.iter().map(|&(r, c, v)| v.conj() * a.mat()[(r, c)]).sum(),
            })
            .collect()
    }

    /// c_σ = ⟨ψ|σ†|ψ⟩ for A = |ψ⟩⟨ψ| on the full k-copy space.
    pub fn coefficients_pure(&self, psi: &[C64]) -> Vec<C64> {
        self.elements.iter().map(|e| e.to_sparse().sandwich(psi, psi).conj()).collect()
    }

    pub fn coefficients_factorized(&self, a: &FactorizedOperator) -> Result<Vec<C64>> {
        self.elements
            .iter()
            .map(|e| match e {
                BasisElement::Factorized(f) => Ok(f.inner(a)),
                BasisElement::Dense(_) => Err(Error::Unfactorized),
            })
            .collect()
    }

    pub fn combine_sparse(&self, d: &[C64]) -> SparseOperator {
        let mut entries = vec![];
        for (e, &w) in self.elements.iter().zip(d) {
            if w == ZERO {
                continue;
            }
            entries.extend(e.to_sparse().entries.into_iter().map(|(r, c, v)| (r, c, v * w)));
        }
        SparseOperator { dim: self.dim(), entries }
    }

    pub fn combine(&self, d: &[C64]) -> Result<DenseOperator> {
        check_cap(self.dim())?;
        DenseOperator::with_tag(self.combine_sparse(d).to_dense(), self.n, self.k)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeingartenTable {
    pub group: GroupTag,
    pub n: usize,
    pub k: usize,
    pub labels: Vec<String>,
    pub gram: RMatrix,
    pub wg: RMatrix,
}

impl WeingartenTable {
    /// max |Wg·G·Wg − Wg| relative to max |Wg|.
    pub fn pinv_residual(&self) -> f64 {
        let r = self.wg.matmul(&self.gram).matmul(&self.wg).sub(&self.wg);
        r.max_abs() / self.wg.max_abs().max(1e-300)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("table serializes")
    }

    /// d = Wg · c
    pub fn weights(&self, c: &[C64]) -> Vec<C64> {
        let m = self.wg.rows();
        (0..m).map(|t| (0..m).map(|s| c[s] * self.wg[(t, s)]).sum()).collect()
    }
}

/// Basis and table bundled for repeated twirls.
#[derive(Clone, Debug)]
pub struct ExactTwirl {
    pub basis: CommutantBasis,
    pub table: WeingartenTable,
}

impl ExactTwirl {
    pub fn new(group: GroupTag, n: usize, k: usize) -> Result<Self> {
        Self::from_basis(CommutantBasis::build(group, n, k)?)
    }

    pub fn from_basis(basis: CommutantBasis) -> Result<Self> {
        let table = basis.weingarten()?;
        Ok(ExactTwirl { basis, table })
    }

    pub fn weights_dense(&self, a: &DenseOperator) -> Vec<C64> {
        self.table.weights(&self.basis.coefficients_dense(a))
    }

    pub fn apply(&self, a: &DenseOperator) -> Result<DenseOperator> {
        if a.dim() != self.basis.dim() {
            return Err(Error::DimensionMismatch(format!("operator dim {} vs {}", a.dim(), self.basis.dim())));
        }
        self.basis.combine(&self.weights_dense(a))
    }

    /// tr(O Φ(A)) for factorized A and O, without forming any dense matrix.
    pub fn expectation_factorized(&self, input: &FactorizedOperator, obs: &FactorizedOperator) -> Result<C64> {
        let d = self.table.weights(&self.basis.coefficients_factorized(input)?);
        let o_adj = obs.adjoint();
        // tr(O τ) = tr((O†)† τ)
        let t = self.basis.coefficients_factorized(&o_adj)?;
        Ok(d.iter().zip(&t).map(|(a, b)| a * b.conj()).sum())
    }
}

pub fn exact_twirl(group: GroupTag, n: usize, k: usize, a: &DenseOperator) -> Result<DenseOperator> {
    ExactTwirl::new(group, n, k)?.apply(a)
}

/// Φ_a(A) = 2^{−nk} Σ_π tr(A π^{−1}) π.
pub fn approx_haar_twirl(n: usize, k: usize, a: &DenseOperator) -> Result<DenseOperator> {
    let basis = CommutantBasis::build(GroupTag::U, n, k)?;
    let c = basis.coefficients_dense(a);
    let scale = 0.5f64.powi((n * k) as i32);
    let d: Vec<C64> = c.iter().map(|v| v * scale).collect();
    basis.combine(&d)
}

/// Σ_{π ∈ S_k, π ≠ id} |Wg(id, π)| read from the exact O or Sp table.
pub fn weingarten_sum_diagnostic(group: GroupTag, n: usize, k: usize) -> Result<f64> {
    if !matches!(group, GroupTag::O | GroupTag::Sp) || k > 4 {
        return Err(Error::InvalidInput("diagnostic is defined for O/Sp with k ≤ 4".into()));
    }
    let basis = if group == GroupTag::Sp {
        // J factors only touch non-permutation pairings; the table does not
        // need odd n when the form is placed on a single qubit.
        let form = SymplecticForm::new(n, 1)?;
        CommutantBasis::symplectic(n, k, &form)?
    } else {
        CommutantBasis::build(group, n, k)?
    };
    let table = basis.weingarten()?;
    let id = Pairing::identity(k);
    let i0 = basis.pairings.iter().position(|p| *p == id).unwrap();
    Ok(basis
        .pairings
        .iter()
        .enumerate()
        .filter(|(i, p)| *i != i0 && p.is_permutation())
        .map(|(i, _)| table.wg[(i0, i)].abs())
        .sum())
}

/// Applies g^{⊗k} (g on all n qubits of every copy) to a k-copy vector.
pub fn apply_tensor_power(v: &mut [C64], n: usize, k: usize, g: &CMatrix) {
    for c in 0..k {
        let pos: Vec<usize> = (c * n..(c + 1) * n).collect();
        apply_gate(v, n * k, &pos, g);
    }
}

/// Relative commutator size of a basis element with g^{⊗k}. Exact (max-norm)
/// for dim ≤ 256; above that, measured on random probe vectors.
pub fn commutation_residual<R: Rng + ?Sized>(e: &BasisElement, n: usize, k: usize, g: &CMatrix, rng: &mut R) -> f64 {
    let dim = 1usize << (n * k);
    let sp = e.to_sparse();
    if dim <= 256 {
        let b = e.to_dense().unwrap();
        let conj = b.conjugate_tensor_power(g).unwrap();
        return conj.sub(&b).max_abs() / b.max_abs().max(1e-300);
    }
    let mut worst = 0.0f64;
    for _ in 0..4 {
        let v: Vec<C64> = (0..dim).map(|_| complex_normal(rng)).collect();
        let mut lhs = sp.apply(&v);
        apply_tensor_power(&mut lhs, n, k, g);
        let mut gv = v.clone();
        apply_tensor_power(&mut gv, n, k, g);
        let rhs = sp.apply(&gv);
        let num: f64 = lhs.iter().zip(&rhs).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
        let den: f64 = lhs.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt().max(1e-300);
        worst = worst.max(num / den);
    }
    worst
}
