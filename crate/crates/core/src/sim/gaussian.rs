//! Pure fermionic Gaussian states through their Majorana covariance matrix,
//! ⟨γ_a γ_b⟩ = δ_ab + i Γ_ab.

use crate::circuits::{CircuitInstance, GateElement};
use crate::error::{Error, Result};
use crate::groups::matchgate::MajoranaRotation;
use crate::linalg::{RMatrix, C64};

#[derive(Clone, Debug, PartialEq)]
pub struct GaussianState {
    pub n: usize,
    pub gamma: RMatrix,
}

pub fn vacuum_covariance(n: usize) -> RMatrix {
    let mut g = RMatrix::zeros(2 * n, 2 * n);
    for q in 0..n {
        g[(2 * q, 2 * q + 1)] = 1.0;
        g[(2 * q + 1, 2 * q)] = -1.0;
    }
    g
}

impl GaussianState {
    pub fn vacuum(n: usize) -> Self {
        GaussianState { n, gamma: vacuum_covariance(n) }
    }

    pub fn from_covariance(n: usize, gamma: RMatrix) -> Result<Self> {
        if gamma.rows() != 2 * n || !gamma.add(&gamma.transpose()).max_abs().lt(&1e-9) {
            return Err(Error::InvalidInput("covariance must be 2n×2n antisymmetric".into()));
        }
        let s = GaussianState { n, gamma };
        if !s.is_pure(1e-9) {
            return Err(Error::InvalidInput("covariance is not pure (ΓΓᵀ ≠ I)".into()));
        }
        Ok(s)
    }

    pub fn is_pure(&self, tol: f64) -> bool {
        self.gamma.matmul(&self.gamma.transpose()).sub(&RMatrix::identity(2 * self.n)).max_abs() <= tol
    }

    /// State U(o)|ψ⟩: Γ ↦ oᵀ Γ o.
    pub fn apply_rotation(&mut self, o: &MajoranaRotation) {
        self.gamma = o.o.transpose().matmul(&self.gamma).matmul(&o.o);
    }

    pub fn apply_circuit(&mut self, c: &CircuitInstance) -> Result<()> {
        for g in &c.gates {
            match &g.element {
                GateElement::Identity => {}
                GateElement::Matchgate(o) => {
                    if g.local_order || g.support.windows(2).any(|w| w[1] != w[0] + 1) {
                        return Err(Error::Routing("Gaussian backend needs interval matchgate bricks".into()));
                    }
                    self.apply_rotation(&o.embed(g.support[0], self.n));
                }
                _ => return Err(Error::Routing("Gaussian backend accepts only matchgates".into())),
            }
        }
        Ok(())
    }

    /// ⟨ψ|γ_a γ_b|ψ⟩.
    pub fn majorana_quadratic(&self, a: usize, b: usize) -> C64 {
        let d = if a == b { 1.0 } else { 0.0 };
        C64::new(d, self.gamma[(a, b)])
    }

    /// |⟨0|ψ⟩|² = |Pf((Γ₀ + Γ)/2)|.
    pub fn vacuum_overlap_sq(&self) -> f64 {
        let m = vacuum_covariance(self.n).add(&self.gamma).scale(0.5);
        pfaffian(&m).abs()
    }
}

/// ⟨0|U γ_a γ_b U†|0⟩ for U = U(o): the state U†|0⟩ has covariance o Γ₀ oᵀ.
pub fn gaussian_majorana_quadratic(o: &MajoranaRotation, a: usize, b: usize) -> C64 {
    let g = o.o.matmul(&vacuum_covariance(o.n)).matmul(&o.o.transpose());
    C64::new(if a == b { 1.0 } else { 0.0 }, g[(a, b)])
}

/// |⟨0|U(o)|0⟩|².
pub fn gaussian_amplitude_sq(o: &MajoranaRotation) -> f64 {
    let mut s = GaussianState::vacuum(o.n);
    s.apply_rotation(o);
    s.vacuum_overlap_sq()
}

/// Pfaffian of a real antisymmetric matrix by Parlett–Reid elimination with
/// partial pivoting.
pub fn pfaffian(a: &RMatrix) -> f64 {
    let n = a.rows();
    if n % 2 == 1 {
        return 0.0;
    }
    let mut m = a.clone();
    let mut pf = 1.0;
    let mut k = 0;
    while k + 1 < n {
        let mut kp = k + 1;
        for i in k + 2..n {
            if m[(i, k)].abs() > m[(kp, k)].abs() {
                kp = i;
            }
        }
        if kp != k + 1 {
            for j in 0..n {
                let t = m[(k + 1, j)];
                m[(k + 1, j)] = m[(kp, j)];
                m[(kp, j)] = t;
            }
            for i in 0..n {
                let t = m[(i, k + 1)];
                m[(i, k + 1)] = m[(i, kp)];
                m[(i, kp)] = t;
            }
            pf = -pf;
        }
        if m[(k + 1, k)] == 0.0 {
            return 0.0;
        }
        pf *= m[(k, k + 1)];
        if k + 2 < n {
            let piv = m[(k, k + 1)];
            let tau: Vec<f64> = (k + 2..n).map(|j| m[(k, j)] / piv).collect();
            let col: Vec<f64> = (k + 2..n).map(|i| m[(i, k + 1)]).collect();
            for (ii, i) in (k + 2..n).enumerate() {
                for (jj, j) in (k + 2..n).enumerate() {
                    m[(i, j)] += tau[ii] * col[jj] - col[ii] * tau[jj];
                }
            }
        }
        k += 2;
    }
    pf
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pfaffian_small_cases() {
        let a = RMatrix::from_rows(&[vec![0.0, 2.0], vec![-2.0, 0.0]]);
        assert_eq!(pfaffian(&a), 2.0);
        // Pf of 4×4: a01 a23 − a02 a13 + a03 a12
        let v = [1.3, -0.4, 2.2, 0.7, -1.1, 0.5];
        let mut m = RMatrix::zeros(4, 4);
        let idx = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        for (&(i, j), &x) in idx.iter().zip(&v) {
            m[(i, j)] = x;
            m[(j, i)] = -x;
        }
        let want = v[0] * v[5] - v[1] * v[4] + v[2] * v[3];
        assert!((pfaffian(&m) - want).abs() < 1e-12);
        // Pf² = det
        assert!((pfaffian(&m).powi(2) - m.det()).abs() < 1e-10);
    }

    #[test]
    fn vacuum_values() {
        let s = GaussianState::vacuum(3);
        assert!((s.majorana_quadratic(0, 1).norm() - 1.0).abs() < 1e-15);
        assert_eq!(s.majorana_quadratic(0, 2).norm(), 0.0);
        assert!((s.vacuum_overlap_sq() - 1.0).abs() < 1e-15);
    }
}
