//! Matchgates as rotations of Majorana modes.
//!
//! Jordan–Wigner convention (0-based modes): γ_{2q} = Z⋯Z X_q and
//! γ_{2q+1} = Z⋯Z Y_q, so γ_0γ_1 = iZ_1. The dense image U(o) of a rotation
//! satisfies U γ_a U† = Σ_b o_{ab} γ_b; consequently U(o₁)U(o₂) = U(o₂o₁).

use crate::error::{Error, Result};
use crate::groups::haar::haar_orthogonal_matrix;
use crate::linalg::{CMatrix, RMatrix, C64};
use crate::operator::{check_cap, DenseOperator, PauliString};
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MajoranaRotation {
    pub n: usize,
    pub o: RMatrix,
}

/// Plane rotation in modes (a, b): γ_a ↦ cos θ γ_a + sin θ γ_b.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Givens {
    pub a: usize,
    pub b: usize,
    pub theta: f64,
}

/// Majorana operator γ_a on n qubits.
pub fn majorana(n: usize, a: usize) -> PauliString {
    assert!(a < 2 * n);
    let q = a / 2;
    let mut p = PauliString::identity(n);
    for j in 0..q {
        p.set(j, 'Z');
    }
    p.set(q, if a % 2 == 0 { 'X' } else { 'Y' });
    p
}

impl MajoranaRotation {
    pub fn new(n: usize, o: RMatrix) -> Result<Self> {
        if o.rows() != 2 * n || o.cols() != 2 * n {
            return Err(Error::DimensionMismatch(format!("rotation is {}x{}, expected {}", o.rows(), o.cols(), 2 * n)));
        }
        if !o.is_orthogonal(1e-10) {
            return Err(Error::InvalidInput("matrix is not orthogonal".into()));
        }
        Ok(MajoranaRotation { n, o })
    }

    pub fn identity(n: usize) -> Self {
        MajoranaRotation { n, o: RMatrix::identity(2 * n) }
    }

    pub fn det(&self) -> f64 {
        self.o.det()
    }

    pub fn inverse(&self) -> Self {
        MajoranaRotation { n: self.n, o: self.o.transpose() }
    }

    /// Rotation whose unitary is U(self)·U(other).
    pub fn then_after(&self, other: &MajoranaRotation) -> MajoranaRotation {
        MajoranaRotation { n: self.n, o: other.o.matmul(&self.o) }
    }

    /// Global rotation on n_total qubits for this rotation acting with its own
    /// (local) Jordan–Wigner order on the interval starting at qubit `offset`.
    pub fn embed(&self, offset: usize, n_total: usize) -> MajoranaRotation {
        assert!(offset + self.n <= n_total);
        let mut o = RMatrix::identity(2 * n_total);
        let base = 2 * offset;
        for i in 0..2 * self.n {
            for j in 0..2 * self.n {
                o[(base + i, base + j)] = self.o[(i, j)];
            }
        }
        if self.det() < 0.0 {
            // the local γ_0 is a bare X on the first qubit, which flips every later mode
            for m in base + 2 * self.n..2 * n_total {
                o[(m, m)] = -1.0;
            }
        }
        MajoranaRotation { n: n_total, o }
    }

    /// Factorizes a determinant +1 rotation: returns plane rotations R_1..R_K
    /// (column-major elimination, angles in (−π, π]) with o = R_1⋯R_K.
    pub fn givens_factors(&self) -> Result<Vec<Givens>> {
        let d = 2 * self.n;
        let mut m = self.o.clone();
        let mut elim: Vec<Givens> = vec![];
        let rotate = |m: &mut RMatrix, g: &Givens| {
            let (c, s) = (g.theta.cos(), g.theta.sin());
            for col in 0..d {
                let (x, y) = (m[(g.a, col)], m[(g.b, col)]);
                m[(g.a, col)] = c * x + s * y;
                m[(g.b, col)] = -s * x + c * y;
            }
        };
        for col in 0..d {
            for row in col + 1..d {
                let (x, y) = (m[(col, col)], m[(row, col)]);
                if y.abs() < 1e-300 {
                    continue;
                }
                let g = Givens { a: col, b: row, theta: y.atan2(x) };
                rotate(&mut m, &g);
                elim.push(g);
            }
            if col + 1 < d && m[(col, col)] < 0.0 {
                let g = Givens { a: col, b: col + 1, theta: std::f64::consts::PI };
                rotate(&mut m, &g);
                elim.push(g);
            }
        }
        if m.sub(&RMatrix::identity(d)).max_abs() > 1e-8 {
            return Err(Error::InvalidInput("rotation failed to orthogonalize (det ≠ +1?)".into()));
        }
        // G_K⋯G_1 o = I  ⇒  o = G_1ᵀ⋯G_Kᵀ
        Ok(elim.into_iter().map(|g| Givens { theta: -g.theta, ..g }).collect())
    }

    /// Dense unitary U(o) on n qubits.
    pub fn to_dense_matrix(&self) -> Result<CMatrix> {
        let n = self.n;
        if n > 10 {
            return Err(Error::TooLarge { dim: 1 << n, cap: 1 << 10 });
        }
        let d = 1usize << n;
        let reflect = self.det() < 0.0;
        let core = if reflect { self.o.matmul(&reflection_first(n)) } else { self.o.clone() };
        let factors = MajoranaRotation { n, o: core }.givens_factors()?;
        let mut u = CMatrix::identity(d);
        // o = R_1⋯R_K  ⇒  U(o) = U(R_K)⋯U(R_1)
        for g in &factors {
            let p = majorana(n, g.a).mul(&majorana(n, g.b));
            let (c, s) = ((g.theta / 2.0).cos(), (g.theta / 2.0).sin());
            // U(R) = exp(−θ/2 γ_aγ_b) = c − s γ_aγ_b
            u = left_mul_pauli_combo(&u, C64::new(c, 0.0), C64::new(-s, 0.0), &p);
        }
        if reflect {
            let g0 = majorana(n, 0);
            u = left_mul_pauli_combo(&u, C64::new(0.0, 0.0), C64::new(1.0, 0.0), &g0);
        }
        Ok(u)
    }
}

/// diag(1, −1, …, −1): the rotation implemented by γ_0.
fn reflection_first(n: usize) -> RMatrix {
    let mut f = RMatrix::identity(2 * n);
    for i in 1..2 * n {
        f[(i, i)] = -1.0;
    }
    f
}

/// (α I + β P) · U
fn left_mul_pauli_combo(u: &CMatrix, alpha: C64, beta: C64, p: &PauliString) -> CMatrix {
    let d = u.rows();
    let mut out = u.scale(alpha);
    for c in 0..d {
        let (r, amp) = p.apply_basis(c);
        let f = beta * amp;
        for j in 0..d {
            let v = u[(c, j)];
            out[(r, j)] += f * v;
        }
    }
    out
}

pub fn sample_haar_matchgate<R: Rng + ?Sized>(n: usize, rng: &mut R) -> MajoranaRotation {
    MajoranaRotation { n, o: haar_orthogonal_matrix(2 * n, rng) }
}

pub fn matchgate_to_dense(m: &MajoranaRotation) -> Result<DenseOperator> {
    check_cap(1 << m.n)?;
    DenseOperator::with_tag(m.to_dense_matrix()?, m.n, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::I;
    use crate::rng::RngStream;

    fn check_heisenberg(m: &MajoranaRotation) {
        let u = m.to_dense_matrix().unwrap();
        assert!(u.is_unitary(1e-10));
        let n = m.n;
        let gam: Vec<CMatrix> = (0..2 * n).map(|a| majorana(n, a).to_matrix()).collect();
        for a in 0..2 * n {
            let lhs = u.matmul(&gam[a]).matmul(&u.adjoint());
            let mut rhs = CMatrix::zeros(1 << n, 1 << n);
            for b in 0..2 * n {
                rhs.axpy(C64::new(m.o[(a, b)], 0.0), &gam[b]);
            }
            assert!(lhs.sub(&rhs).max_abs() < 1e-8);
        }
    }

    #[test]
    fn majorana_algebra() {
        let n = 3;
        for a in 0..2 * n {
            for b in 0..2 * n {
                let ga = majorana(n, a);
                let gb = majorana(n, b);
                assert_eq!(ga.commutes(&gb), a == b);
            }
        }
        assert_eq!(majorana(1, 0).mul(&majorana(1, 1)), PauliString::parse("iZ").unwrap());
    }

    #[test]
    fn identity_gives_identity() {
        let u = MajoranaRotation::identity(3).to_dense_matrix().unwrap();
        assert!(u.sub(&CMatrix::identity(8)).max_abs() < 1e-14);
    }

    #[test]
    fn single_mode_pair_rotation() {
        let theta: f64 = 0.37;
        let (c, s) = ((2.0 * theta).cos(), (2.0 * theta).sin());
        let m = MajoranaRotation::new(1, RMatrix::from_rows(&[vec![c, -s], vec![s, c]])).unwrap();
        let u = m.to_dense_matrix().unwrap();
        let expect = CMatrix::diag(&[(I * theta).exp(), (-I * theta).exp()]);
        let ph = u[(0, 0)] / expect[(0, 0)];
        assert!((ph.norm() - 1.0).abs() < 1e-12);
        assert!(u.sub(&expect.scale(ph)).max_abs() < 1e-12);
    }

    #[test]
    fn haar_rotations_realized_densely() {
        let mut rng = RngStream::new(3, 0).rng();
        for n in 1..=4 {
            for _ in 0..4 {
                check_heisenberg(&sample_haar_matchgate(n, &mut rng));
            }
        }
    }

    #[test]
    fn local_embedding_matches_dense_placement() {
        let mut rng = RngStream::new(4, 0).rng();
        for _ in 0..6 {
            let loc = sample_haar_matchgate(2, &mut rng);
            let glob = loc.embed(1, 4);
            let ul = loc.to_dense_matrix().unwrap();
            let full = CMatrix::identity(2).kron(&ul).kron(&CMatrix::identity(2));
            check_heisenberg(&glob);
            let ug = glob.to_dense_matrix().unwrap();
            // equal up to a global phase
            let prod = ug.adjoint().matmul(&full);
            let ph = prod[(0, 0)];
            assert!(prod.sub(&CMatrix::identity(16).scale(ph)).max_abs() < 1e-9);
        }
    }
}
