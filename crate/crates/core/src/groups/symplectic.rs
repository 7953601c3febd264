//! Unitary symplectic group with respect to J_x = ⊗_j (iY)^{x_j}.

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, RMatrix, C64, ZERO};
use crate::operator::{check_cap, DenseOperator};
use crate::rng::complex_normal;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// J_x = i^{|x|} ⊗_j Y^{x_j}; bit q of `x` selects qubit q+1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymplecticForm {
    pub n: usize,
    pub x: u64,
}

impl SymplecticForm {
    pub fn new(n: usize, x: u64) -> Result<Self> {
        if n == 0 || n > 63 || x >> n != 0 {
            return Err(Error::InvalidInput(format!("bad symplectic form n={n} x={x:#b}")));
        }
        if x.count_ones() % 2 == 0 {
            return Err(Error::NoSymplecticForm(format!("|x| = {} is even", x.count_ones())));
        }
        Ok(SymplecticForm { n, x })
    }

    /// The all-ones choice x = 11…1, which needs odd n.
    pub fn standard(n: usize) -> Result<Self> {
        if n % 2 == 0 {
            return Err(Error::NoSymplecticForm(format!("n = {n} is even")));
        }
        Self::new(n, (1u64 << n) - 1)
    }

    /// Bit mask of the flipped bits in basis-index convention (qubit 1 = MSB).
    pub fn index_mask(&self) -> usize {
        (0..self.n).filter(|q| (self.x >> q) & 1 == 1).map(|q| 1usize << (self.n - 1 - q)).sum()
    }

    /// J|a⟩ = sign · |a ⊕ mask⟩.
    pub fn apply_basis(&self, a: usize) -> (usize, f64) {
        // iY = [[0, 1], [−1, 0]]: |0⟩ ↦ −|1⟩, |1⟩ ↦ |0⟩
        let mask = self.index_mask();
        let zeros = (!a & mask).count_ones();
        (a ^ mask, if zeros % 2 == 1 { -1.0 } else { 1.0 })
    }

    pub fn to_real(&self) -> RMatrix {
        let d = 1usize << self.n;
        let mut m = RMatrix::zeros(d, d);
        for a in 0..d {
            let (b, s) = self.apply_basis(a);
            m[(b, a)] = s;
        }
        m
    }

    pub fn to_matrix(&self) -> CMatrix {
        self.to_real().to_complex()
    }

    /// Real orthogonal W with W Ω Wᵀ = J for Ω = [[0, I], [−I, 0]].
    pub fn canonical_basis_change(&self) -> RMatrix {
        let d = 1usize << self.n;
        let half = d / 2;
        let mask = self.index_mask();
        let low = mask & mask.wrapping_neg();
        let reps: Vec<usize> = (0..d).filter(|a| a & low == 0).collect();
        let mut w = RMatrix::zeros(d, d);
        for (j, &a) in reps.iter().enumerate() {
            w[(a, j)] = 1.0;
            let (b, s) = self.apply_basis(a);
            w[(b, half + j)] = -s;
        }
        w
    }
}

fn omega(d: usize) -> RMatrix {
    let h = d / 2;
    let mut m = RMatrix::zeros(d, d);
    for i in 0..h {
        m[(i, h + i)] = 1.0;
        m[(h + i, i)] = -1.0;
    }
    m
}

/// Haar element of USp(d) in the Ω-form, by quaternionic Gram–Schmidt: each new
/// Gaussian column v is orthogonalized and paired with −Ω v̄.
pub fn haar_symplectic_omega<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    assert!(d % 2 == 0);
    let h = d / 2;
    let om = omega(d);
    let mut cols: Vec<Vec<C64>> = vec![vec![]; d];
    let mut accepted: Vec<usize> = vec![];
    for j in 0..h {
        let mut v: Vec<C64> = (0..d).map(|_| complex_normal(rng)).collect();
        for _pass in 0..2 {
            for &c in &accepted {
                let u = &cols[c];
                let p: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= p * ui;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in v.iter_mut() {
            *z /= norm;
        }
        let partner: Vec<C64> = (0..d)
            .map(|r| -(0..d).map(|c| v[c].conj() * om[(r, c)]).sum::<C64>())
            .collect();
        cols[j] = v;
        cols[h + j] = partner;
        accepted.push(j);
        accepted.push(h + j);
    }
    CMatrix::from_fn(d, d, |r, c| cols[c][r])
}

pub fn sample_haar_symplectic<R: Rng + ?Sized>(n: usize, form: &SymplecticForm, rng: &mut R) -> Result<DenseOperator> {
    if n % 2 == 0 {
        return Err(Error::NoSymplecticForm(format!("n = {n} is even")));
    }
    if form.n != n {
        return Err(Error::DimensionMismatch("form acts on a different qubit count".into()));
    }
    check_cap(1 << n)?;
    let d = 1usize << n;
    let u = haar_symplectic_omega(d, rng);
    let w = form.canonical_basis_change().to_complex();
    DenseOperator::with_tag(w.matmul(&u).matmul(&w.transpose()), n, 1)
}

/// |J⟩ = (J ⊗ I)|Ω_n⟩ as a vector on 2n qubits.
pub fn j_state(form: &SymplecticForm) -> Vec<C64> {
    let d = 1usize << form.n;
    let mut v = vec![ZERO; d * d];
    let a = (d as f64).powf(-0.5);
    for x in 0..d {
        let (y, s) = form.apply_basis(x);
        v[y * d + x] = C64::new(s * a, 0.0);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    #[test]
    fn j_properties() {
        for n in [1, 3, 5] {
            let f = SymplecticForm::standard(n).unwrap();
            let j = f.to_real();
            let d = 1 << n;
            assert!(j.is_orthogonal(0.0));
            assert_eq!(j.transpose(), j.scale(-1.0));
            assert_eq!(j.matmul(&j), RMatrix::identity(d).scale(-1.0));
            let w = f.canonical_basis_change();
            assert!(w.is_orthogonal(0.0));
            assert_eq!(w.matmul(&omega(d)).matmul(&w.transpose()), j);
        }
        assert!(matches!(SymplecticForm::standard(2), Err(Error::NoSymplecticForm(_))));
    }

    #[test]
    fn sampled_elements_are_symplectic() {
        let mut rng = RngStream::new(5, 0).rng();
        for n in [1, 3] {
            let f = SymplecticForm::standard(n).unwrap();
            let j = f.to_matrix();
            for _ in 0..5 {
                let u = sample_haar_symplectic(n, &f, &mut rng).unwrap();
                assert!(u.mat().is_unitary(1e-10));
                let r = u.mat().matmul(&j).matmul(&u.mat().transpose()).sub(&j);
                assert!(r.max_abs() < 1e-9);
            }
        }
        assert!(sample_haar_symplectic(2, &SymplecticForm::new(2, 1).unwrap(), &mut rng).is_err());
    }
}
