use crate::error::Result;
use crate::linalg::{qr_q_complex, qr_q_real, CMatrix, RMatrix};
use crate::operator::{check_cap, DenseOperator};
use crate::rng::{complex_normal, normal};
use rand::Rng;

/// Haar-random d×d unitary (Gaussian QR; the Gram–Schmidt R has positive diagonal).
pub fn haar_unitary_matrix<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let g = CMatrix::from_fn(d, d, |_, _| complex_normal(rng));
    qr_q_complex(&g)
}

/// Haar-random d×d real orthogonal matrix.
pub fn haar_orthogonal_matrix<R: Rng + ?Sized>(d: usize, rng: &mut R) -> RMatrix {
    let g = RMatrix::from_fn(d, d, |_, _| normal(rng));
    qr_q_real(&g)
}

pub fn sample_haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<DenseOperator> {
    check_cap(1 << n)?;
    DenseOperator::with_tag(haar_unitary_matrix(1 << n, rng), n, 1)
}

pub fn sample_haar_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<DenseOperator> {
    check_cap(1 << n)?;
    DenseOperator::with_tag(haar_orthogonal_matrix(1 << n, rng).to_complex(), n, 1)
}
