//! Two-copy matchgate commutant: V_k = C(2n,k)^{-1/2} 2^{-n} Σ_{|S|=k} γ_S ⊗ γ_S.

use crate::error::Result;
use crate::groups::matchgate::majorana;
use crate::linalg::{CMatrix, C64};
use crate::operator::{check_cap, DenseOperator, PauliString};

/// Subsets of {0..m} of size k, increasing lexicographic order.
pub fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            if m - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    rec(0, m, k, &mut vec![], &mut out);
    out
}

/// γ_S with the product taken in increasing mode order.
pub fn majorana_product(n: usize, s: &[usize]) -> PauliString {
    s.iter().fold(PauliString::identity(n), |acc, &a| acc.mul(&majorana(n, a)))
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub fn matchgate_basis_vk(n: usize, k_index: usize) -> Result<DenseOperator> {
    assert!(k_index <= 2 * n, "k_index out of range");
    let dim = 1usize << (2 * n);
    check_cap(dim)?;
    let mut m = CMatrix::zeros(dim, dim);
    let scale = binomial(2 * n, k_index).powf(-0.5) / (1u64 << n) as f64;
    for s in subsets(2 * n, k_index) {
        let g = majorana_product(n, &s);
        let gg = g.tensor(&g);
        for c in 0..dim {
            let (r, a) = gg.apply_basis(c);
            m[(r, c)] += a * C64::new(scale, 0.0);
        }
    }
    DenseOperator::with_tag(m, n, 2)
}
