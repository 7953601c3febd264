//! Stochastic Lagrangian subspaces of F₂^{2k} and their operators r(T).
//!
//! A vector is stored as `(x << k) | y` with copy 1 in the most significant
//! bit of x and of y.

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StochasticLagrangianSubspace {
    pub k: usize,
    /// Row-reduced basis (k vectors).
    pub basis: Vec<u32>,
}

fn split(v: u32, k: usize) -> (u32, u32) {
    (v >> k, v & ((1 << k) - 1))
}

fn q_form(v: u32, k: usize) -> i32 {
    let (x, y) = split(v, k);
    x.count_ones() as i32 - y.count_ones() as i32
}

fn beta(v: u32, w: u32, k: usize) -> u32 {
    let (x, y) = split(v, k);
    let (a, b) = split(w, k);
    ((x & a).count_ones() + (y & b).count_ones()) & 1
}

fn span(basis: &[u32]) -> Vec<u32> {
    let mut out = vec![0u32];
    for &b in basis {
        let cur = out.clone();
        out.extend(cur.into_iter().map(|v| v ^ b));
    }
    out.sort_unstable();
    out
}

/// Reduced row echelon form over F₂ (pivots on the highest bit).
fn reduce(vectors: &[u32]) -> Vec<u32> {
    let mut rows: Vec<u32> = vec![];
    for &v in vectors {
        let mut v = v;
        for &r in &rows {
            let p = 31 - r.leading_zeros();
            if v >> p & 1 == 1 {
                v ^= r;
            }
        }
        if v != 0 {
            let p = 31 - v.leading_zeros();
            for r in rows.iter_mut() {
                if *r >> p & 1 == 1 {
                    *r ^= v;
                }
            }
            rows.push(v);
        }
    }
    rows.sort_unstable_by(|a, b| b.cmp(a));
    rows
}

impl StochasticLagrangianSubspace {
    pub fn new(k: usize, vectors: &[u32]) -> Result<Self> {
        let basis = reduce(vectors);
        let t = StochasticLagrangianSubspace { k, basis };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<()> {
        let k = self.k;
        if self.basis.len() != k {
            return Err(Error::InvalidInput(format!("dimension {} ≠ {k}", self.basis.len())));
        }
        let elems = self.elements();
        let ones = (1u32 << (2 * k)) - 1;
        if !elems.contains(&ones) {
            return Err(Error::InvalidInput("span misses the all-ones vector".into()));
        }
        if elems.iter().any(|&v| q_form(v, k).rem_euclid(4) != 0) {
            return Err(Error::InvalidInput("x·x ≢ y·y (mod 4) somewhere in the span".into()));
        }
        Ok(())
    }

    pub fn elements(&self) -> Vec<u32> {
        span(&self.basis)
    }

    pub fn from_permutation(perm: &[usize]) -> Self {
        let k = perm.len();
        // generators e_c ↦ (e_{π(c)}, e_c)
        let vecs: Vec<u32> = (0..k)
            .map(|c| {
                let x = 1u32 << (k - 1 - perm[c]);
                let y = 1u32 << (k - 1 - c);
                (x << k) | y
            })
            .collect();
        Self::new(k, &vecs).expect("permutation subspaces are stochastic Lagrangian")
    }

    pub fn as_permutation(&self) -> Option<Vec<usize>> {
        let k = self.k;
        let mut perm = vec![0; k];
        for c in 0..k {
            let y = 1u32 << (k - 1 - c);
            let hits: Vec<u32> = self.elements().into_iter().filter(|&v| split(v, k).1 == y).collect();
            if hits.len() != 1 || hits[0] >> k == 0 || (hits[0] >> k).count_ones() != 1 {
                return None;
            }
            perm[c] = k - 1 - (hits[0] >> k).trailing_zeros() as usize;
        }
        Some(perm)
    }

    /// T₄ = {(x + a·1, x) : |x| even, a ∈ F₂}.
    pub fn t4() -> Self {
        let k = 4;
        let vecs: Vec<u32> = (0u32..16)
            .filter(|x| x.count_ones() % 2 == 0)
            .flat_map(|x| [(x << k) | x, ((x ^ 15) << k) | x])
            .collect();
        Self::new(k, &vecs).unwrap()
    }

    /// r(T) = Σ_{(x,y)∈T} |x⟩⟨y| on k single-qubit copies.
    pub fn local_factor(&self) -> CMatrix {
        let k = self.k;
        let d = 1usize << k;
        let mut m = CMatrix::zeros(d, d);
        for v in self.elements() {
            let (x, y) = split(v, k);
            m[(x as usize, y as usize)] = C64::new(1.0, 0.0);
        }
        m
    }
}

impl fmt::Display for StochasticLagrangianSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = self.as_permutation() {
            let s: Vec<String> = p.iter().map(|c| (c + 1).to_string()).collect();
            return write!(f, "T_π[{}]", s.join(""));
        }
        let k = self.k;
        let s: Vec<String> = self
            .basis
            .iter()
            .map(|&v| {
                let (x, y) = split(v, k);
                format!("({:0w$b},{:0w$b})", x, y, w = k)
            })
            .collect();
        write!(f, "T<{}>", s.join(" "))
    }
}

/// All stochastic Lagrangian subspaces for k copies, grown from span{1}
/// by adjoining isotropic vectors of vanishing q-form.
pub fn enumerate_sigma_kk(k: usize) -> Result<Vec<StochasticLagrangianSubspace>> {
    if k == 0 || k > 5 {
        return Err(Error::TooLarge { dim: k, cap: 5 });
    }
    let ones = (1u32 << (2 * k)) - 1;
    let candidates: Vec<u32> = (1..1u32 << (2 * k)).filter(|&v| q_form(v, k).rem_euclid(4) == 0).collect();
    let mut level: BTreeSet<Vec<u32>> = BTreeSet::new();
    level.insert(reduce(&[ones]));
    for _ in 1..k {
        let mut next = BTreeSet::new();
        for basis in &level {
            let elems = span(basis);
            for &v in &candidates {
                if elems.binary_search(&v).is_ok() || basis.iter().any(|&b| beta(v, b, k) != 0) {
                    continue;
                }
                let mut b2 = basis.clone();
                b2.push(v);
                next.insert(reduce(&b2));
            }
        }
        level = next;
    }
    level.into_iter().map(|b| StochasticLagrangianSubspace::new(k, &b)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::commutant::pairings::permutations;

    #[test]
    fn counts_and_permutations() {
        let counts: Vec<usize> = (1..=5).map(|k| enumerate_sigma_kk(k).unwrap().len()).collect();
        // k ≤ 3: exactly the symmetric group
        assert_eq!(&counts[..3], &[1, 2, 6]);
        assert!(counts[3] > 24);
        let s4 = enumerate_sigma_kk(4).unwrap();
        assert!(s4.contains(&StochasticLagrangianSubspace::t4()));
        for p in permutations(4) {
            assert!(s4.contains(&StochasticLagrangianSubspace::from_permutation(&p)));
        }
        assert_eq!(s4.iter().filter(|t| t.as_permutation().is_some()).count(), 24);
    }

    #[test]
    fn permutation_roundtrip() {
        for p in permutations(3) {
            assert_eq!(StochasticLagrangianSubspace::from_permutation(&p).as_permutation(), Some(p));
        }
        assert_eq!(StochasticLagrangianSubspace::t4().as_permutation(), None);
    }
}
