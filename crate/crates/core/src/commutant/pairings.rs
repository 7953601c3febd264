//! Pairings of 2k vertices (Brauer diagrams) and permutations of k copies.

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Perfect matching on vertices 0..2k; 0..k are "top" (ket side), k..2k are
/// "bottom" (bra side). Stored as a partner table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pairing {
    pub k: usize,
    partner: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrauerProduct {
    pub result: Pairing,
    pub loops: usize,
}

impl Pairing {
    pub fn from_pairs(k: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut partner = vec![usize::MAX; 2 * k];
        for &(a, b) in pairs {
            if a >= 2 * k || b >= 2 * k || a == b || partner[a] != usize::MAX || partner[b] != usize::MAX {
                return Err(Error::InvalidInput(format!("bad pairing {pairs:?}")));
            }
            partner[a] = b;
            partner[b] = a;
        }
        if partner.iter().any(|&p| p == usize::MAX) {
            return Err(Error::InvalidInput(format!("pairing {pairs:?} is not perfect")));
        }
        Ok(Pairing { k, partner })
    }

    /// 1-based pairs, as they are usually written: {{1,2},{3,4}}.
    pub fn from_pairs_1based(k: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let p: Vec<(usize, usize)> = pairs.iter().map(|&(a, b)| (a - 1, b - 1)).collect();
        Self::from_pairs(k, &p)
    }

    pub fn identity(k: usize) -> Self {
        Self::from_permutation(&(0..k).collect::<Vec<_>>())
    }

    /// Pairing of the copy permutation P_π (top π(c) joined to bottom c).
    pub fn from_permutation(perm: &[usize]) -> Self {
        let k = perm.len();
        let pairs: Vec<(usize, usize)> = (0..k).map(|c| (perm[c], k + c)).collect();
        Self::from_pairs(k, &pairs).expect("permutation gives a perfect matching")
    }

    pub fn partner(&self, v: usize) -> usize {
        self.partner[v]
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..2 * self.k).filter(|&a| a < self.partner[a]).map(|a| (a, self.partner[a])).collect()
    }

    /// Some(π) when every pair joins a top to a bottom vertex.
    pub fn as_permutation(&self) -> Option<Vec<usize>> {
        let k = self.k;
        let mut perm = vec![0; k];
        for c in 0..k {
            let t = self.partner[k + c];
            if t >= k {
                return None;
            }
            perm[c] = t;
        }
        Some(perm)
    }

    pub fn is_permutation(&self) -> bool {
        self.as_permutation().is_some()
    }

    /// Local (single-qubit, D = 2) factor of the orthogonal representation,
    /// with J = `j` inserted per the symplectic rule when given: on the smaller
    /// vertex of each top–top pair (left) and of each bottom–bottom pair (right).
    pub fn local_factor(&self, j: Option<&CMatrix>) -> CMatrix {
        let k = self.k;
        let d = 1usize << k;
        let mut m = CMatrix::zeros(d, d);
        // basis assignment of all 2k legs with δ constraints along pairs
        let pairs = self.pairs();
        for assign in 0..1usize << pairs.len() {
            let mut bits = vec![0usize; 2 * k];
            for (p, &(a, b)) in pairs.iter().enumerate() {
                let v = (assign >> p) & 1;
                bits[a] = v;
                bits[b] = v;
            }
            let row: usize = (0..k).map(|c| bits[c] << (k - 1 - c)).sum();
            let col: usize = (0..k).map(|c| bits[k + c] << (k - 1 - c)).sum();
            m[(row, col)] += C64::new(1.0, 0.0);
        }
        if let Some(j) = j {
            for &(a, b) in &pairs {
                if b < k {
                    m = apply_on_copy(&m, k, a, j, true);
                } else if a >= k {
                    m = apply_on_copy(&m, k, a - k, j, false);
                }
            }
        }
        m
    }

    /// Brauer composition: bottom vertices of `self` are glued to the top
    /// vertices of `other`; closed loops are counted.
    pub fn compose(&self, other: &Pairing) -> BrauerProduct {
        brauer_compose(self, other)
    }
}

/// J on copy c of a 2^k × 2^k local operator, from the left (J·m) or right (m·J).
fn apply_on_copy(m: &CMatrix, k: usize, c: usize, j: &CMatrix, left: bool) -> CMatrix {
    let d = 1usize << k;
    let id = CMatrix::identity(2);
    let mut full = CMatrix::identity(1);
    for cc in 0..k {
        full = full.kron(if cc == c { j } else { &id });
    }
    debug_assert_eq!(full.rows(), d);
    if left {
        full.matmul(m)
    } else {
        m.matmul(&full)
    }
}

impl fmt::Display for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.pairs().iter().map(|(a, b)| format!("{{{},{}}}", a + 1, b + 1)).collect();
        write!(f, "{{{}}}", s.join(","))
    }
}

pub fn enumerate_pairings(k: usize) -> Result<Vec<Pairing>> {
    if k > 5 {
        return Err(Error::TooLarge { dim: k, cap: 5 });
    }
    fn rec(free: &mut Vec<usize>, cur: &mut Vec<(usize, usize)>, k: usize, out: &mut Vec<Pairing>) {
        if free.is_empty() {
            out.push(Pairing::from_pairs(k, cur).unwrap());
            return;
        }
        let a = free.remove(0);
        for i in 0..free.len() {
            let b = free.remove(i);
            cur.push((a, b));
            rec(free, cur, k, out);
            cur.pop();
            free.insert(i, b);
        }
        free.insert(0, a);
    }
    let mut out = vec![];
    rec(&mut (0..2 * k).collect(), &mut vec![], k, &mut out);
    Ok(out)
}

pub fn brauer_compose(s: &Pairing, t: &Pairing) -> BrauerProduct {
    assert_eq!(s.k, t.k);
    let k = s.k;
    // nodes: top 0..k, middle k..2k, bottom 2k..3k
    let mut edges: Vec<(usize, usize)> = s.pairs();
    edges.extend(t.pairs().into_iter().map(|(a, b)| (k + a, k + b)));
    let mut adj: Vec<Vec<usize>> = vec![vec![]; 3 * k];
    for (e, &(a, b)) in edges.iter().enumerate() {
        adj[a].push(e);
        adj[b].push(e);
    }
    let mut used = vec![false; edges.len()];
    let other = |e: usize, v: usize| if edges[e].0 == v { edges[e].1 } else { edges[e].0 };
    let is_end = |v: usize| v < k || v >= 2 * k;
    let label = |v: usize| if v < k { v } else { v - k };
    let mut pairs = vec![];
    for start in (0..k).chain(2 * k..3 * k) {
        if adj[start].iter().all(|&e| used[e]) {
            continue;
        }
        let mut cur = start;
        loop {
            let e = *adj[cur].iter().find(|&&e| !used[e]).unwrap();
            used[e] = true;
            cur = other(e, cur);
            if is_end(cur) {
                break;
            }
        }
        pairs.push((label(start), label(cur)));
    }
    let mut loops = 0;
    for v in k..2 * k {
        if adj[v].iter().all(|&e| used[e]) {
            continue;
        }
        loops += 1;
        let mut cur = v;
        while let Some(&e) = adj[cur].iter().find(|&&e| !used[e]) {
            used[e] = true;
            cur = other(e, cur);
        }
    }
    BrauerProduct { result: Pairing::from_pairs(k, &pairs).unwrap(), loops }
}

/// All permutations of 0..k in lexicographic order.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = vec![];
    rec(&mut vec![], &mut vec![false; k], &mut out);
    out
}

pub fn inverse_permutation(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &v) in p.iter().enumerate() {
        inv[v] = i;
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::FactorizedOperator;

    #[test]
    fn pairing_counts() {
        assert_eq!(enumerate_pairings(1).unwrap().len(), 1);
        assert_eq!(enumerate_pairings(2).unwrap().len(), 3);
        assert_eq!(enumerate_pairings(3).unwrap().len(), 15);
        assert_eq!(enumerate_pairings(4).unwrap().len(), 105);
        let k2: Vec<String> = enumerate_pairings(2).unwrap().iter().map(|p| p.to_string()).collect();
        for s in ["{{1,2},{3,4}}", "{{1,3},{2,4}}", "{{1,4},{2,3}}"] {
            assert!(k2.contains(&s.to_string()));
        }
    }

    #[test]
    fn composition_examples() {
        let a = Pairing::from_pairs_1based(2, &[(1, 2), (3, 4)]).unwrap();
        let id = Pairing::from_pairs_1based(2, &[(1, 3), (2, 4)]).unwrap();
        assert_eq!(id, Pairing::identity(2));
        assert_eq!(a.compose(&id), BrauerProduct { result: a.clone(), loops: 0 });
        assert_eq!(a.compose(&a), BrauerProduct { result: a.clone(), loops: 1 });
        for t in enumerate_pairings(3).unwrap() {
            assert_eq!(Pairing::identity(3).compose(&t), BrauerProduct { result: t.clone(), loops: 0 });
        }
    }

    #[test]
    fn composition_matches_representation() {
        let n = 2;
        let d: f64 = 4.0;
        for s in enumerate_pairings(3).unwrap() {
            for t in enumerate_pairings(3).unwrap() {
                let rs = FactorizedOperator::uniform(n, 3, s.local_factor(None));
                let rt = FactorizedOperator::uniform(n, 3, t.local_factor(None));
                let p = s.compose(&t);
                let rp = FactorizedOperator::uniform(n, 3, p.result.local_factor(None));
                let lhs = rs.matmul(&rt).to_dense().unwrap();
                let rhs = rp.to_dense().unwrap().scale(C64::new(d.powi(p.loops as i32), 0.0));
                assert!(lhs.sub(&rhs).max_abs() < 1e-12, "{s} · {t}");
            }
        }
    }
}
