//! Clifford tableaux: images of X_j and Z_j under conjugation, with signs.

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64, I, ONE, ZERO};
use crate::operator::{DenseOperator, PauliString};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet, VecDeque};

/// How the dense image fixes its global phase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum GlobalPhase {
    /// First nonzero entry of the first column is positive real.
    #[default]
    FirstEntryPositive,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CliffordTableau {
    pub n: usize,
    /// rows[j] = C X_{j+1} C†, rows[n + j] = C Z_{j+1} C†; each Hermitian (phase 0 or 2).
    pub rows: Vec<PauliString>,
    pub phase_convention: GlobalPhase,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CliffordGate {
    H(usize),
    S(usize),
    /// control, target
    Cx(usize, usize),
}

impl CliffordGate {
    pub fn matrix(&self) -> CMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            CliffordGate::H(_) => CMatrix::from_real(2, 2, &[h, h, h, -h]),
            CliffordGate::S(_) => CMatrix::diag(&[ONE, I]),
            CliffordGate::Cx(..) => CMatrix::from_real(
                4,
                4,
                &[1., 0., 0., 0., 0., 1., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0.],
            ),
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            CliffordGate::H(q) | CliffordGate::S(q) => vec![q],
            CliffordGate::Cx(c, t) => vec![c, t],
        }
    }

    /// G P G† on a Pauli string (standard symplectic update rules).
    pub fn conjugate(&self, p: &PauliString) -> PauliString {
        let mut p = *p;
        let bit = |v: u64, q: usize| (v >> q) & 1;
        match *self {
            CliffordGate::H(q) => {
                let (x, z) = (bit(p.x, q), bit(p.z, q));
                if x & z == 1 {
                    p.phase = (p.phase + 2) % 4;
                }
                p.x = (p.x & !(1 << q)) | (z << q);
                p.z = (p.z & !(1 << q)) | (x << q);
            }
            CliffordGate::S(q) => {
                let (x, z) = (bit(p.x, q), bit(p.z, q));
                if x & z == 1 {
                    p.phase = (p.phase + 2) % 4;
                }
                p.z ^= x << q;
            }
            CliffordGate::Cx(c, t) => {
                let (xc, zc, xt, zt) = (bit(p.x, c), bit(p.z, c), bit(p.x, t), bit(p.z, t));
                if xc & zt & (xt ^ zc ^ 1) == 1 {
                    p.phase = (p.phase + 2) % 4;
                }
                p.x ^= xc << t;
                p.z ^= zt << c;
            }
        }
        p
    }
}

impl CliffordTableau {
    pub fn identity(n: usize) -> Self {
        assert!(n <= 64);
        let mut rows = Vec::with_capacity(2 * n);
        for j in 0..n {
            rows.push(PauliString::single(n, j, 'X'));
        }
        for j in 0..n {
            rows.push(PauliString::single(n, j, 'Z'));
        }
        CliffordTableau { n, rows, phase_convention: GlobalPhase::default() }
    }

    pub fn from_gates(n: usize, gates: &[CliffordGate]) -> Self {
        let mut t = Self::identity(n);
        for g in gates {
            t.apply_gate(g);
        }
        t
    }

    /// C ← G C.
    pub fn apply_gate(&mut self, g: &CliffordGate) {
        for r in self.rows.iter_mut() {
            *r = g.conjugate(r);
        }
    }

    pub fn image_x(&self, q: usize) -> &PauliString {
        &self.rows[q]
    }
    pub fn image_z(&self, q: usize) -> &PauliString {
        &self.rows[self.n + q]
    }

    /// 2n×2n matrix over F₂; row r is (x bits | z bits) of rows[r].
    pub fn symplectic_matrix(&self) -> Vec<Vec<u8>> {
        self.rows
            .iter()
            .map(|p| {
                (0..self.n)
                    .map(|q| ((p.x >> q) & 1) as u8)
                    .chain((0..self.n).map(|q| ((p.z >> q) & 1) as u8))
                    .collect()
            })
            .collect()
    }

    /// Sign bits: 1 where the row carries a minus sign.
    pub fn phase_bits(&self) -> Vec<u8> {
        self.rows.iter().map(|p| p.phase / 2).collect()
    }

    /// Rows Hermitian and obeying the canonical commutation relations.
    pub fn is_valid(&self) -> bool {
        let n = self.n;
        if self.rows.len() != 2 * n || self.rows.iter().any(|p| p.n != n || !p.is_hermitian()) {
            return false;
        }
        for a in 0..2 * n {
            for b in a + 1..2 * n {
                let should_anti = b == a + n && a < n;
                if self.rows[a].commutes(&self.rows[b]) == should_anti {
                    return false;
                }
            }
        }
        true
    }

    /// C P C†.
    pub fn conjugate(&self, p: &PauliString) -> PauliString {
        assert_eq!(p.n, self.n);
        let mut out = PauliString::identity(self.n);
        out.phase = ((p.phase as u32 + (p.x & p.z).count_ones()) % 4) as u8;
        for q in 0..self.n {
            if (p.x >> q) & 1 == 1 {
                out = out.mul(&self.rows[q]);
            }
        }
        for q in 0..self.n {
            if (p.z >> q) & 1 == 1 {
                out = out.mul(&self.rows[self.n + q]);
            }
        }
        out
    }

    /// Conjugates a Pauli on a larger register, with this tableau acting on
    /// `support` (support[j] hosts local qubit j).
    pub fn conjugate_on(&self, p: &PauliString, support: &[usize]) -> PauliString {
        assert_eq!(support.len(), self.n);
        let mut local = PauliString::identity(self.n);
        let mut rest = *p;
        for (j, &q) in support.iter().enumerate() {
            local.set(j, p.get(q));
            rest.set(q, 'I');
        }
        let img = self.conjugate(&local);
        let mut out = rest;
        for (j, &q) in support.iter().enumerate() {
            out.set(q, img.get(j));
        }
        out.phase = (p.phase + img.phase) % 4;
        out
    }

    /// (self ∘ other): first `other`, then `self`.
    pub fn compose(&self, other: &CliffordTableau) -> CliffordTableau {
        CliffordTableau {
            n: self.n,
            rows: other.rows.iter().map(|r| self.conjugate(r)).collect(),
            phase_convention: self.phase_convention,
        }
    }

    /// Images of X_j and Z_j are supported on qubit j alone, i.e. C is a product
    /// of single-qubit Cliffords.
    pub fn factorizes(&self) -> bool {
        (0..self.n).all(|q| {
            let m = 1u64 << q;
            let (a, b) = (self.image_x(q), self.image_z(q));
            (a.x | a.z) & !m == 0 && (b.x | b.z) & !m == 0
        })
    }

    pub fn to_dense(&self) -> Result<DenseOperator> {
        clifford_to_dense(self)
    }
}

fn apply_pauli(p: &PauliString, v: &[C64]) -> Vec<C64> {
    let mut out = vec![ZERO; v.len()];
    for (i, a) in v.iter().enumerate() {
        if *a == ZERO {
            continue;
        }
        let (j, s) = p.apply_basis(i);
        out[j] += s * a;
    }
    out
}

/// Dense unitary of a tableau: the stabilizer state C|0ⁿ⟩ is obtained by
/// projecting a generic vector onto the joint +1 eigenspace of the C Z_j C†,
/// and column x is (C X^x C†) C|0ⁿ⟩. Global phase per [`GlobalPhase`].
pub fn clifford_to_dense(t: &CliffordTableau) -> Result<DenseOperator> {
    if t.n > 5 {
        return Err(Error::TooLarge { dim: 1 << t.n, cap: 1 << 5 });
    }
    let n = t.n;
    let d = 1usize << n;
    let mut psi0 = vec![ZERO; d];
    for attempt in 0..8u64 {
        let mut v: Vec<C64> = (0..d)
            .map(|i| {
                let s = (i as f64 + 1.0) * (0.754877666 + attempt as f64 * 0.1);
                C64::new((s * 12.9898).sin(), (s * 78.233).cos())
            })
            .collect();
        for q in 0..n {
            let w = apply_pauli(t.image_z(q), &v);
            for (a, b) in v.iter_mut().zip(w) {
                *a = (*a + b) * 0.5;
            }
        }
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            psi0 = v.into_iter().map(|z| z / norm).collect();
            break;
        }
    }
    let mut m = CMatrix::zeros(d, d);
    for x in 0..d {
        let mut p = PauliString::identity(n);
        for q in 0..n {
            if (x >> (n - 1 - q)) & 1 == 1 {
                p.set(q, 'X');
            }
        }
        let col = apply_pauli(&t.conjugate(&p), &psi0);
        for (r, a) in col.into_iter().enumerate() {
            m[(r, x)] = a;
        }
    }
    let first = (0..d).map(|r| m[(r, 0)]).find(|z| z.norm() > 1e-12).unwrap_or(ONE);
    let ph = first.conj() / first.norm();
    DenseOperator::with_tag(m.scale(ph), n, 1)
}

fn random_bits<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<u8> {
    (0..n).map(|_| rng.gen::<bool>() as u8).collect()
}

/// Quantum Mallows sample: Hadamard layer and qubit permutation.
fn sample_qmallows<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (Vec<bool>, Vec<usize>) {
    let mut had = vec![false; n];
    let mut perm = vec![0; n];
    let mut inds: Vec<usize> = (0..n).collect();
    for i in 0..n {
        let m = n - i;
        // P(index = j) = 2^{2m−1−j}/(4^m − 1), j ∈ [0, 2m)
        let top: u128 = (1u128 << (2 * m)) - 1;
        let t: u128 = rng.gen_range(1..=top);
        let floor_log = 127 - t.leading_zeros() as usize;
        let index = 2 * m - 1 - floor_log;
        had[i] = index < m;
        let k = if index < m { index } else { 2 * m - index - 1 };
        perm[i] = inds.remove(k);
    }
    (had, perm)
}

type Mat2 = Vec<Vec<u8>>;

fn matmul2(a: &Mat2, b: &Mat2) -> Mat2 {
    let (r, m, c) = (a.len(), b.len(), b[0].len());
    let mut out = vec![vec![0u8; c]; r];
    for i in 0..r {
        for k in 0..m {
            if a[i][k] == 1 {
                for j in 0..c {
                    out[i][j] ^= b[k][j];
                }
            }
        }
    }
    out
}

/// Inverse of a unit lower-triangular matrix over F₂.
fn inverse_tril(l: &Mat2) -> Mat2 {
    let n = l.len();
    let mut inv = vec![vec![0u8; n]; n];
    for i in 0..n {
        inv[i][i] = 1;
        for j in (0..i).rev() {
            let mut s = 0u8;
            for k in j..i {
                s ^= l[i][k] & inv[k][j];
            }
            inv[i][j] = s;
        }
    }
    inv
}

/// Uniformly random Clifford (Bravyi–Maslov canonical form).
pub fn sample_uniform_clifford<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CliffordTableau {
    assert!((1..=63).contains(&n));
    let (had, perm) = sample_qmallows(n, rng);
    let diag_rand = |rng: &mut R| {
        let b = random_bits(rng, n);
        let mut m = vec![vec![0u8; n]; n];
        for i in 0..n {
            m[i][i] = b[i];
        }
        m
    };
    let mut gamma1 = diag_rand(rng);
    let mut gamma2 = diag_rand(rng);
    let eye = |n: usize| -> Mat2 { (0..n).map(|i| (0..n).map(|j| (i == j) as u8).collect()).collect() };
    let mut delta1 = eye(n);
    let mut delta2 = eye(n);
    let fill = |m: &mut Mat2, symmetric: bool, rng: &mut R| {
        for i in 1..n {
            for j in 0..i {
                let v = rng.gen::<bool>() as u8;
                m[i][j] = v;
                if symmetric {
                    m[j][i] = v;
                }
            }
        }
    };
    fill(&mut gamma1, true, rng);
    fill(&mut gamma2, true, rng);
    fill(&mut delta1, false, rng);
    fill(&mut delta2, false, rng);
    let block = |delta: &Mat2, gamma: &Mat2| -> Mat2 {
        let prod = matmul2(gamma, delta);
        let inv = inverse_tril(delta);
        let mut t = vec![vec![0u8; 2 * n]; 2 * n];
        for i in 0..n {
            for j in 0..n {
                t[i][j] = delta[i][j];
                t[n + i][j] = prod[i][j];
                t[n + i][n + j] = inv[j][i];
            }
        }
        t
    };
    let table1 = block(&delta1, &gamma1);
    let table2 = block(&delta2, &gamma2);
    let mut table: Mat2 = (0..2 * n)
        .map(|r| if r < n { table2[perm[r]].clone() } else { table2[n + perm[r - n]].clone() })
        .collect();
    for i in 0..n {
        if had[i] {
            table.swap(i, n + i);
        }
    }
    let full = matmul2(&table1, &table);
    let signs = random_bits(rng, 2 * n);
    let rows = full
        .iter()
        .zip(signs)
        .map(|(row, s)| {
            let mut p = PauliString::identity(n);
            for q in 0..n {
                p.x |= (row[q] as u64) << q;
                p.z |= (row[n + q] as u64) << q;
            }
            p.phase = 2 * s;
            p
        })
        .collect();
    CliffordTableau { n, rows, phase_convention: GlobalPhase::default() }
}

/// All generators H_q, S_q, CX_{a,b} on n qubits.
pub fn generators(n: usize) -> Vec<CliffordGate> {
    let mut g = vec![];
    for q in 0..n {
        g.push(CliffordGate::H(q));
        g.push(CliffordGate::S(q));
    }
    for a in 0..n {
        for b in 0..n {
            if a != b {
                g.push(CliffordGate::Cx(a, b));
            }
        }
    }
    g
}

/// The Clifford group modulo phases, by breadth-first closure of the tableau
/// under the generators.
pub fn enumerate_cliffords(n: usize) -> Vec<CliffordTableau> {
    assert!(n <= 2, "enumeration is only tractable for n ≤ 2");
    let gens = generators(n);
    let start = CliffordTableau::identity(n);
    let mut seen: HashSet<Vec<PauliString>> = HashSet::new();
    let mut out = vec![];
    let mut queue = VecDeque::new();
    seen.insert(start.rows.clone());
    queue.push_back(start);
    while let Some(t) = queue.pop_front() {
        for g in &gens {
            let mut u = t.clone();
            u.apply_gate(g);
            if seen.insert(u.rows.clone()) {
                queue.push_back(u);
            }
        }
        out.push(t);
    }
    out
}

/// Lookup from tableau rows to enumeration index.
pub fn class_index(elements: &[CliffordTableau]) -> HashMap<Vec<PauliString>, usize> {
    elements.iter().enumerate().map(|(i, t)| (t.rows.clone(), i)).collect()
}
