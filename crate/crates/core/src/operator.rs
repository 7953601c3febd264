//! Operators on tensor-power spaces (C^{2^n})^{⊗k}.
//!
//! Index convention: a basis index of the k-copy space has nk bits, most
//! significant first, ordered copy-major: (copy 1, qubit 1), (copy 1, qubit 2),
//! ..., (copy k, qubit n). Qubit 1 of a single copy is the most significant bit.

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, RMatrix, C64, I, ONE, ZERO};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::io::{Read, Write};

/// Largest admissible dimension of a dense tensor-power space.
pub const DIM_CAP: usize = 1 << 12;

pub fn check_cap(dim: usize) -> Result<()> {
    if dim > DIM_CAP {
        Err(Error::TooLarge { dim, cap: DIM_CAP })
    } else {
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    mat: CMatrix,
    tag: Option<(usize, usize)>,
}

impl DenseOperator {
    pub fn new(mat: CMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::DimensionMismatch(format!("{}x{} is not square", mat.rows(), mat.cols())));
        }
        check_cap(mat.rows())?;
        Ok(DenseOperator { mat, tag: None })
    }

    pub fn with_tag(mat: CMatrix, n: usize, k: usize) -> Result<Self> {
        let mut op = Self::new(mat)?;
        if op.dim() != 1usize << (n * k) {
            return Err(Error::DimensionMismatch(format!("dim {} is not 2^({n}·{k})", op.dim())));
        }
        op.tag = Some((n, k));
        Ok(op)
    }

    pub fn identity(n: usize, k: usize) -> Result<Self> {
        check_cap(1usize << (n * k))?;
        Self::with_tag(CMatrix::identity(1 << (n * k)), n, k)
    }

    pub fn zeros(n: usize, k: usize) -> Result<Self> {
        check_cap(1usize << (n * k))?;
        let d = 1 << (n * k);
        Self::with_tag(CMatrix::zeros(d, d), n, k)
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }
    pub fn tag(&self) -> Option<(usize, usize)> {
        self.tag
    }
    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }
    pub fn into_mat(self) -> CMatrix {
        self.mat
    }

    pub fn retag(mut self, n: usize, k: usize) -> Result<Self> {
        if self.dim() != 1usize << (n * k) {
            return Err(Error::DimensionMismatch(format!("dim {} is not 2^({n}·{k})", self.dim())));
        }
        self.tag = Some((n, k));
        Ok(self)
    }

    fn map(&self, mat: CMatrix) -> Self {
        DenseOperator { mat, tag: self.tag }
    }

    pub fn matmul(&self, other: &DenseOperator) -> DenseOperator {
        self.map(self.mat.matmul(&other.mat))
    }
    pub fn add(&self, other: &DenseOperator) -> DenseOperator {
        self.map(self.mat.add(&other.mat))
    }
    pub fn sub(&self, other: &DenseOperator) -> DenseOperator {
        self.map(self.mat.sub(&other.mat))
    }
    pub fn scale(&self, c: C64) -> DenseOperator {
        self.map(self.mat.scale(c))
    }
    pub fn adjoint(&self) -> DenseOperator {
        self.map(self.mat.adjoint())
    }
    pub fn transpose(&self) -> DenseOperator {
        self.map(self.mat.transpose())
    }
    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }
    /// tr(self† other)
    pub fn inner(&self, other: &DenseOperator) -> C64 {
        self.mat.inner(&other.mat)
    }
    pub fn max_abs(&self) -> f64 {
        self.mat.max_abs()
    }

    pub fn is_hermitian(&self) -> bool {
        let scale = self.max_abs();
        self.mat.sub(&self.mat.adjoint()).max_abs() <= 1e-10 * scale
    }

    pub fn is_psd(&self) -> bool {
        self.is_hermitian() && self.min_eigenvalue() >= -1e-9 * self.max_abs()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::herm_eigvals(&self.mat)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    /// Relative closeness in the max-entry norm.
    pub fn approx_eq(&self, other: &DenseOperator, rel_tol: f64) -> bool {
        let scale = self.max_abs().max(other.max_abs()).max(1e-300);
        self.sub(other).max_abs() <= rel_tol * scale
    }

    /// G^{⊗k} · self · G^{†⊗k} for a single-copy matrix G on all n qubits.
    pub fn conjugate_tensor_power(&self, g: &CMatrix) -> Result<DenseOperator> {
        let (n, k) = self.tag.ok_or(Error::Unfactorized)?;
        if g.rows() != 1 << n {
            return Err(Error::DimensionMismatch("gate does not act on n qubits".into()));
        }
        let mut out = self.clone();
        let qubits: Vec<usize> = (0..n).collect();
        for c in 0..k {
            conjugate_gate_on_copy(&mut out.mat, n, k, c, &qubits, g);
        }
        Ok(out)
    }
}

/// Tensor product with the cap enforced.
pub fn kron(a: &DenseOperator, b: &DenseOperator) -> Result<DenseOperator> {
    let dim = a.dim().checked_mul(b.dim()).ok_or(Error::TooLarge { dim: usize::MAX, cap: DIM_CAP })?;
    check_cap(dim)?;
    let tag = match (a.tag, b.tag) {
        (Some((n1, k1)), Some((n2, k2))) if n1 == n2 => Some((n1, k1 + k2)),
        _ => None,
    };
    Ok(DenseOperator { mat: a.mat.kron(&b.mat), tag })
}

/// Transpose on the tensor factor of copy `copy_index` (1-based).
pub fn partial_transpose(a: &DenseOperator, copy_index: usize, n: usize, k: usize) -> Result<DenseOperator> {
    let (tn, tk) = a.tag.ok_or(Error::Unfactorized)?;
    if (tn, tk) != (n, k) {
        return Err(Error::DimensionMismatch(format!("tag ({tn},{tk}) vs requested ({n},{k})")));
    }
    if copy_index == 0 || copy_index > k {
        return Err(Error::InvalidInput(format!("copy index {copy_index} outside 1..={k}")));
    }
    let nb = n * k;
    let shift = nb - copy_index * n;
    let mask = ((1usize << n) - 1) << shift;
    let d = a.dim();
    let mut out = CMatrix::zeros(d, d);
    for r in 0..d {
        for c in 0..d {
            let r2 = (r & !mask) | (c & mask);
            let c2 = (c & !mask) | (r & mask);
            out[(r2, c2)] = a.mat[(r, c)];
        }
    }
    Ok(DenseOperator { mat: out, tag: a.tag })
}

pub fn trace_norm(a: &DenseOperator) -> f64 {
    linalg::trace_norm(&a.mat)
}

pub fn pinv(g: &RMatrix, rel_cutoff: f64) -> RMatrix {
    linalg::pinv(g, rel_cutoff)
}

// ---------------------------------------------------------------------------
// Bit-level gate application

/// Offsets in a `nbits`-bit index space of the 2^r local basis states on the
/// given bit positions (position 0 = most significant; `pos[0]` is the most
/// significant local bit).
fn local_offsets(nbits: usize, pos: &[usize]) -> (Vec<usize>, usize) {
    let r = pos.len();
    let shifts: Vec<usize> = pos.iter().map(|&p| nbits - 1 - p).collect();
    let mask = shifts.iter().fold(0usize, |m, s| m | (1 << s));
    let offs = (0..1usize << r)
        .map(|l| (0..r).filter(|j| (l >> (r - 1 - j)) & 1 == 1).map(|j| 1usize << shifts[j]).sum())
        .collect();
    (offs, mask)
}

/// Applies the 2^r × 2^r matrix `g` to the bits at `pos` of a vector over
/// `nbits` bits.
pub fn apply_gate(v: &mut [C64], nbits: usize, pos: &[usize], g: &CMatrix) {
    debug_assert_eq!(v.len(), 1 << nbits);
    debug_assert_eq!(g.rows(), 1 << pos.len());
    let (offs, mask) = local_offsets(nbits, pos);
    let dg = offs.len();
    let mut buf = vec![ZERO; dg];
    let gd = g.data();
    for base in 0..v.len() {
        if base & mask != 0 {
            continue;
        }
        for l in 0..dg {
            buf[l] = v[base + offs[l]];
        }
        for l in 0..dg {
            let row = &gd[l * dg..(l + 1) * dg];
            let mut acc = ZERO;
            for (a, b) in row.iter().zip(&buf) {
                acc += a * b;
            }
            v[base + offs[l]] = acc;
        }
    }
}

/// X ↦ (g on `qubits` of copy c) X (g on `qubits` of copy c)† for an operator on (n, k).
pub fn conjugate_gate_on_copy(x: &mut CMatrix, n: usize, k: usize, copy: usize, qubits: &[usize], g: &CMatrix) {
    let nb = n * k;
    let rows: Vec<usize> = qubits.iter().map(|q| copy * n + q).collect();
    let cols: Vec<usize> = rows.iter().map(|p| nb + p).collect();
    apply_gate(x.data_mut(), 2 * nb, &rows, g);
    apply_gate(x.data_mut(), 2 * nb, &cols, &g.conj());
}

/// Permutes qubit positions of an operator on `nbits` bits: bit at position
/// `p` of the input lands at position `perm[p]` of the output.
pub fn permute_bits(x: &CMatrix, nbits: usize, perm: &[usize]) -> CMatrix {
    let d = 1usize << nbits;
    let map: Vec<usize> = (0..d)
        .map(|i| {
            let mut o = 0;
            for (p, &t) in perm.iter().enumerate() {
                if (i >> (nbits - 1 - p)) & 1 == 1 {
                    o |= 1 << (nbits - 1 - t);
                }
            }
            o
        })
        .collect();
    let mut out = CMatrix::zeros(d, d);
    for r in 0..d {
        for c in 0..d {
            out[(map[r], map[c])] = x[(r, c)];
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Pauli strings

/// n-qubit Pauli string i^phase · ⊗_j σ_j with σ_j ∈ {I, X, Y, Z} chosen by
/// (x_j, z_j) ∈ {(0,0), (1,0), (1,1), (0,1)}. Bit j of `x`/`z` is qubit j+1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliString {
    pub n: usize,
    pub x: u64,
    pub z: u64,
    /// exponent of i, in 0..4
    pub phase: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        assert!(n <= 64);
        PauliString { n, x: 0, z: 0, phase: 0 }
    }

    /// Single-qubit Pauli `kind` ∈ {'I','X','Y','Z'} on qubit `q` (0-based).
    pub fn single(n: usize, q: usize, kind: char) -> Self {
        let mut p = Self::identity(n);
        p.set(q, kind);
        p
    }

    pub fn set(&mut self, q: usize, kind: char) {
        let b = 1u64 << q;
        self.x &= !b;
        self.z &= !b;
        match kind {
            'I' => {}
            'X' => self.x |= b,
            'Y' => {
                self.x |= b;
                self.z |= b
            }
            'Z' => self.z |= b,
            _ => panic!("unknown Pauli {kind}"),
        }
    }

    pub fn get(&self, q: usize) -> char {
        match ((self.x >> q) & 1, (self.z >> q) & 1) {
            (0, 0) => 'I',
            (1, 0) => 'X',
            (1, 1) => 'Y',
            _ => 'Z',
        }
    }

    /// Parses labels such as "XIZ", "-YY", "+iZ", "-iX".
    pub fn parse(label: &str) -> Result<Self> {
        let (phase, body) = if let Some(r) = label.strip_prefix("-i") {
            (3, r)
        } else if let Some(r) = label.strip_prefix("+i") {
            (1, r)
        } else if let Some(r) = label.strip_prefix('i') {
            (1, r)
        } else if let Some(r) = label.strip_prefix('-') {
            (2, r)
        } else if let Some(r) = label.strip_prefix('+') {
            (0, r)
        } else {
            (0, label)
        };
        let mut p = PauliString::identity(body.len());
        for (q, ch) in body.chars().enumerate() {
            if !"IXYZ".contains(ch) {
                return Err(Error::Parse(format!("bad Pauli label {label}")));
            }
            p.set(q, ch);
        }
        p.phase = phase;
        Ok(p)
    }

    pub fn label(&self) -> String {
        let pre = ["+", "+i", "-", "-i"][self.phase as usize % 4];
        let body: String = (0..self.n).map(|q| self.get(q)).collect();
        format!("{pre}{body}")
    }

    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase % 2 == 0
    }

    pub fn commutes(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 0
    }

    /// Operator product self · other.
    pub fn mul(&self, other: &PauliString) -> PauliString {
        assert_eq!(self.n, other.n);
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        // σ-form → i^{|x∧z|} X^x Z^z, multiply, convert back
        let e = self.phase as u32
            + other.phase as u32
            + (self.x & self.z).count_ones()
            + (other.x & other.z).count_ones()
            + 2 * (self.z & other.x).count_ones()
            + 4 * 64
            - (x & z).count_ones();
        PauliString { n: self.n, x, z, phase: (e % 4) as u8 }
    }

    /// p ⊕ q: tensor product with `other` on the later qubits.
    pub fn tensor(&self, other: &PauliString) -> PauliString {
        assert!(self.n + other.n <= 64);
        PauliString {
            n: self.n + other.n,
            x: self.x | (other.x << self.n),
            z: self.z | (other.z << self.n),
            phase: (self.phase + other.phase) % 4,
        }
    }

    pub fn phase_value(&self) -> C64 {
        [ONE, I, -ONE, -I][self.phase as usize % 4]
    }

    /// Action on a computational basis index (qubit 1 = MSB): returns the
    /// image index and amplitude.
    pub fn apply_basis(&self, idx: usize) -> (usize, C64) {
        let mut flip = 0usize;
        let mut amp = self.phase_value();
        for q in 0..self.n {
            let sh = self.n - 1 - q;
            let bit = (idx >> sh) & 1;
            match self.get(q) {
                'X' => flip |= 1 << sh,
                'Y' => {
                    flip |= 1 << sh;
                    amp *= if bit == 0 { I } else { -I };
                }
                'Z' => {
                    if bit == 1 {
                        amp = -amp;
                    }
                }
                _ => {}
            }
        }
        (idx ^ flip, amp)
    }

    pub fn to_matrix(&self) -> CMatrix {
        let d = 1usize << self.n;
        let mut m = CMatrix::zeros(d, d);
        for c in 0..d {
            let (r, a) = self.apply_basis(c);
            m[(r, c)] = a;
        }
        m
    }
}

pub fn pauli_dense(p: &PauliString) -> Result<DenseOperator> {
    check_cap(1usize << p.n)?;
    DenseOperator::with_tag(p.to_matrix(), p.n, 1)
}

pub fn pauli_1q(kind: char) -> CMatrix {
    PauliString::single(1, 0, kind).to_matrix()
}

// ---------------------------------------------------------------------------
// Pure states

#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    pub n: usize,
    amps: Vec<C64>,
}

impl PureState {
    pub fn zero(n: usize) -> Self {
        let mut amps = vec![ZERO; 1 << n];
        amps[0] = ONE;
        PureState { n, amps }
    }

    pub fn basis(n: usize, idx: usize) -> Self {
        let mut amps = vec![ZERO; 1 << n];
        amps[idx] = ONE;
        PureState { n, amps }
    }

    pub fn from_amplitudes(n: usize, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != 1 << n {
            return Err(Error::DimensionMismatch(format!("{} amplitudes for {n} qubits", amps.len())));
        }
        let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!("state norm {norm} ≠ 1")));
        }
        Ok(PureState { n, amps })
    }

    /// Normalizes any nonzero vector.
    pub fn normalized(n: usize, mut amps: Vec<C64>) -> Result<Self> {
        let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidInput("zero vector".into()));
        }
        for z in amps.iter_mut() {
            *z /= norm;
        }
        Self::from_amplitudes(n, amps)
    }

    /// |Ω_n⟩ = 2^{-n/2} Σ_x |x⟩|x⟩ on two copies of n qubits.
    pub fn epr(n: usize) -> Self {
        let d = 1usize << n;
        let mut amps = vec![ZERO; d * d];
        let a = C64::new((d as f64).powf(-0.5), 0.0);
        for x in 0..d {
            amps[x * d + x] = a;
        }
        PureState { n: 2 * n, amps }
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }
    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn inner(&self, other: &PureState) -> C64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn projector(&self) -> CMatrix {
        let d = self.dim();
        CMatrix::from_fn(d, d, |i, j| self.amps[i] * self.amps[j].conj())
    }

    pub fn tensor(&self, other: &PureState) -> PureState {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        PureState { n: self.n + other.n, amps }
    }

    pub fn tensor_power(&self, k: usize) -> PureState {
        let mut out = PureState { n: 0, amps: vec![ONE] };
        for _ in 0..k {
            out = out.tensor(self);
        }
        out
    }

    pub fn apply_matrix(&self, m: &CMatrix) -> PureState {
        PureState { n: self.n, amps: m.mul_vec(&self.amps) }
    }
}

// ---------------------------------------------------------------------------
// Sparse and per-qubit factorized operators

/// Coordinate-list operator. Entries with equal coordinates add.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseOperator {
    pub dim: usize,
    pub entries: Vec<(usize, usize, C64)>,
}

impl SparseOperator {
    pub fn from_dense(m: &CMatrix) -> Self {
        let mut entries = vec![];
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                if m[(r, c)] != ZERO {
                    entries.push((r, c, m[(r, c)]));
                }
            }
        }
        SparseOperator { dim: m.rows(), entries }
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for &(r, c, v) in &self.entries {
            m[(r, c)] += v;
        }
        m
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; self.dim];
        for &(r, c, a) in &self.entries {
            out[r] += a * v[c];
        }
        out
    }

    pub fn apply_adjoint(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; self.dim];
        for &(r, c, a) in &self.entries {
            out[c] += a.conj() * v[r];
        }
        out
    }

    /// ⟨u| self |v⟩
    pub fn sandwich(&self, u: &[C64], v: &[C64]) -> C64 {
        self.entries.iter().map(|&(r, c, a)| u[r].conj() * a * v[c]).sum()
    }

    pub fn trace(&self) -> C64 {
        self.entries.iter().filter(|e| e.0 == e.1).map(|e| e.2).sum()
    }
}

/// ⊗_q F_q over qubits, each F_q acting on the k copies of qubit q (2^k × 2^k,
/// copy 1 = most significant local bit).
#[derive(Clone, Debug, PartialEq)]
pub struct FactorizedOperator {
    pub n: usize,
    pub k: usize,
    pub factors: Vec<CMatrix>,
}

/// Table mapping a local k-bit index of qubit q into its global contribution.
fn scatter_table(n: usize, k: usize, q: usize) -> Vec<usize> {
    let nb = n * k;
    (0..1usize << k)
        .map(|l| {
            (0..k)
                .filter(|c| (l >> (k - 1 - c)) & 1 == 1)
                .map(|c| 1usize << (nb - 1 - (c * n + q)))
                .sum()
        })
        .collect()
}

impl FactorizedOperator {
    pub fn uniform(n: usize, k: usize, f: CMatrix) -> Self {
        assert_eq!(f.rows(), 1 << k);
        FactorizedOperator { n, k, factors: vec![f; n] }
    }

    pub fn new(n: usize, k: usize, factors: Vec<CMatrix>) -> Self {
        assert_eq!(factors.len(), n);
        assert!(factors.iter().all(|f| f.rows() == 1 << k && f.cols() == 1 << k));
        FactorizedOperator { n, k, factors }
    }

    pub fn dim(&self) -> usize {
        1 << (self.n * self.k)
    }

    /// tr(self† other), computed qubit by qubit.
    pub fn inner(&self, other: &FactorizedOperator) -> C64 {
        self.factors.iter().zip(&other.factors).map(|(a, b)| a.inner(b)).product()
    }

    pub fn trace(&self) -> C64 {
        self.factors.iter().map(|f| f.trace()).product()
    }

    pub fn adjoint(&self) -> FactorizedOperator {
        FactorizedOperator { n: self.n, k: self.k, factors: self.factors.iter().map(|f| f.adjoint()).collect() }
    }

    pub fn matmul(&self, other: &FactorizedOperator) -> FactorizedOperator {
        FactorizedOperator {
            n: self.n,
            k: self.k,
            factors: self.factors.iter().zip(&other.factors).map(|(a, b)| a.matmul(b)).collect(),
        }
    }

    pub fn to_sparse(&self) -> SparseOperator {
        let tables: Vec<Vec<usize>> = (0..self.n).map(|q| scatter_table(self.n, self.k, q)).collect();
        let local: Vec<Vec<(usize, usize, C64)>> = self
            .factors
            .iter()
            .map(|f| {
                let mut v = vec![];
                for r in 0..f.rows() {
                    for c in 0..f.cols() {
                        if f[(r, c)] != ZERO {
                            v.push((r, c, f[(r, c)]));
                        }
                    }
                }
                v
            })
            .collect();
        let mut entries = vec![(0usize, 0usize, ONE)];
        for (q, lq) in local.iter().enumerate() {
            let mut next = Vec::with_capacity(entries.len() * lq.len());
            for &(r, c, a) in &entries {
                for &(lr, lc, b) in lq {
                    next.push((r + tables[q][lr], c + tables[q][lc], a * b));
                }
            }
            entries = next;
        }
        SparseOperator { dim: self.dim(), entries }
    }

    pub fn to_dense(&self) -> Result<DenseOperator> {
        check_cap(self.dim())?;
        DenseOperator::with_tag(self.to_sparse().to_dense(), self.n, self.k)
    }
}

/// Maps per-qubit local indices (k bits each) to the global copy-major index.
pub fn global_index(n: usize, k: usize, locals: &[usize]) -> usize {
    let nb = n * k;
    let mut g = 0usize;
    for (q, &l) in locals.iter().enumerate() {
        for c in 0..k {
            if (l >> (k - 1 - c)) & 1 == 1 {
                g |= 1 << (nb - 1 - (c * n + q));
            }
        }
    }
    g
}

// ---------------------------------------------------------------------------
// Symmetric subspace

/// Orthonormal basis of Sym^k(C^D): one normalized orbit sum per multiset.
#[derive(Clone, Debug)]
pub struct SymmetricBasis {
    pub d: usize,
    pub k: usize,
    /// Each basis vector as (indices of its orbit, common amplitude).
    pub vectors: Vec<(Vec<usize>, f64)>,
    lookup: HashMap<usize, usize>,
}

impl SymmetricBasis {
    pub fn new(d: usize, k: usize) -> Result<Self> {
        let total = d.checked_pow(k as u32).ok_or(Error::TooLarge { dim: usize::MAX, cap: DIM_CAP })?;
        check_cap(total)?;
        let mut by_key: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        let mut order: Vec<Vec<usize>> = vec![];
        for idx in 0..total {
            let mut digits: Vec<usize> = (0..k).map(|c| (idx / d.pow((k - 1 - c) as u32)) % d).collect();
            digits.sort_unstable();
            let e = by_key.entry(digits.clone()).or_default();
            if e.is_empty() {
                order.push(digits);
            }
            e.push(idx);
        }
        order.sort();
        let mut lookup = HashMap::new();
        let vectors: Vec<(Vec<usize>, f64)> = order
            .iter()
            .enumerate()
            .map(|(b, key)| {
                let idxs = by_key.remove(key).unwrap();
                for &i in &idxs {
                    lookup.insert(i, b);
                }
                let amp = 1.0 / (idxs.len() as f64).sqrt();
                (idxs, amp)
            })
            .collect();
        Ok(SymmetricBasis { d, k, vectors, lookup })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Coordinates of a (symmetric) vector in this basis.
    pub fn coordinates(&self, v: &[C64]) -> Vec<C64> {
        self.vectors.iter().map(|(idx, a)| idx.iter().map(|&i| v[i]).sum::<C64>() * *a).collect()
    }

    /// Compression B† X B of a sparse operator onto the subspace.
    pub fn compress(&self, x: &SparseOperator) -> CMatrix {
        let m = self.len();
        let mut out = CMatrix::zeros(m, m);
        let mut cols: HashMap<usize, Vec<(usize, C64)>> = HashMap::new();
        for &(r, c, a) in &x.entries {
            cols.entry(c).or_default().push((r, a));
        }
        for (j, (idx, amp)) in self.vectors.iter().enumerate() {
            for &c in idx {
                if let Some(list) = cols.get(&c) {
                    for &(r, a) in list {
                        if let Some(&i) = self.lookup.get(&r) {
                            out[(i, j)] += a * (amp * self.vectors[i].1);
                        }
                    }
                }
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Serialization

const MAGIC: &[u8; 4] = b"DLOP";
const FORMAT_VERSION: u32 = 1;

/// Writes the binary container: magic "DLOP", u32 version, u64 dim, u32 n,
/// u32 k (both 0 when untagged), then dim² (re, im) f64 pairs row-major, all
/// little-endian.
pub fn write_binary<W: Write>(op: &DenseOperator, mut w: W) -> Result<()> {
    let (n, k) = op.tag.unwrap_or((0, 0));
    w.write_all(MAGIC)?;
    w.write_all(&FORMAT_VERSION.to_le_bytes())?;
    w.write_all(&(op.dim() as u64).to_le_bytes())?;
    w.write_all(&(n as u32).to_le_bytes())?;
    w.write_all(&(k as u32).to_le_bytes())?;
    for z in op.mat.data() {
        w.write_all(&z.re.to_le_bytes())?;
        w.write_all(&z.im.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_binary<R: Read>(mut r: R) -> Result<DenseOperator> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Parse("bad magic".into()));
    }
    let mut b4 = [0u8; 4];
    let mut b8 = [0u8; 8];
    r.read_exact(&mut b4)?;
    if u32::from_le_bytes(b4) != FORMAT_VERSION {
        return Err(Error::Parse("unsupported container version".into()));
    }
    r.read_exact(&mut b8)?;
    let dim = u64::from_le_bytes(b8) as usize;
    check_cap(dim)?;
    r.read_exact(&mut b4)?;
    let n = u32::from_le_bytes(b4) as usize;
    r.read_exact(&mut b4)?;
    let k = u32::from_le_bytes(b4) as usize;
    let mut data = Vec::with_capacity(dim * dim);
    for _ in 0..dim * dim {
        r.read_exact(&mut b8)?;
        let re = f64::from_le_bytes(b8);
        r.read_exact(&mut b8)?;
        let im = f64::from_le_bytes(b8);
        data.push(C64::new(re, im));
    }
    let mat = CMatrix::from_vec(dim, dim, data);
    if k > 0 {
        DenseOperator::with_tag(mat, n, k)
    } else {
        DenseOperator::new(mat)
    }
}

#[derive(Serialize, Deserialize)]
struct OperatorJson {
    dim: usize,
    n: Option<usize>,
    k: Option<usize>,
    /// row-major [re, im] pairs
    entries: Vec<[f64; 2]>,
}

pub fn to_json(op: &DenseOperator) -> String {
    let j = OperatorJson {
        dim: op.dim(),
        n: op.tag.map(|t| t.0),
        k: op.tag.map(|t| t.1),
        entries: op.mat.data().iter().map(|z| [z.re, z.im]).collect(),
    };
    serde_json::to_string(&j).expect("serializable")
}

pub fn from_json(s: &str) -> Result<DenseOperator> {
    let j: OperatorJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    if j.entries.len() != j.dim * j.dim {
        return Err(Error::Parse("entry count does not match dim".into()));
    }
    let mat = CMatrix::from_vec(j.dim, j.dim, j.entries.iter().map(|e| C64::new(e[0], e[1])).collect());
    match (j.n, j.k) {
        (Some(n), Some(k)) => DenseOperator::with_tag(mat, n, k),
        _ => DenseOperator::new(mat),
    }
}

// ---------------------------------------------------------------------------
// Common fixed operators

/// Single-qubit factor of a copy permutation: P|x_1,…,x_k⟩ = |x_{π⁻¹(1)},…,x_{π⁻¹(k)}⟩
/// with `perm[c] = π(c)` (0-based).
pub fn permutation_matrix_1q(perm: &[usize]) -> CMatrix {
    let k = perm.len();
    let d = 1usize << k;
    let mut m = CMatrix::zeros(d, d);
    for x in 0..d {
        let bit = |c: usize| (x >> (k - 1 - c)) & 1;
        let mut y = 0usize;
        for c in 0..k {
            // output copy perm[c] receives input copy c
            if bit(c) == 1 {
                y |= 1 << (k - 1 - perm[c]);
            }
        }
        m[(y, x)] = ONE;
    }
    m
}

/// Swap of two copies of n qubits.
pub fn swap_operator(n: usize) -> Result<DenseOperator> {
    FactorizedOperator::uniform(n, 2, permutation_matrix_1q(&[1, 0])).to_dense()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_small_cases() {
        let i2 = DenseOperator::with_tag(CMatrix::identity(2), 1, 1).unwrap();
        assert_eq!(kron(&i2, &i2).unwrap().mat, CMatrix::identity(4));
        let x = pauli_dense(&PauliString::parse("X").unwrap()).unwrap();
        let xx = kron(&x, &x).unwrap();
        for r in 0..4 {
            for c in 0..4 {
                let expect = if r + c == 3 { ONE } else { ZERO };
                assert_eq!(xx.mat[(r, c)], expect);
            }
        }
        assert_eq!(xx.tag(), Some((1, 2)));
    }

    #[test]
    fn kron_rejects_oversize() {
        let a = DenseOperator::new(CMatrix::identity(128)).unwrap();
        assert!(matches!(kron(&a, &a), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn partial_transpose_of_epr_projector_is_swap() {
        for n in 1..=3 {
            let omega = PureState::epr(n);
            let pi_o = DenseOperator::with_tag(omega.projector().scale_real((1 << n) as f64), n, 2).unwrap();
            let pt = partial_transpose(&pi_o, 1, n, 2).unwrap();
            assert!(pt.approx_eq(&swap_operator(n).unwrap(), 1e-14));
        }
    }

    #[test]
    fn partial_transpose_requires_tag() {
        let a = DenseOperator::new(CMatrix::identity(4)).unwrap();
        assert_eq!(partial_transpose(&a, 1, 1, 2), Err(Error::Unfactorized));
    }

    #[test]
    fn trace_norm_of_swap() {
        let f = swap_operator(1).unwrap();
        assert!((trace_norm(&f) - 4.0).abs() < 1e-12);
        let id = DenseOperator::identity(2, 1).unwrap();
        assert!((trace_norm(&id) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn pauli_matrices() {
        let z = PauliString::parse("Z").unwrap().to_matrix();
        assert_eq!(z, CMatrix::diag(&[ONE, -ONE]));
        let x1 = PauliString::parse("XI").unwrap().to_matrix();
        assert_eq!(x1, pauli_1q('X').kron(&CMatrix::identity(2)));
        let y = PauliString::parse("Y").unwrap().to_matrix();
        assert_eq!(y[(0, 1)], -I);
        assert_eq!(y[(1, 0)], I);
    }

    #[test]
    fn pauli_product_phases() {
        let x = PauliString::parse("X").unwrap();
        let y = PauliString::parse("Y").unwrap();
        let z = PauliString::parse("Z").unwrap();
        assert_eq!(x.mul(&y), PauliString::parse("iZ").unwrap());
        assert_eq!(y.mul(&x), PauliString::parse("-iZ").unwrap());
        assert_eq!(z.mul(&x), PauliString::parse("iY").unwrap());
        assert_eq!(y.mul(&y), PauliString::identity(1));
    }

    #[test]
    fn vacuum_expectation_of_diagonal_paulis() {
        for label in ["IZ", "ZZ", "-ZI", "XI", "YZ", "iZZ"] {
            let p = PauliString::parse(label).unwrap();
            let v = p.to_matrix()[(0, 0)];
            let diag_trivial = p.x == 0 && p.phase == 0;
            assert_eq!(v == ONE, diag_trivial, "{label}");
        }
    }

    #[test]
    fn binary_and_json_round_trip() {
        let m = CMatrix::from_fn(4, 4, |i, j| C64::new(i as f64 - 0.5 * j as f64, (i * j) as f64 * 0.25));
        let op = DenseOperator::with_tag(m, 1, 2).unwrap();
        let mut buf = vec![];
        write_binary(&op, &mut buf).unwrap();
        assert_eq!(&buf[..4], b"DLOP");
        assert_eq!(buf.len(), 4 + 4 + 8 + 4 + 4 + 16 * 16);
        assert_eq!(read_binary(&buf[..]).unwrap(), op);
        assert_eq!(from_json(&to_json(&op)).unwrap(), op);
    }

    #[test]
    fn factorized_matches_dense_kron() {
        let a = CMatrix::from_fn(4, 4, |i, j| C64::new((i + 2 * j) as f64, (i as f64) - (j as f64)));
        let b = permutation_matrix_1q(&[1, 0]);
        let f = FactorizedOperator::new(2, 2, vec![a.clone(), b.clone()]);
        let dense = f.to_dense().unwrap();
        // reorder qubit-major kron(a, b) into copy-major layout: qubit-major bits
        // (q1c1, q1c2, q2c1, q2c2) → copy-major (c1q1, c1q2, c2q1, c2q2)
        let qm = a.kron(&b);
        let cm = permute_bits(&qm, 4, &[0, 2, 1, 3]);
        assert_eq!(dense.mat(), &cm);
        assert!((f.inner(&f) - dense.inner(&dense)).norm() < 1e-9);
    }

    #[test]
    fn symmetric_basis_dimension() {
        let b = SymmetricBasis::new(8, 4).unwrap();
        assert_eq!(b.len(), 330);
        let b2 = SymmetricBasis::new(2, 2).unwrap();
        assert_eq!(b2.len(), 3);
        let id = SparseOperator::from_dense(&CMatrix::identity(4));
        assert!(b2.compress(&id).sub(&CMatrix::identity(3)).max_abs() < 1e-14);
    }
}
