//! Exact design checks: superblock gluing, Clifford 3-design by enumeration,
//! the R(T₄) witness, Haar fourth moments and the EPR relative-error norm.

use super::montecarlo::monte_carlo;
use super::ppt::{distinct_projector, DistinctFlavor};
use super::report::{ExperimentReport, Params};
use super::{timed, RunOptions};
use crate::circuits::{build_superblock, sample_group_element, SuperblockSpec};
use crate::commutant::{approx_haar_twirl, r_subspace, ExactTwirl, StochasticLagrangianSubspace};
use crate::error::{Error, Result};
use crate::groups::clifford::enumerate_cliffords;
use crate::groups::haar::haar_orthogonal_matrix;
use crate::groups::matchgate::sample_haar_matchgate;
use crate::groups::GroupTag;
use crate::linalg::{herm_eigvals, CMatrix, C64};
use crate::operator::{permute_bits, trace_norm, DenseOperator};
use crate::rng::complex_normal;
use crate::sim::gaussian_amplitude_sq;
use serde_json::json;

const GLUING_MAX_BITS: usize = 10;

struct BlockTwirl {
    elements: Vec<CMatrix>,
    wg: crate::linalg::RMatrix,
}

impl BlockTwirl {
    fn new(group: GroupTag, b: usize, k: usize) -> Result<Self> {
        let tw = ExactTwirl::new(group, b, k)?;
        let elements = tw.basis.elements.iter().map(|e| e.to_dense().map(|d| d.into_mat())).collect::<Result<_>>()?;
        Ok(BlockTwirl { elements, wg: tw.table.wg })
    }

    /// Twirls the tensor factor of `x` (an operator on k copies of n qubits)
    /// that sits on `support` in every copy.
    fn apply(&self, x: &CMatrix, n: usize, k: usize, support: &[usize]) -> CMatrix {
        let nbits = n * k;
        let mut order: Vec<usize> = (0..k).flat_map(|c| support.iter().map(move |q| c * n + q)).collect();
        let bb = order.len();
        order.extend((0..nbits).filter(|p| !order.contains(p)).collect::<Vec<_>>());
        let mut perm = vec![0; nbits];
        for (t, &p) in order.iter().enumerate() {
            perm[p] = t;
        }
        let xp = permute_bits(x, nbits, &perm);
        let (db, dr) = (1usize << bb, 1usize << (nbits - bb));
        // Y_σ = tr_B((σ† ⊗ I) X)
        let ys: Vec<CMatrix> = self
            .elements
            .iter()
            .map(|s| {
                let mut y = CMatrix::zeros(dr, dr);
                for c in 0..db {
                    for b in 0..db {
                        let w = s[(c, b)].conj();
                        if w == C64::new(0.0, 0.0) {
                            continue;
                        }
                        for r in 0..dr {
                            for r2 in 0..dr {
                                y[(r, r2)] += w * xp[(c * dr + r, b * dr + r2)];
                            }
                        }
                    }
                }
                y
            })
            .collect();
        let mut out = CMatrix::zeros(db * dr, db * dr);
        for (t, tau) in self.elements.iter().enumerate() {
            let mut z = CMatrix::zeros(dr, dr);
            for (s, y) in ys.iter().enumerate() {
                if self.wg[(t, s)] != 0.0 {
                    z.axpy(C64::new(self.wg[(t, s)], 0.0), y);
                }
            }
            for c in 0..db {
                for b in 0..db {
                    let w = tau[(c, b)];
                    if w == C64::new(0.0, 0.0) {
                        continue;
                    }
                    for r in 0..dr {
                        for r2 in 0..dr {
                            out[(c * dr + r, b * dr + r2)] += w * z[(r, r2)];
                        }
                    }
                }
            }
        }
        let inv: Vec<usize> = order.clone();
        permute_bits(&out, nbits, &inv)
    }
}

/// Superblock twirl of |0⟩⟨0|^{⊗k}, composed from exact twirls of the
/// individual blocks. Returns the state after layer 1 and after both layers.
pub fn superblock_twirl_of_zero(group: GroupTag, n: usize, xi: usize, k: usize) -> Result<(CMatrix, CMatrix)> {
    if n * k > GLUING_MAX_BITS {
        return Err(Error::TooLarge { dim: 1 << (n * k), cap: 1 << GLUING_MAX_BITS });
    }
    if !matches!(group, GroupTag::U | GroupTag::O | GroupTag::Cl) {
        return Err(Error::InvalidInput(format!("block twirls are implemented for U, O and Cl, not {group}")));
    }
    let spec = build_superblock(&SuperblockSpec::new(n, xi, group))?;
    let d = 1usize << (n * k);
    let mut x = CMatrix::zeros(d, d);
    x[(0, 0)] = C64::new(1.0, 0.0);
    let mut cache: Vec<(usize, BlockTwirl)> = vec![];
    let mut after = vec![];
    for layer in &spec.components[0].layers {
        for brick in layer {
            let b = brick.support.len();
            if !cache.iter().any(|(s, _)| *s == b) {
                cache.push((b, BlockTwirl::new(group, b, k)?));
            }
            let tw = &cache.iter().find(|(s, _)| *s == b).unwrap().1;
            x = tw.apply(&x, n, k, &brick.support);
        }
        after.push(x.clone());
    }
    Ok((after[0].clone(), after.pop().unwrap()))
}

/// ‖Φ_superblock(|0⟩⟨0|^{⊗k}) − Φ_G(|0⟩⟨0|^{⊗k})‖₁ with exact block twirls;
/// the single-layer distance is reported as `single_layer_distance`.
pub fn gluing_check(group: GroupTag, n: usize, xi: usize, k: usize) -> Result<ExperimentReport> {
    let mut p = Params::new();
    p.insert("group".into(), json!(group.to_string()));
    p.insert("n".into(), json!(n));
    p.insert("xi".into(), json!(xi));
    p.insert("k".into(), json!(k));
    let ((two, one), wall) = timed(|| {
        let (l1, l2) = superblock_twirl_of_zero(group, n, xi, k)?;
        let mut z = CMatrix::zeros(1 << (n * k), 1 << (n * k));
        z[(0, 0)] = C64::new(1.0, 0.0);
        let zero = DenseOperator::with_tag(z, n, k)?;
        let haar = ExactTwirl::new(group, n, k)?.apply(&zero)?;
        let dist = |x: CMatrix| -> Result<f64> { Ok(trace_norm(&DenseOperator::with_tag(x, n, k)?.sub(&haar))) };
        Ok((dist(l2)?, dist(l1)?))
    })?;
    let mut r = ExperimentReport::exact("gluing_check", p, two, 0).with_extra("single_layer_distance", one);
    r.wall_time_s = wall;
    Ok(r)
}

fn random_hermitian(n: usize, k: usize, opts: &RunOptions, id: &str) -> Result<DenseOperator> {
    let mut rng = opts.stream(id).rng();
    let d = 1usize << (n * k);
    let g = CMatrix::from_fn(d, d, |_, _| complex_normal(&mut rng));
    DenseOperator::with_tag(g.hermitian_part(), n, k)
}

/// max |Φ_Cl(A) − Φ_U(A)| over entries for a random Hermitian A on (n, k),
/// with Φ_Cl the average over the whole enumerated Clifford group (n ≤ 2).
pub fn clifford_enumeration_deviation(n: usize, k: usize, opts: &RunOptions) -> Result<ExperimentReport> {
    let id = "clifford_enumeration_deviation";
    let mut p = Params::new();
    p.insert("n".into(), json!(n));
    p.insert("k".into(), json!(k));
    if n > 2 {
        return Err(Error::TooLarge { dim: 1 << n, cap: 4 });
    }
    let ((dev, size, dev_commutant), wall) = timed(|| {
        let a = random_hermitian(n, k, opts, id)?;
        let group = enumerate_cliffords(n);
        let mut acc = CMatrix::zeros(a.dim(), a.dim());
        for t in &group {
            acc.axpy(C64::new(1.0, 0.0), a.conjugate_tensor_power(&t.to_dense()?.into_mat())?.mat());
        }
        let avg = acc.scale_real(1.0 / group.len() as f64);
        let unitary = ExactTwirl::new(GroupTag::U, n, k)?.apply(&a)?;
        let scale = unitary.max_abs().max(1e-300);
        let dev = avg.sub(unitary.mat()).max_abs() / scale;
        let dev_c = if n + 1 >= k {
            ExactTwirl::new(GroupTag::Cl, n, k)?.apply(&a)?.sub(&unitary).max_abs() / scale
        } else {
            f64::NAN
        };
        Ok((dev, group.len(), dev_c))
    })?;
    let mut r = ExperimentReport::exact(id, p, dev, opts.seed)
        .with_extra("group_order_mod_phases", size as f64)
        .with_extra("commutant_route_deviation", dev_commutant);
    r.wall_time_s = wall;
    Ok(r)
}

/// 1 − tr(R† Φ_U(R)) / tr(R† R) for R = R(T₄) on n qubits, k = 4. The Clifford
/// twirl fixes R, so this is the gap between the two fourth moments.
pub fn t4_witness_gap(n: usize) -> Result<ExperimentReport> {
    let mut p = Params::new();
    p.insert("n".into(), json!(n));
    p.insert("k".into(), json!(4));
    let ((gap, cl, u, norm), wall) = timed(|| {
        let r = r_subspace(&StochasticLagrangianSubspace::t4(), n);
        let norm = r.inner(&r).re;
        let obs = r.adjoint();
        let cl = ExactTwirl::new(GroupTag::Cl, n, 4)?.expectation_factorized(&r, &obs)?.re;
        let u = ExactTwirl::new(GroupTag::U, n, 4)?.expectation_factorized(&r, &obs)?.re;
        Ok(((cl - u) / norm, cl, u, norm))
    })?;
    let mut rep = ExperimentReport::exact("t4_witness_gap", p, gap, 0)
        .with_extra("clifford_value", cl)
        .with_extra("unitary_value", u)
        .with_extra("norm", norm);
    rep.wall_time_s = wall;
    Ok(rep)
}

/// Monte Carlo E|⟨0ⁿ|U|0ⁿ⟩|⁴ for Haar U, O, Cl or M with the exact value in
/// `exact_value`.
pub fn haar_fourth_moment(group: GroupTag, n: usize, samples: u64, opts: &RunOptions) -> Result<ExperimentReport> {
    let id = "haar_fourth_moment";
    let d = 2f64.powi(n as i32);
    let exact = match group {
        GroupTag::U | GroupTag::Cl => 2.0 / (d * (d + 1.0)),
        GroupTag::O => 3.0 / (d * (d + 2.0)),
        GroupTag::M => super::anticoncentration::matchgate_uniform_chi_f64(n) / (d * d),
        GroupTag::Sp => return Err(Error::InvalidInput("use symplectic_state_witness for the symplectic group".into())),
    };
    let mut p = Params::new();
    p.insert("group".into(), json!(group.to_string()));
    p.insert("n".into(), json!(n));
    p.insert("samples".into(), json!(samples));
    let (est, wall) = timed(|| {
        monte_carlo(samples, opts.stream(&format!("{id}/{group}")), opts.workers, |s| {
            let mut rng = s.rng();
            let a = match group {
                GroupTag::O => haar_orthogonal_matrix(1 << n, &mut rng)[(0, 0)].powi(2),
                GroupTag::M => gaussian_amplitude_sq(&sample_haar_matchgate(n, &mut rng)),
                _ => sample_group_element(group, n, &mut rng)?.to_local_dense(n)?[(0, 0)].norm_sqr(),
            };
            Ok(a * a)
        })
    })?;
    let mut r = ExperimentReport::sampled(id, p, &est, opts.seed).with_extra("exact_value", exact);
    r.wall_time_s = wall;
    Ok(r)
}

/// ‖[Π_dist ⊗ Π_dist] [(Φ_G − Φ_a) ⊗ I](|Ω⟩⟨Ω|) [Π_dist ⊗ Π_dist]‖_∞, where
/// Φ_a(A) = 2^{−nk} Σ_π tr(A π^{−1}) π and |Ω⟩ is maximally entangled between
/// the k-copy space and a reference; the prefactor 4^{nk}(1 + k²/2ⁿ)/k! and the
/// resulting ε' are reported alongside.
pub fn epr_relative_error_diagnostic(group: GroupTag, n: usize, k: usize) -> Result<ExperimentReport> {
    if n * k > 4 {
        return Err(Error::TooLarge { dim: 1 << (2 * n * k), cap: 256 });
    }
    let mut p = Params::new();
    p.insert("group".into(), json!(group.to_string()));
    p.insert("n".into(), json!(n));
    p.insert("k".into(), json!(k));
    let (norm, wall) = timed(|| {
        let d = 1usize << (n * k);
        let tw = ExactTwirl::new(group, n, k)?;
        let mut choi = CMatrix::zeros(d * d, d * d);
        for i in 0..d {
            for j in 0..d {
                let mut m = CMatrix::zeros(d, d);
                m[(i, j)] = C64::new(1.0, 0.0);
                let e = DenseOperator::with_tag(m, n, k)?;
                let diff = tw.apply(&e)?.sub(&approx_haar_twirl(n, k, &e)?);
                for r in 0..d {
                    for c in 0..d {
                        choi[(r * d + i, c * d + j)] = diff.mat()[(r, c)] / d as f64;
                    }
                }
            }
        }
        let pd = distinct_projector(n, k, DistinctFlavor::Standard)?;
        let keep: Vec<bool> = (0..d * d).map(|x| pd.mat()[(x / d, x / d)].re > 0.5 && pd.mat()[(x % d, x % d)].re > 0.5).collect();
        let proj = CMatrix::from_fn(d * d, d * d, |r, c| if keep[r] && keep[c] { choi[(r, c)] } else { C64::new(0.0, 0.0) });
        Ok(herm_eigvals(&proj.hermitian_part()).iter().fold(0.0f64, |m, l| m.max(l.abs())))
    })?;
    let fact: f64 = (1..=k).map(|i| i as f64).product();
    let dn = 2f64.powi(n as i32);
    let pre = 4f64.powi((n * k) as i32) / fact * (1.0 + (k * k) as f64 / dn);
    let mut r = ExperimentReport::exact("epr_relative_error_diagnostic", p, norm, 0)
        .with_extra("prefactor", pre)
        .with_extra("epsilon_prime", pre * norm + (k * k) as f64 / dn);
    r.wall_time_s = wall;
    Ok(r)
}
