//! Lightcone distinguishers and state-design witnesses.
//!
//! Each distinguisher perturbs a commutant state by Z on qubit 1 of copy 1,
//! applies the sampled unitary to every copy and averages a local projector
//! over the qubit i ∈ [n]; shallow circuits leave the projector untouched
//! outside the lightcone of qubit 1.

use super::montecarlo::monte_carlo_vec;
use super::report::ExperimentReport;
use super::{base_params, draw_clifford, draw_dense, draw_gaussian, timed, Ensemble, RunOptions};
use crate::error::{Error, Result};
use crate::groups::symplectic::SymplecticForm;
use crate::groups::GroupTag;
use crate::linalg::{CMatrix, C64};
use crate::operator::{check_cap, PauliString};
use serde_json::json;

fn z_diag(n: usize, q: usize) -> Vec<f64> {
    (0..1usize << n).map(|a| if (a >> (n - 1 - q)) & 1 == 1 { -1.0 } else { 1.0 }).collect()
}

/// U Z_1 U† for a dense U.
fn heisenberg_z1(u: &CMatrix, n: usize) -> CMatrix {
    let z = z_diag(n, 0);
    let d = u.rows();
    let uz = CMatrix::from_fn(d, d, |r, c| u[(r, c)] * z[c]);
    uz.matmul(&u.adjoint())
}

/// Clifford 4-copy distinguisher: E_i of the commutation sign between
/// U Z_1 U† and Z_i, i.e. E_i tr[Z_i^{⊗4} (UZ_1U† ⊗ I³) χ_n (UZ_1U† ⊗ I³)] with
/// χ_n = 16^{−n} Σ_P P^{⊗4}. Haar value −1/(4ⁿ − 1).
///
/// The two-copy quantity E_i ⟨0|U Z_i U†|0⟩² (Haar value 1/(2ⁿ + 1)) is reported
/// as `reduced_two_copy`. For n ≤ 3 the sign is recomputed densely as
/// tr(Z_i P Z_i P)/2ⁿ.
pub fn clifford4_distinguisher(ens: &Ensemble, n: usize, samples: u64, opts: &RunOptions) -> Result<ExperimentReport> {
    ens.check_n(n)?;
    let id = "clifford4_distinguisher";
    let dense = n <= 3;
    let (est, wall) = timed(|| {
        monte_carlo_vec(samples, opts.stream(id), opts.workers, 3, |s| {
            let draw = draw_clifford(ens, n, s)?;
            let p = draw.conjugate(&PauliString::single(n, 0, 'Z'))?;
            let mut sign = 0.0;
            let mut reduced = 0.0;
            for i in 0..n {
                let zi = PauliString::single(n, i, 'Z');
                sign += if p.commutes(&zi) { 1.0 } else { -1.0 };
                let pi = draw.conjugate(&zi)?;
                if (0..n).all(|q| matches!(pi.get(q), 'I' | 'Z')) {
                    reduced += 1.0;
                }
            }
            sign /= n as f64;
            let mut dev = 0.0;
            if dense {
                let u = match &draw {
                    super::CliffordDraw::Global(t) => t.to_dense()?.into_mat(),
                    super::CliffordDraw::Circuit(c) => c.to_dense()?,
                };
                let pd = heisenberg_z1(&u, n);
                let d = 1usize << n;
                let mut v = 0.0;
                for i in 0..n {
                    let z = z_diag(n, i);
                    let zp = CMatrix::from_fn(d, d, |r, c| pd[(r, c)] * z[r]);
                    v += zp.matmul(&zp).trace().re / d as f64;
                }
                dev = (v / n as f64 - sign).abs();
            }
            Ok(vec![sign, reduced / n as f64, dev])
        })
    })?;
    let d = (1u64 << n) as f64;
    let mut r = ExperimentReport::sampled(id, base_params(n, ens, samples), &est[0], opts.seed)
        .with_extra("reduced_two_copy", est[1].mean)
        .with_extra("reduced_two_copy_stderr", est[1].stderr)
        .with_extra("haar_value", -1.0 / (d * d - 1.0))
        .with_extra("haar_reduced_two_copy", 1.0 / (d + 1.0));
    if dense {
        r = r.with_extra("dense_route_mean_abs_deviation", est[2].mean);
    }
    r.wall_time_s = wall;
    Ok(r)
}

/// F_i = ‖(⟨Φ_i| ⊗ I)(W ⊗ I)|Ω_n⟩‖² for a two-qubit state |Φ_i⟩ on qubit i of
/// both copies given by its 2×2 coefficient matrix `phi` (|Φ⟩ = Σ phi_st |s⟩|t⟩).
fn local_overlap(w: &CMatrix, n: usize, i: usize, phi: [[f64; 2]; 2]) -> f64 {
    let d = 1usize << n;
    let bit = 1usize << (n - 1 - i);
    let mut f = 0.0;
    for a in (0..d).filter(|a| a & bit == 0) {
        for b in (0..d).filter(|b| b & bit == 0) {
            let mut amp = C64::new(0.0, 0.0);
            for s in 0..2 {
                for t in 0..2 {
                    if phi[s][t] != 0.0 {
                        amp += w[(a | s * bit, b | t * bit)] * phi[s][t];
                    }
                }
            }
            f += amp.norm_sqr();
        }
    }
    f / d as f64
}

fn epr_like(
    id: &str,
    group: GroupTag,
    ens: &Ensemble,
    n: usize,
    samples: u64,
    opts: &RunOptions,
    post: impl Fn(CMatrix) -> CMatrix + Sync,
    phi: [[f64; 2]; 2],
) -> Result<ExperimentReport> {
    ens.check_n(n)?;
    let (est, wall) = timed(|| {
        monte_carlo_vec(samples, opts.stream(id), opts.workers, 2, |s| {
            let u = draw_dense(group, ens, n, s)?;
            let w = post(heisenberg_z1(&u, n));
            let f: f64 = (0..n).map(|i| local_overlap(&w, n, i, phi)).sum::<f64>() / n as f64;
            Ok(vec![(4.0 * f - 1.0) / 3.0, f])
        })
    })?;
    let mut r = ExperimentReport::sampled(id, base_params(n, ens, samples), &est[0], opts.seed)
        .with_extra("raw_overlap", est[1].mean)
        .with_extra("raw_overlap_stderr", est[1].stderr);
    r.wall_time_s = wall;
    Ok(r)
}

/// Orthogonal EPR distinguisher. The estimate is E_i (4F_i − 1)/3, where F_i is
/// the weight of the local EPR pair on qubit i in (OZ_1Oᵀ ⊗ I)|Ω_n⟩; it is 1
/// outside the lightcone and (D−6)/(3(D−1)(D+2)) for Haar O (D = 2ⁿ).
pub fn orthogonal_epr_distinguisher(ens: &Ensemble, n: usize, samples: u64, opts: &RunOptions) -> Result<ExperimentReport> {
    if n > 6 {
        return Err(Error::TooLarge { dim: 1 << (2 * n), cap: 1 << 12 });
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let d = (1u64 << n) as f64;
    Ok(epr_like("orthogonal_epr_distinguisher", GroupTag::O, ens, n, samples, opts, |w| w, [[h, 0.0], [0.0, h]])?
        .with_extra("haar_value", (d - 6.0) / (3.0 * (d - 1.0) * (d + 2.0))))
}

/// Symplectic analogue with |J_n⟩ = (J ⊗ I)|Ω_n⟩ and the local J-state
/// (J ⊗ I)|Ω_1⟩ = (|01⟩ − |10⟩)/√2 on qubit i.
pub fn symplectic_j_distinguisher(ens: &Ensemble, n: usize, samples: u64, opts: &RunOptions) -> Result<ExperimentReport> {
    let form = SymplecticForm::standard(n)?;
    if n > 5 {
        return Err(Error::TooLarge { dim: 1 << (2 * n), cap: 1 << 10 });
    }
    let j = form.to_matrix();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    epr_like("symplectic_j_distinguisher", GroupTag::Sp, ens, n, samples, opts, |w| w.matmul(&j), [[0.0, h], [-h, 0.0]])
}

/// E ⟨0|U Z_i U†|0⟩², the same for Z_j and Z_iZ_j. Orthogonal values carry the
/// 2^{−n} of the EPR-normalized witness, so the Haar values are 1/(2ⁿ+1)
/// (Clifford, unitary) and 2/(2ⁿ(2ⁿ+2)) (orthogonal).
pub fn state_design_witness(
    group: GroupTag,
    ens: &Ensemble,
    n: usize,
    i: usize,
    j: usize,
    samples: u64,
    opts: &RunOptions,
) -> Result<Vec<ExperimentReport>> {
    ens.check_n(n)?;
    if i == j || i >= n || j >= n {
        return Err(Error::InvalidInput(format!("sites {i}, {j} must be distinct qubits of {n}")));
    }
    if !matches!(group, GroupTag::Cl | GroupTag::O | GroupTag::U) {
        return Err(Error::InvalidInput(format!("no two-copy state witness for group {group}")));
    }
    let id = "state_design_witness";
    let d = (1u64 << n) as f64;
    let paulis = [
        PauliString::single(n, i, 'Z'),
        PauliString::single(n, j, 'Z'),
        PauliString::single(n, i, 'Z').mul(&PauliString::single(n, j, 'Z')),
    ];
    let scale = if group == GroupTag::O { 1.0 / d } else { 1.0 };
    let (est, wall) = timed(|| {
        monte_carlo_vec(samples, opts.stream(&format!("{id}/{group}")), opts.workers, 3, |s| {
            if group == GroupTag::Cl {
                let draw = draw_clifford(ens, n, s)?;
                paulis
                    .iter()
                    .map(|p| {
                        let q = draw.conjugate(p)?;
                        Ok(if (0..n).all(|k| matches!(q.get(k), 'I' | 'Z')) { 1.0 } else { 0.0 })
                    })
                    .collect()
            } else {
                check_cap(1 << n)?;
                let u = draw_dense(group, ens, n, s)?;
                // ψ = U†|0⟩
                let psi: Vec<C64> = (0..1usize << n).map(|a| u[(0, a)].conj()).collect();
                Ok(paulis
                    .iter()
                    .map(|p| {
                        let e: C64 = (0..psi.len())
                            .map(|a| {
                                let (b, ph) = p.apply_basis(a);
                                psi[b].conj() * ph * psi[a]
                            })
                            .sum();
                        e.re * e.re * scale
                    })
                    .collect())
            }
        })
    })?;
    let haar = if group == GroupTag::O { 2.0 / (d * (d + 2.0)) } else { 1.0 / (d + 1.0) };
    let sites = [json!([i + 1]), json!([j + 1]), json!([i + 1, j + 1])];
    Ok(est
        .iter()
        .zip(sites)
        .map(|(e, site)| {
            let mut p = base_params(n, ens, samples);
            p.insert("group".into(), json!(group.to_string()));
            p.insert("sites".into(), site);
            let mut r = ExperimentReport::sampled(id, p, e, opts.seed).with_extra("haar_value", haar);
            r.wall_time_s = wall;
            r
        })
        .collect())
}

/// 2^{−n} |ψᵀ J† Y_1 ψ|² with ψ = U|0ⁿ⟩, the overlap of (Y_1 ⊗ I)|J_n⟩ with
/// |ψ⟩|ψ⟩. Zero whenever some qubit is untouched; Haar value 2/(2ⁿ(2ⁿ+1)).
pub fn symplectic_state_witness(ens: &Ensemble, n: usize, samples: u64, opts: &RunOptions) -> Result<ExperimentReport> {
    ens.check_n(n)?;
    let form = SymplecticForm::standard(n)?;
    check_cap(1 << n)?;
    let id = "symplectic_state_witness";
    let d = 1usize << n;
    let y1 = PauliString::single(n, 0, 'Y');
    let (est, wall) = timed(|| {
        monte_carlo_vec(samples, opts.stream(id), opts.workers, 1, |s| {
            let u = draw_dense(GroupTag::Sp, ens, n, s)?;
            let psi = u.column(0);
            // J† Y_1 ψ, with J real orthogonal
            let mut y = vec![C64::new(0.0, 0.0); d];
            for (a, &v) in psi.iter().enumerate() {
                let (b, ph) = y1.apply_basis(a);
                y[b] += ph * v;
            }
            let mut jy = vec![C64::new(0.0, 0.0); d];
            for (a, v) in jy.iter_mut().enumerate() {
                // (Jᵀ y)_a = J_{b a} y_b with b = a ⊕ mask
                let (b, sgn) = form.apply_basis(a);
                *v = sgn * y[b];
            }
            let q: C64 = psi.iter().zip(&jy).map(|(p, v)| p * v).sum();
            Ok(vec![q.norm_sqr() / d as f64])
        })
    })?;
    let dd = d as f64;
    let mut r = ExperimentReport::sampled(id, base_params(n, ens, samples), &est[0], opts.seed)
        .with_extra("haar_value", 2.0 / (dd * (dd + 1.0)));
    r.wall_time_s = wall;
    Ok(r)
}

/// |⟨ψ|γ_1 γ_{2n}|ψ⟩|² = Γ_{1,2n}² for ψ = U|0ⁿ⟩ (modes counted from 1);
/// Haar value 1/(2n − 1), zero while the lightcones of the two ends are disjoint.
pub fn matchgate_state_witness(ens: &Ensemble, n: usize, samples: u64, opts: &RunOptions) -> Result<ExperimentReport> {
    ens.check_n(n)?;
    let id = "matchgate_state_witness";
    let (est, wall) = timed(|| {
        monte_carlo_vec(samples, opts.stream(id), opts.workers, 1, |s| {
            let st = draw_gaussian(ens, n, s)?;
            Ok(vec![st.gamma[(0, 2 * n - 1)].powi(2)])
        })
    })?;
    let mut r = ExperimentReport::sampled(id, base_params(n, ens, samples), &est[0], opts.seed)
        .with_extra("haar_value", 1.0 / (2.0 * n as f64 - 1.0));
    r.wall_time_s = wall;
    Ok(r)
}
