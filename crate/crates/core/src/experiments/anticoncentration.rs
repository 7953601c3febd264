//! Collision probabilities E|⟨0|U|0⟩|⁴ of superblock circuits and of global
//! matchgates.

use super::montecarlo::{monte_carlo, Estimate};
use super::report::{ExperimentReport, Params};
use super::{timed, RunOptions};
use crate::circuits::{build_superblock, sample_circuit, SuperblockSpec};
use crate::commutant::vk::binomial;
use crate::error::{Error, Result};
use crate::groups::matchgate::sample_haar_matchgate;
use crate::groups::GroupTag;
use crate::linalg::RMatrix;
use crate::sim::{gaussian_amplitude_sq, StateVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::json;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AntiConcentrationMode {
    Exact,
    Bound,
    MonteCarlo,
}

impl std::str::FromStr for AntiConcentrationMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Self::Exact),
            "bound" => Ok(Self::Bound),
            "montecarlo" | "monte_carlo" | "mc" => Ok(Self::MonteCarlo),
            _ => Err(Error::Parse(format!("unknown mode {s}"))),
        }
    }
}

/// Σ_{a,b ∈ {I,F,Π_o}^{m/2}} 2^{−ξ w(a,b)}, where w counts the patches whose
/// layer-1 and layer-2 labels differ. Patch p (0-based) sits in layer-1 block
/// ⌊p/2⌋ and in layer-2 block ⌊((p − 1) mod m)/2⌋.
pub fn orthogonal_wall_sum(xi: usize, m: usize) -> Result<f64> {
    if m < 2 || m % 2 != 0 {
        return Err(Error::InvalidSpec(format!("patch count m = {m} must be even")));
    }
    if 3f64.powi(m as i32) > 1e6 {
        return Err(Error::TooLarge { dim: 3usize.pow(m as u32), cap: 1_000_000 });
    }
    let h = m / 2;
    let configs = 3usize.pow(h as u32);
    let digits = |mut c: usize| -> Vec<usize> {
        (0..h)
            .map(|_| {
                let d = c % 3;
                c /= 3;
                d
            })
            .collect()
    };
    let wall = 2f64.powi(-(xi as i32));
    let mut total = 0.0;
    for ca in 0..configs {
        let a = digits(ca);
        for cb in 0..configs {
            let b = digits(cb);
            let w = (0..m).filter(|&p| a[p / 2] != b[((p + m - 1) % m) / 2]).count();
            total += wall.powi(w as i32);
        }
    }
    Ok(total)
}

/// 3(1 + 2^{−(ξ − log₂3)})^{2m}, an upper bound on the wall sum.
pub fn orthogonal_wall_bound(xi: usize, m: usize) -> f64 {
    3.0 * (1.0 + 3.0 * 2f64.powi(-(xi as i32))).powi(2 * m as i32)
}

fn superblock_collision_mc(group: GroupTag, n: usize, xi: usize, samples: u64, opts: &RunOptions, id: &str) -> Result<Estimate> {
    let spec = build_superblock(&SuperblockSpec::new(n, xi, group))?;
    let scale = if group == GroupTag::M { 4f64.powi(n as i32) } else { 1.0 };
    monte_carlo(samples, opts.stream(id), opts.workers, |s| {
        let c = sample_circuit(&spec, s)?;
        let mut st = StateVector::zero(n)?;
        st.apply_circuit(&c)?;
        Ok(scale * st.amps[0].norm_sqr().powi(2))
    })
}

/// E|⟨0ⁿ|U|0ⁿ⟩|⁴ for the two-layer orthogonal superblock on n = ξm qubits.
/// Exact: the wall sum divided by (2^{2ξ} + 2)^m. Bound: the same with the
/// wall sum replaced by its upper bound. MonteCarlo: dense sampling.
pub fn orthogonal_anticoncentration(xi: usize, m: usize, mode: AntiConcentrationMode, samples: u64, opts: &RunOptions) -> Result<ExperimentReport> {
    let id = "orthogonal_anticoncentration";
    let n = xi * m;
    let norm = (4f64.powi(xi as i32) + 2.0).powi(m as i32);
    let d = 2f64.powi(n as i32);
    let haar = 3.0 / (d * (d + 2.0));
    let bound = orthogonal_wall_bound(xi, m) / norm;
    let mut p = Params::new();
    p.insert("xi".into(), json!(xi));
    p.insert("m".into(), json!(m));
    p.insert("n".into(), json!(n));
    p.insert("mode".into(), json!(format!("{mode:?}").to_lowercase()));
    let (mut r, wall) = timed(|| {
        Ok(match mode {
            AntiConcentrationMode::Exact => {
                let ws = orthogonal_wall_sum(xi, m)?;
                ExperimentReport::exact(id, p, ws / norm, opts.seed).with_extra("wall_sum", ws)
            }
            AntiConcentrationMode::Bound => ExperimentReport::exact(id, p, bound, opts.seed),
            AntiConcentrationMode::MonteCarlo => {
                if 2 * xi > 10 || n > 12 {
                    return Err(Error::TooLarge { dim: 1 << n, cap: 1 << 12 });
                }
                p.insert("samples".into(), json!(samples));
                let est = superblock_collision_mc(GroupTag::O, n, xi, samples, opts, id)?;
                let mut r = ExperimentReport::sampled(id, p, &est, opts.seed);
                if let Ok(ws) = orthogonal_wall_sum(xi, m) {
                    r = r.with_extra("exact_value", ws / norm);
                }
                r
            }
        })
    })?;
    let ratio = r.estimate / haar;
    r = r
        .with_extra("haar_value", haar)
        .with_extra("bound_value", bound)
        .with_extra("ratio_to_haar", ratio)
        .with_extra("epsilon_from_bound", bound / haar - 1.0);
    r.wall_time_s = wall;
    Ok(r)
}

// ---------------------------------------------------------------------------
// Matchgates

/// χ(n) = 2^{2n} Σ_{k even} tr(|0⟩⟨0|^{⊗2} V_k)² = Σ_j C(n,j)² / C(2n,2j), via
/// the term ratio t_{j+1}/t_j = (n−j)(2j+1) / ((j+1)(2n−2j−1)).
pub fn matchgate_uniform_chi_f64(n: usize) -> f64 {
    let mut t = 1.0;
    let mut s = 1.0;
    for j in 0..n {
        t *= ((n - j) * (2 * j + 1)) as f64 / ((j + 1) * (2 * n - 2 * j - 1)) as f64;
        s += t;
    }
    s
}

fn big_binomial(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn matchgate_uniform_chi_exact(n: usize) -> BigRational {
    (0..=n).fold(BigRational::zero(), |acc, j| {
        let c = big_binomial(n, j);
        acc + BigRational::new(&c * &c, big_binomial(2 * n, 2 * j))
    })
}

/// Anti-concentration value of global Haar matchgates. With `samples > 0`
/// the value is also estimated as 4ⁿ E|⟨0|U|0⟩|⁴ from Pfaffian amplitudes.
pub fn matchgate_uniform_chi(n: usize, samples: u64, opts: &RunOptions) -> Result<ExperimentReport> {
    let id = "matchgate_uniform_chi";
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    let mut p = Params::new();
    p.insert("n".into(), json!(n));
    let (mut r, wall) = timed(|| {
        let chi = if n <= 1000 { matchgate_uniform_chi_exact(n).to_f64().unwrap_or(f64::NAN) } else { matchgate_uniform_chi_f64(n) };
        let mut r = ExperimentReport::exact(id, p, chi, opts.seed)
            .with_extra("chi_over_sqrt_n", chi / (n as f64).sqrt())
            .with_extra("recurrence_value", matchgate_uniform_chi_f64(n));
        if samples > 0 {
            let scale = 4f64.powi(n as i32);
            let est = monte_carlo(samples, opts.stream(id), opts.workers, |s| {
                let o = sample_haar_matchgate(n, &mut s.rng());
                Ok(scale * gaussian_amplitude_sq(&o).powi(2))
            })?;
            r = r.with_extra("mc_value", est.mean).with_extra("mc_stderr", est.stderr).with_extra("mc_samples", est.samples as f64);
        }
        Ok(r)
    })?;
    r.wall_time_s = wall;
    Ok(r)
}

fn c_ratio(xi: usize, k: i64) -> f64 {
    // C(2ξ, k/2) / C(4ξ, k) for even 0 ≤ k ≤ 4ξ, else 0
    if k < 0 || k % 2 != 0 || k as usize > 4 * xi {
        return 0.0;
    }
    let k = k as usize;
    binomial(2 * xi, k / 2) / binomial(4 * xi, k)
}

fn binom_i(n: usize, k: i64) -> f64 {
    if k < 0 {
        0.0
    } else {
        binomial(n, k as usize)
    }
}

/// The (4ξ+1)-sided matrix with entries
/// M_vw = Σ_{k ∈ [0:2:4ξ]} 2^{−4ξ} c(k) c(k−v+w) C(2ξ,k−v) / √(C(2ξ,v) C(2ξ,w)),
/// c(k) = C(2ξ,k/2)/C(4ξ,k), out-of-range binomials 0 and 0/0 = 0.
pub fn matchgate_transfer_matrix_displayed(xi: usize) -> RMatrix {
    let s = 4 * xi + 1;
    let pre = 2f64.powi(-4 * xi as i32);
    RMatrix::from_fn(s, s, |v, w| {
        let den = (binom_i(2 * xi, v as i64) * binom_i(2 * xi, w as i64)).sqrt();
        if den == 0.0 {
            return 0.0;
        }
        (0..=4 * xi as i64)
            .step_by(2)
            .map(|k| pre * c_ratio(xi, k) * c_ratio(xi, k - v as i64 + w as i64) * binom_i(2 * xi, k - v as i64) / den)
            .sum()
    })
}

/// One patch-to-patch step D·T of the superblock transfer matrix, indexed by
/// the number u ∈ [0, 2ξ] of Majorana modes a patch carries. A block whose
/// right patch carries an odd number of modes sees the complement of its left
/// patch's modes (the Jordan–Wigner string of the right patch runs through
/// the left one), so T_{uw} = c((w even ? u : 2ξ − u) + w) and D = diag C(2ξ,u).
pub fn matchgate_patch_step(xi: usize) -> RMatrix {
    let s = 2 * xi + 1;
    RMatrix::from_fn(s, s, |u, w| {
        if (u + w) % 2 != 0 {
            return 0.0;
        }
        let left = if w % 2 == 0 { u } else { 2 * xi - u };
        binomial(2 * xi, u) * c_ratio(xi, (left + w) as i64)
    })
}

/// M = 2^{−4ξ} (D·T)², so that χ_ξ = 2^{2n} tr(M^{m/2}) = tr((D·T)^m).
pub fn matchgate_transfer_matrix_corrected(xi: usize) -> RMatrix {
    let step = matchgate_patch_step(xi);
    step.matmul(&step).scale(2f64.powi(-4 * xi as i32))
}

fn mat_pow(m: &RMatrix, e: usize) -> RMatrix {
    (0..e).fold(RMatrix::identity(m.rows()), |acc, _| acc.matmul(m))
}

/// 2^{2n} tr(M^{m/2}) with n = ξm.
pub fn chi_from_transfer(m_mat: &RMatrix, xi: usize, m: usize) -> f64 {
    4f64.powi((xi * m) as i32) * mat_pow(m_mat, m / 2).trace()
}

/// χ_ξ of the periodic two-layer matchgate superblock (patch size ξ, m
/// patches). The estimate uses the patch transfer matrix; the value obtained
/// from the displayed M_vw, the diagonal bounds, and optionally a dense Monte
/// Carlo estimate of 4ⁿ E|⟨0|U|0⟩|⁴ are reported alongside.
pub fn matchgate_transfer_chi(xi: usize, m: usize, samples: u64, opts: &RunOptions) -> Result<ExperimentReport> {
    let id = "matchgate_transfer_chi";
    if xi == 0 || m < 2 || m % 2 != 0 {
        return Err(Error::InvalidSpec(format!("need ξ ≥ 1 and even m ≥ 2, got ξ = {xi}, m = {m}")));
    }
    let n = xi * m;
    let mut p = Params::new();
    p.insert("xi".into(), json!(xi));
    p.insert("m".into(), json!(m));
    p.insert("n".into(), json!(n));
    let (mut r, wall) = timed(|| {
        let mc = matchgate_transfer_matrix_corrected(xi);
        let md = matchgate_transfer_matrix_displayed(xi);
        let chi = chi_from_transfer(&mc, xi, m);
        let chi_u = matchgate_uniform_chi_f64(n);
        let pre = 2f64.powi(-4 * xi as i32);
        let lower = pre * (1.0 + binomial(2 * xi, 1).powi(2) / binomial(4 * xi, 2).powi(2));
        let min_entry = md.data().iter().chain(mc.data()).cloned().fold(f64::INFINITY, f64::min);
        let mut r = ExperimentReport::exact(id, p.clone(), chi, opts.seed)
            .with_extra("displayed_formula_chi", chi_from_transfer(&md, xi, m))
            .with_extra("m00", mc[(0, 0)])
            .with_extra("m00_displayed", md[(0, 0)])
            .with_extra("m00_lower_bound", lower)
            .with_extra("m00_bound_holds", if mc[(0, 0)] >= lower && md[(0, 0)] >= lower { 1.0 } else { 0.0 })
            .with_extra("diagonal_lower_bound", 4f64.powi(n as i32) * mc[(0, 0)].powi((m / 2) as i32))
            .with_extra("min_entry", min_entry)
            .with_extra("k2_bound_term", binomial(2 * xi, 1).powi(2) / binomial(4 * xi, 2).powi(2))
            .with_extra("k2_term_exact", binomial(2 * xi, 2) * c_ratio(xi, 2).powi(2))
            .with_extra("displayed_k2_constant", 2f64.powi(-7) / (xi * xi) as f64)
            .with_extra("chi_uniform", chi_u)
            .with_extra("ratio_to_uniform", chi / chi_u)
            .with_extra("chi_over_sqrt_n", chi / (n as f64).sqrt());
        if samples > 0 {
            if n > 12 {
                return Err(Error::TooLarge { dim: 1 << n, cap: 1 << 12 });
            }
            let est = superblock_collision_mc(GroupTag::M, n, xi, samples, opts, id)?;
            r = r.with_extra("mc_value", est.mean).with_extra("mc_stderr", est.stderr).with_extra("mc_samples", est.samples as f64);
        }
        Ok(r)
    })?;
    r.wall_time_s = wall;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_chi_small_values() {
        assert_eq!(matchgate_uniform_chi_exact(1), BigRational::from_integer(2.into()));
        for n in [1, 4, 16, 100] {
            let e = matchgate_uniform_chi_exact(n).to_f64().unwrap();
            assert!((e - matchgate_uniform_chi_f64(n)).abs() < 1e-10 * e);
        }
    }

    #[test]
    fn m00_at_xi_one() {
        assert!((matchgate_transfer_matrix_displayed(1)[(0, 0)] - 5.0 / 72.0).abs() < 1e-15);
        assert!((matchgate_transfer_matrix_corrected(1)[(0, 0)] - 5.0 / 72.0).abs() < 1e-15);
    }

    #[test]
    fn constant_wall_configurations() {
        // ξ → ∞ leaves the three wall-free configurations
        assert!((orthogonal_wall_sum(60, 4).unwrap() - 3.0).abs() < 1e-12);
    }
}
