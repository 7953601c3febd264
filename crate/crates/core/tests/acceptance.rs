//! Acceptance suite. Prints one PASS/FAIL line per criterion with its sub-checks.
//! Exits nonzero if any sub-check fails, except those listed in `UNATTAINABLE`,
//! which are still evaluated and still reported as FAIL.

use designlab::circuits::{sample_circuit, Boundary, CircuitSpec};
use designlab::commutant::{commutation_residual, CommutantBasis};
use designlab::experiments::*;
use designlab::groups::clifford::{clifford_to_dense, enumerate_cliffords, sample_uniform_clifford};
use designlab::groups::haar::{sample_haar_orthogonal, sample_haar_unitary};
use designlab::groups::matchgate::{majorana, sample_haar_matchgate};
use designlab::groups::symplectic::{sample_haar_symplectic, SymplecticForm};
use designlab::groups::GroupTag;
use designlab::linalg::{CMatrix, RMatrix, C64};
use designlab::operator::PauliString;
use designlab::rng::RngStream;
use designlab::sim::{GaussianState, StabilizerState, StateVector};
use serde_json::json;
use std::time::Instant;

const SEED: u64 = 20_240_611;

/// Sub-checks that cannot pass for any admissible instance; see the README.
const UNATTAINABLE: &[&str] = &["5.matchgate_gap"];

struct Check {
    key: String,
    pass: bool,
    detail: String,
}

#[derive(Default)]
struct Criterion {
    checks: Vec<Check>,
}

impl Criterion {
    fn check(&mut self, key: &str, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check { key: key.into(), pass, detail: detail.into() });
    }
}

fn params(pairs: &[(&str, serde_json::Value)]) -> Params {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn reorder(m: &RMatrix) -> RMatrix {
    // enumeration order ({{1,2},{3,4}}, identity, swap) → (identity, swap, {{1,2},{3,4}})
    let idx = [1, 2, 0];
    RMatrix::from_fn(3, 3, |i, j| m[(idx[i], idx[j])])
}

fn criterion_1() -> Criterion {
    let mut c = Criterion::default();
    for n in 1..=3usize {
        let d = (1u64 << n) as f64;
        let gram = |sign: f64| RMatrix::from_rows(&[vec![d, 1.0, sign], vec![1.0, d, 1.0], vec![sign, 1.0, d]]).scale(d);
        let o = CommutantBasis::build(GroupTag::O, n, 2).unwrap();
        c.check(&format!("1.gram_O_D{d}"), reorder(&o.gram().unwrap()) == gram(1.0), "entrywise exact");
        let form = if n % 2 == 1 { SymplecticForm::standard(n).unwrap() } else { SymplecticForm::new(n, 1).unwrap() };
        let sp = CommutantBasis::symplectic(n, 2, &form).unwrap();
        c.check(&format!("1.gram_Sp_D{d}"), reorder(&sp.gram().unwrap()) == gram(-1.0), "entrywise exact");

        let wo = o.weingarten().unwrap();
        let want_o = RMatrix::from_rows(&[vec![d + 1.0, -1.0, -1.0], vec![-1.0, d + 1.0, -1.0], vec![-1.0, -1.0, d + 1.0]])
            .scale(1.0 / (d * (d - 1.0) * (d + 2.0)));
        let err = reorder(&wo.wg).sub(&want_o).max_abs() / want_o.max_abs();
        c.check(&format!("1.wg_O_D{d}"), err < 1e-9, format!("rel err {err:.1e}"));
        if d > 2.0 {
            let ws = sp.weingarten().unwrap();
            let want_s = RMatrix::from_rows(&[vec![d - 1.0, -1.0, 1.0], vec![-1.0, d - 1.0, -1.0], vec![1.0, -1.0, d - 1.0]])
                .scale(1.0 / (d * (d + 1.0) * (d - 2.0)));
            let err = reorder(&ws.wg).sub(&want_s).max_abs() / want_s.max_abs();
            c.check(&format!("1.wg_Sp_D{d}"), err < 1e-9, format!("rel err {err:.1e}"));
        } else {
            // the closed form has a pole at D = 2, where the Gram matrix is singular
            let ws = sp.weingarten().unwrap();
            c.check("1.wg_Sp_D2_pinv", ws.pinv_residual() < 1e-8, format!("closed form undefined; pinv residual {:.1e}", ws.pinv_residual()));
        }
    }
    c
}

fn criterion_2() -> Criterion {
    let mut c = Criterion::default();
    let mut rng = RngStream::new(SEED, 2).rng();
    let sp3 = SymplecticForm::standard(3).unwrap();
    let mut cases: Vec<(String, CommutantBasis)> = vec![];
    for k in 2..=3 {
        cases.push((format!("U_n3_k{k}"), CommutantBasis::build(GroupTag::U, 3, k).unwrap()));
        cases.push((format!("O_n3_k{k}"), CommutantBasis::build(GroupTag::O, 3, k).unwrap()));
        cases.push((format!("Sp_n3_k{k}"), CommutantBasis::symplectic(3, k, &sp3).unwrap()));
    }
    for k in 2..=4 {
        cases.push((format!("Cl_n3_k{k}"), CommutantBasis::build(GroupTag::Cl, 3, k).unwrap()));
    }
    for n in 1..=4 {
        cases.push((format!("M_n{n}_k2"), CommutantBasis::build(GroupTag::M, n, 2).unwrap()));
    }
    for (name, b) in &cases {
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let g: CMatrix = match b.group {
                GroupTag::U => sample_haar_unitary(b.n, &mut rng).unwrap().into_mat(),
                GroupTag::O => sample_haar_orthogonal(b.n, &mut rng).unwrap().into_mat(),
                GroupTag::Sp => sample_haar_symplectic(b.n, &sp3, &mut rng).unwrap().into_mat(),
                GroupTag::Cl => clifford_to_dense(&sample_uniform_clifford(b.n, &mut rng)).unwrap().into_mat(),
                GroupTag::M => sample_haar_matchgate(b.n, &mut rng).to_dense_matrix().unwrap(),
            };
            for e in &b.elements {
                worst = worst.max(commutation_residual(e, b.n, b.k, &g, &mut rng));
            }
        }
        c.check(&format!("2.{name}"), worst < 1e-8, format!("{} elements, max residual {worst:.1e}", b.len()));
    }
    c
}

fn criterion_3() -> Criterion {
    let mut c = Criterion::default();
    let dev = clifford_enumeration_deviation(2, 3, &RunOptions::new(SEED)).unwrap();
    c.check(
        "3.clifford_3design",
        dev.estimate < 1e-8 && dev.extras["group_order_mod_phases"] == 11520.0,
        format!("max deviation {:.1e} over {} elements", dev.estimate, dev.extras["group_order_mod_phases"]),
    );
    let gap = t4_witness_gap(3).unwrap();
    c.check("3.t4_gap", gap.estimate > 1e-3, format!("gap {:.4}", gap.estimate));
    c
}

fn within(r: &ExperimentReport, target: f64, key: &str, c: &mut Criterion) {
    let z = r.sigma_distance(target);
    c.check(key, z <= 3.0 && r.samples >= 100_000, format!("{:.6} ± {:.6} vs {target:.6} ({z:.2}σ, {} samples)", r.estimate, r.stderr, r.samples));
}

fn criterion_4() -> Criterion {
    let mut c = Criterion::default();
    let opts = RunOptions::new(SEED);
    let s = 100_000;
    let d = |n: u32| (1u64 << n) as f64;
    let cl = state_design_witness(GroupTag::Cl, &Ensemble::Haar, 4, 0, 1, s, &opts).unwrap();
    within(&cl[0], 1.0 / (d(4) + 1.0), "4.clifford_n4", &mut c);
    let o = state_design_witness(GroupTag::O, &Ensemble::Haar, 3, 0, 1, s, &opts).unwrap();
    within(&o[0], 2.0 / (d(3) * (d(3) + 2.0)), "4.orthogonal_witness_n3", &mut c);
    let o4 = haar_fourth_moment(GroupTag::O, 4, s, &opts).unwrap();
    within(&o4, 3.0 / (d(4) * (d(4) + 2.0)), "4.orthogonal_fourth_moment_n4", &mut c);
    let sp = symplectic_state_witness(&Ensemble::Haar, 3, s, &opts).unwrap();
    within(&sp, 2.0 / (d(3) * (d(3) + 1.0)), "4.symplectic_n3", &mut c);
    let m = matchgate_state_witness(&Ensemble::Haar, 4, s, &opts).unwrap();
    within(&m, 1.0 / 7.0, "4.matchgate_n4", &mut c);
    c
}

fn criterion_5() -> Criterion {
    let mut c = Criterion::default();
    let opts = RunOptions::new(SEED);
    let s = 20_000;
    let gap = |key: &str, shallow: &ExperimentReport, haar: f64, haar_note: String, c: &mut Criterion| {
        let g = shallow.estimate - haar;
        c.check(
            &format!("5.{key}_shallow"),
            shallow.estimate >= 0.5 || shallow.exact,
            format!("shallow {:.4} ± {:.4} (exact={})", shallow.estimate, shallow.stderr, shallow.exact),
        );
        c.check(&format!("5.{key}_gap"), g >= 0.25, format!("gap {g:.4}; Haar {haar_note}"));
    };

    let sh = clifford4_distinguisher(&Ensemble::brickwork(GroupTag::Cl, 8, 1).unwrap(), 8, s, &opts).unwrap();
    let hr = clifford4_distinguisher(&Ensemble::Haar, 8, s, &opts).unwrap();
    gap("clifford4", &sh, hr.estimate, format!("{:.5} ± {:.5} (n=8)", hr.estimate, hr.stderr), &mut c);

    let sh = orthogonal_epr_distinguisher(&Ensemble::brickwork(GroupTag::O, 6, 1).unwrap(), 6, s / 4, &opts).unwrap();
    let hr = orthogonal_epr_distinguisher(&Ensemble::Haar, 6, s / 4, &opts).unwrap();
    gap("orthogonal_epr", &sh, hr.estimate, format!("{:.5} ± {:.5} (n=6)", hr.estimate, hr.stderr), &mut c);

    let sh = symplectic_j_distinguisher(&Ensemble::brickwork(GroupTag::Sp, 5, 1).unwrap(), 5, s / 4, &opts).unwrap();
    let hr = symplectic_j_distinguisher(&Ensemble::Haar, 5, s / 4, &opts).unwrap();
    gap("symplectic_j", &sh, hr.estimate, format!("{:.5} ± {:.5} (n=5)", hr.estimate, hr.stderr), &mut c);

    // depth ≤ n/4 keeps the two end modes causally disjoint: the witness is exactly 0
    let sh = matchgate_state_witness(&Ensemble::brickwork(GroupTag::M, 8, 2).unwrap(), 8, s, &opts).unwrap();
    let hr = matchgate_state_witness(&Ensemble::Haar, 8, s, &opts).unwrap();
    let shallow_ok = sh.exact && sh.estimate == 0.0;
    c.check("5.matchgate_shallow", shallow_ok, format!("shallow {} (exact={}, n=8, depth 2)", sh.estimate, sh.exact));
    let g = hr.estimate - sh.estimate;
    c.check(
        "5.matchgate_gap",
        g >= 0.25,
        format!("gap {g:.4}: Haar {:.5} ± {:.5} at n=8 (1/15), at most 1/7 for any n ≥ 4", hr.estimate, hr.stderr),
    );
    c
}

fn criterion_6() -> Criterion {
    let mut c = Criterion::default();
    let opts = RunOptions::new(SEED);
    let run = |g: &str, n: u64, k: u64, input: &str| {
        run_experiment("ppt_twirl_distance", &params(&[("group", json!(g)), ("n", json!(n)), ("k", json!(k)), ("input", json!(input))]), &opts)
            .unwrap()
            .remove(0)
    };
    let vals: Vec<f64> = (2..=4).map(|n| run("O", n, 2, "real_product").estimate).collect();
    let ratios: Vec<f64> = vals.windows(2).map(|w| w[1] / w[0]).collect();
    let ok = vals.iter().all(|v| v.is_finite() && *v > 0.0) && ratios.iter().all(|r| (0.5..=0.85).contains(r));
    c.check("6.orthogonal_decay", ok, format!("distances {vals:.6?}, ratios {ratios:.3?}"));
    let cl = run("Cl", 3, 4, "real_product").estimate;
    c.check("6.clifford_k4_n3", cl <= 10.0 * vals[1], format!("{cl:.5} vs 10 × {:.5}", vals[1]));
    let cplx: Vec<f64> = (2..=4).map(|n| run("O", n, 2, "product").estimate).collect();
    c.check("6.info_complex_product_inputs", true, format!("orthogonal distances {cplx:.6?}"));
    c
}

fn criterion_7() -> Criterion {
    let mut c = Criterion::default();
    let opts = RunOptions::new(SEED);
    let ex = orthogonal_anticoncentration(2, 4, AntiConcentrationMode::Exact, 0, &opts).unwrap();
    let mc = orthogonal_anticoncentration(2, 4, AntiConcentrationMode::MonteCarlo, 100_000, &opts).unwrap();
    let bd = orthogonal_anticoncentration(2, 4, AntiConcentrationMode::Bound, 0, &opts).unwrap();
    let z = mc.sigma_distance(ex.estimate);
    c.check("7.exact_vs_mc", z <= 3.0, format!("exact {:.4e}, MC {:.4e} ± {:.1e} ({z:.2}σ)", ex.estimate, mc.estimate, mc.stderr));
    c.check("7.bound", ex.estimate <= bd.estimate, format!("exact {:.4e} ≤ bound {:.4e}", ex.estimate, bd.estimate));
    c
}

fn criterion_8() -> Criterion {
    let mut c = Criterion::default();
    let opts = RunOptions::new(SEED);
    let r = matchgate_transfer_chi(2, 4, 40_000, &opts).unwrap();
    let (mc, se) = (r.extras["mc_value"], r.extras["mc_stderr"]);
    let z = (mc - r.estimate).abs() / se;
    c.check("8.transfer_vs_dense_mc", z <= 3.0, format!("χ {:.4} vs dense MC {mc:.4} ± {se:.4} at n=8 ({z:.2}σ)", r.estimate));
    c.check(
        "8.info_displayed_formula",
        true,
        format!("displayed M_vw gives χ = {:.4} ({:.1}σ from MC)", r.extras["displayed_formula_chi"], (mc - r.extras["displayed_formula_chi"]).abs() / se),
    );
    let m00 = matchgate_transfer_matrix_corrected(1)[(0, 0)];
    c.check("8.m00", (m00 - 5.0 / 72.0).abs() < 1e-15, format!("M₀₀(ξ=1) = {m00:.15}"));
    for xi in [1usize, 2] {
        let ratios: Vec<f64> = [4usize, 6, 8]
            .iter()
            .map(|&m| matchgate_transfer_chi(xi, m, 0, &opts).unwrap().extras["ratio_to_uniform"])
            .collect();
        let grows = ratios.windows(2).all(|w| w[1] > w[0]);
        c.check(&format!("8.ratio_grows_xi{xi}"), grows, format!("χ_ξ/χ_uniform at m = 4, 6, 8: {ratios:.3?}"));
    }
    c
}

fn criterion_9() -> Criterion {
    let mut c = Criterion::default();
    let g = gluing_check(GroupTag::U, 4, 1, 2).unwrap();
    let single = g.extras["single_layer_distance"];
    c.check("9.two_layers_beat_one", g.estimate < single, format!("{:.6} < {single:.6}", g.estimate));
    for (n, xi, k) in [(4usize, 1usize, 2usize), (4, 2, 2), (2, 1, 3), (3, 1, 3)] {
        if n % xi != 0 || (n / xi) % 2 != 0 {
            continue;
        }
        let (u1, u2) = designlab::experiments::designs::superblock_twirl_of_zero(GroupTag::U, n, xi, k).unwrap();
        let (c1, c2) = designlab::experiments::designs::superblock_twirl_of_zero(GroupTag::Cl, n, xi, k).unwrap();
        let dev = u1.sub(&c1).max_abs().max(u2.sub(&c2).max_abs());
        c.check(&format!("9.clifford_blocks_n{n}_xi{xi}_k{k}"), dev < 1e-8, format!("commutant route, max deviation {dev:.1e}"));
    }
    // independent route: average over the enumerated two-qubit Clifford group
    let group = enumerate_cliffords(2);
    for k in [2usize, 3] {
        let dim = 1usize << (2 * k);
        let mut avg = CMatrix::zeros(dim, dim);
        for t in &group {
            let col: Vec<C64> = (0..4).map(|a| clifford_to_dense(t).unwrap().mat()[(a, 0)]).collect();
            let mut v = vec![C64::new(1.0, 0.0)];
            for _ in 0..k {
                v = v.iter().flat_map(|x| col.iter().map(move |y| x * y)).collect();
            }
            for a in 0..dim {
                for b in 0..dim {
                    avg[(a, b)] += v[a] * v[b].conj();
                }
            }
        }
        let avg = avg.scale_real(1.0 / group.len() as f64);
        let (u1, u2) = designlab::experiments::designs::superblock_twirl_of_zero(GroupTag::U, 2, 1, k).unwrap();
        let dev = u1.sub(&avg).max_abs().max(u2.sub(&avg).max_abs());
        c.check(&format!("9.clifford_enumerated_n2_k{k}"), dev < 1e-8, format!("{} elements, max deviation {dev:.1e}", group.len()));
    }
    c
}

fn criterion_10() -> Criterion {
    let mut c = Criterion::default();
    let cases = [
        ("clifford4_distinguisher", params(&[("n", json!(6)), ("samples", json!(3000))])),
        ("matchgate_state_witness", params(&[("n", json!(6)), ("samples", json!(3000))])),
        ("orthogonal_anticoncentration", params(&[("xi", json!(1)), ("m", json!(4)), ("mode", json!("montecarlo")), ("samples", json!(3000))])),
    ];
    let mut same = true;
    for (id, p) in &cases {
        let a: Vec<String> = run_experiment(id, p, &RunOptions { seed: SEED, workers: 1 }).unwrap().iter().map(|r| r.payload()).collect();
        let b: Vec<String> = run_experiment(id, p, &RunOptions { seed: SEED, workers: 1 }).unwrap().iter().map(|r| r.payload()).collect();
        let w: Vec<String> = run_experiment(id, p, &RunOptions { seed: SEED, workers: 4 }).unwrap().iter().map(|r| r.payload()).collect();
        same &= a == b && a == w;
    }
    c.check("10.determinism", same, "payloads byte-identical across reruns and worker counts");

    let n = 3;
    let spec = CircuitSpec::brickwork_1d(n, 4, GroupTag::Cl, 2, Boundary::Open).unwrap();
    let mut worst = 0.0f64;
    for t in 0..100 {
        let circ = sample_circuit(&spec, &RngStream::new(SEED, 1000 + t)).unwrap();
        let mut dense = StateVector::zero(n).unwrap();
        dense.apply_circuit(&circ).unwrap();
        let mut stab = StabilizerState::zero(n);
        stab.apply_circuit(&circ).unwrap();
        for code in 1..4u32.pow(n as u32) {
            let mut p = PauliString::identity(n);
            let mut x = code;
            for q in 0..n {
                p.set(q, ['I', 'X', 'Y', 'Z'][(x % 4) as usize]);
                x /= 4;
            }
            worst = worst.max((dense.pauli_expectation(&p) - C64::new(stab.expectation(&p) as f64, 0.0)).norm());
        }
    }
    c.check("10.dense_vs_stabilizer", worst < 1e-8, format!("100 circuits, all 63 Paulis, max deviation {worst:.1e}"));

    let n = 4;
    let spec = CircuitSpec::brickwork_1d(n, 3, GroupTag::M, 2, Boundary::Open).unwrap();
    let mut worst = 0.0f64;
    for t in 0..100 {
        let circ = sample_circuit(&spec, &RngStream::new(SEED, 2000 + t)).unwrap();
        let mut dense = StateVector::zero(n).unwrap();
        dense.apply_circuit(&circ).unwrap();
        let mut g = GaussianState::vacuum(n);
        g.apply_circuit(&circ).unwrap();
        worst = worst.max((g.vacuum_overlap_sq() - dense.amps[0].norm_sqr()).abs());
        for a in 0..2 * n {
            for b in 0..2 * n {
                let p = majorana(n, a).mul(&majorana(n, b));
                worst = worst.max((dense.pauli_expectation(&p) - g.majorana_quadratic(a, b)).norm());
            }
        }
    }
    c.check("10.dense_vs_gaussian", worst < 1e-8, format!("100 circuits, all Majorana quadratics, max deviation {worst:.1e}"));
    c
}

fn main() {
    let suite: [(usize, &str, fn() -> Criterion); 10] = [
        (1, "Gram/Weingarten goldens", criterion_1),
        (2, "commutation suite", criterion_2),
        (3, "Clifford 3-design / non-4-design", criterion_3),
        (4, "Haar baselines", criterion_4),
        (5, "lightcone separations", criterion_5),
        (6, "PPT twirl closeness", criterion_6),
        (7, "orthogonal anti-concentration", criterion_7),
        (8, "matchgate transfer matrix", criterion_8),
        (9, "gluing", criterion_9),
        (10, "determinism and backends", criterion_10),
    ];
    let mut unexpected = vec![];
    for (i, name, f) in suite {
        let t = Instant::now();
        let c = f();
        let pass = c.checks.iter().all(|k| k.pass);
        println!("CRITERION {i:>2} {}: {name} ({:.1}s)", if pass { "PASS" } else { "FAIL" }, t.elapsed().as_secs_f64());
        for k in &c.checks {
            let tag = match (k.pass, UNATTAINABLE.contains(&k.key.as_str())) {
                (true, _) => "ok",
                (false, true) => "FAIL (unattainable)",
                (false, false) => "FAIL",
            };
            println!("    {tag:<20} {:<36} {}", k.key, k.detail);
            if !k.pass && !UNATTAINABLE.contains(&k.key.as_str()) {
                unexpected.push(k.key.clone());
            }
        }
    }
    if !unexpected.is_empty() {
        eprintln!("failed checks: {unexpected:?}");
        std::process::exit(1);
    }
}
