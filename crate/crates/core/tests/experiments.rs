use designlab::circuits::{sample_circuit, CircuitSpec, Boundary};
use designlab::commutant::{permutation_operator, pi_o, pi_s};
use designlab::experiments::*;
use designlab::groups::symplectic::SymplecticForm;
use designlab::groups::GroupTag;
use designlab::linalg::C64;
use designlab::operator::{DenseOperator, PauliString, PureState};
use designlab::rng::RngStream;
use designlab::sim::StateVector;
use serde_json::json;

fn params(pairs: &[(&str, serde_json::Value)]) -> Params {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn real_product(angles: &[f64]) -> Vec<C64> {
    let mut psi = vec![C64::new(1.0, 0.0)];
    for t in angles {
        let q = [C64::new(t.cos(), 0.0), C64::new(t.sin(), 0.0)];
        psi = psi.iter().flat_map(|x| q.iter().map(move |y| x * y)).collect();
    }
    psi
}

#[test]
fn results_do_not_depend_on_worker_count() {
    let cases = [
        ("clifford4_distinguisher", params(&[("n", json!(4)), ("samples", json!(1500))])),
        ("orthogonal_epr_distinguisher", params(&[("n", json!(3)), ("samples", json!(700))])),
        ("state_design_witness", params(&[("group", json!("O")), ("n", json!(3)), ("samples", json!(900))])),
        ("matchgate_uniform_chi", params(&[("n", json!(4)), ("samples", json!(1100))])),
    ];
    for (id, p) in &cases {
        let a = run_experiment(id, p, &RunOptions { seed: 5, workers: 1 }).unwrap();
        let b = run_experiment(id, p, &RunOptions { seed: 5, workers: 3 }).unwrap();
        let pa: Vec<String> = a.iter().map(|r| r.payload()).collect();
        let pb: Vec<String> = b.iter().map(|r| r.payload()).collect();
        assert_eq!(pa, pb, "{id}");
        let c = run_experiment(id, p, &RunOptions { seed: 6, workers: 1 }).unwrap();
        assert_ne!(pa[0], c[0].payload(), "{id}: seed ignored");
    }
}

#[test]
fn catalog_errors() {
    let opts = RunOptions::new(1);
    assert!(run_experiment("no_such_thing", &Params::new(), &opts).is_err());
    assert!(run_experiment("symplectic_j_distinguisher", &params(&[("n", json!(4))]), &opts).is_err());
    assert!(run_experiment("clifford4_distinguisher", &Params::new(), &opts).is_err());
    assert!(run_experiment("state_design_witness", &params(&[("n", json!(3)), ("i", json!(0))]), &opts).is_err());
    assert!(run_experiment("ppt_twirl_distance", &params(&[("n", json!(2)), ("input", json!("bogus"))]), &opts).is_err());
    let ids: Vec<&str> = list_experiments().iter().map(|e| e.id).collect();
    assert_eq!(ids.len(), 16);
    for id in ids {
        assert!(!id.is_empty());
    }
}

#[test]
fn ppt_distance_for_real_product_states() {
    // oracle: 2(D−1)/(D(D+1)) for any real product input at k = 2
    for (n, angles) in [(2usize, vec![0.3, 1.1]), (3, vec![0.2, 2.0, -0.7]), (4, vec![0.1, 0.5, 0.9, 1.3])] {
        let d = (1u64 << n) as f64;
        let psi = real_product(&angles);
        let r = ppt_twirl_distance_pure_power(GroupTag::O, n, 2, &psi).unwrap();
        let want = 2.0 * (d - 1.0) / (d * (d + 1.0));
        assert!((r.estimate - want).abs() < 1e-10, "n={n}: {} vs {want}", r.estimate);
        assert!((r.extras["pair_coincidence_max"] - 3.0 / (d + 2.0)).abs() < 1e-10);
        assert!(r.extras["pair_coincidence_max"] <= r.extras["pair_bound"] + 1e-12);
    }
}

#[test]
fn ppt_routes_agree() {
    let mut rng = RngStream::new(11, 0).rng();
    for (g, n) in [(GroupTag::O, 2usize), (GroupTag::O, 3), (GroupTag::Sp, 3), (GroupTag::Cl, 2)] {
        let angles: Vec<f64> = (0..n).map(|_| rand::Rng::gen::<f64>(&mut rng) * 6.0).collect();
        let psi = PureState::from_amplitudes(n, real_product(&angles)).unwrap();
        let two = psi.tensor_power(2);
        let rho = DenseOperator::with_tag(two.projector(), n, 2).unwrap();
        let dense = ppt_twirl_distance(g, n, 2, &rho).unwrap();
        let compressed = ppt_twirl_distance_pure_power(g, n, 2, psi.amplitudes()).unwrap();
        assert!((dense.estimate - compressed.estimate).abs() < 1e-9, "{g}: {} vs {}", dense.estimate, compressed.estimate);
        assert!(dense.extras["ppt"] == 1.0);
        if g == GroupTag::Cl {
            // the Clifford group is a unitary 3-design
            assert!(dense.estimate < 1e-9);
        }
    }
}

#[test]
fn distinct_projectors() {
    let p = distinct_projector(1, 2, DistinctFlavor::Standard).unwrap();
    assert!((p.trace().re - 2.0).abs() < 1e-12);
    let p3 = distinct_projector(2, 3, DistinctFlavor::Standard).unwrap();
    assert!((p3.trace().re - 24.0).abs() < 1e-12);
    for perm in [vec![1, 0, 2], vec![1, 2, 0]] {
        let w = permutation_operator(&perm, 2).to_dense().unwrap();
        assert!(w.matmul(&p3).sub(&p3.matmul(&w)).max_abs() < 1e-12);
    }
    let po = pi_o(2).to_dense().unwrap();
    let p2 = distinct_projector(2, 2, DistinctFlavor::Standard).unwrap();
    assert!(p2.matmul(&po).max_abs() < 1e-12);

    let form = SymplecticForm::standard(3).unwrap();
    let ps = pi_s(&form).to_dense().unwrap();
    let q = distinct_projector(3, 2, DistinctFlavor::Symplectic(form)).unwrap();
    assert!(q.matmul(&ps).max_abs() < 1e-12);
    assert!(q.matmul(&q).sub(&q).max_abs() < 1e-12);
    assert!((q.trace().re - 56.0).abs() < 1e-12);
    assert!(!is_distinct(0b000_111, 3, 2, DistinctFlavor::Symplectic(form)));
    assert!(is_distinct(0b000_111, 3, 2, DistinctFlavor::Standard));
}

#[test]
fn orthogonal_wall_sum_and_bound() {
    for xi in 1..=4 {
        for m in [2usize, 4, 6, 8] {
            let exact = orthogonal_wall_sum(xi, m).unwrap();
            let bound = orthogonal_wall_bound(xi, m);
            assert!(exact <= bound * (1.0 + 1e-12), "xi={xi} m={m}");
            assert!(exact >= 2.0 - 1e-12);
        }
    }
    let opts = RunOptions::new(3);
    let exact = orthogonal_anticoncentration(2, 4, AntiConcentrationMode::Exact, 0, &opts).unwrap();
    let mc = orthogonal_anticoncentration(2, 4, AntiConcentrationMode::MonteCarlo, 4000, &opts).unwrap();
    assert!(exact.exact);
    assert!(mc.sigma_distance(exact.estimate) < 3.0, "mc {} ± {} vs {}", mc.estimate, mc.stderr, exact.estimate);
}

#[test]
fn matchgate_transfer_values() {
    let m1 = matchgate_transfer_matrix_corrected(1);
    assert!((m1[(0, 0)] - 5.0 / 72.0).abs() < 1e-14);
    let golden = [((1, 4), 3.5556), ((1, 6), 5.7942), ((1, 8), 10.0668), ((2, 4), 4.9404), ((2, 6), 7.8218), ((2, 8), 13.4902)];
    for ((xi, m), want) in golden {
        let chi = chi_from_transfer(&matchgate_transfer_matrix_corrected(xi), xi, m);
        assert!((chi - want).abs() < 1e-3, "xi={xi} m={m}: {chi}");
        let mat = matchgate_transfer_matrix_corrected(xi);
        for a in 0..mat.rows() {
            for b in 0..mat.cols() {
                assert!(mat[(a, b)] >= 0.0);
            }
        }
    }
    // Monte Carlo through the Gaussian backend on the superblock circuit
    let r = matchgate_transfer_chi(1, 4, 20_000, &RunOptions::new(8)).unwrap();
    let mc = r.extras["mc_value"];
    let se = r.extras["mc_stderr"];
    assert!((mc - r.estimate).abs() < 3.0 * se, "mc {mc} ± {se} vs {}", r.estimate);
}

#[test]
fn matchgate_uniform_chi_values() {
    assert_eq!(matchgate_uniform_chi_f64(1), 2.0);
    for n in [4usize, 16, 64, 256] {
        let c = matchgate_uniform_chi_f64(n) / (n as f64).sqrt();
        assert!(c > 0.5 && c < 3.0, "n={n}: {c}");
    }
    let r = matchgate_uniform_chi(4, 100_000, &RunOptions::new(2)).unwrap();
    let exact = matchgate_uniform_chi_f64(4);
    assert!(r.exact && (r.estimate - exact).abs() < 1e-12);
    let (mc, se) = (r.extras["mc_value"], r.extras["mc_stderr"]);
    assert!((mc - exact).abs() < 3.0 * se, "{mc} ± {se} vs {exact}");
}

#[test]
fn identity_and_structural_values() {
    let opts = RunOptions::new(4);
    let c = clifford4_distinguisher(&Ensemble::Identity, 4, 10, &opts).unwrap();
    assert_eq!(c.estimate, 1.0);
    let ws = state_design_witness(GroupTag::Cl, &Ensemble::Identity, 4, 0, 3, 10, &opts).unwrap();
    for r in &ws {
        assert_eq!(r.estimate, 1.0);
    }
    let mg = matchgate_state_witness(&Ensemble::brickwork(GroupTag::M, 8, 2).unwrap(), 8, 200, &opts).unwrap();
    assert!(mg.exact);
    assert_eq!(mg.estimate, 0.0);
    let sp = symplectic_state_witness(&Ensemble::brickwork(GroupTag::Sp, 5, 1).unwrap(), 5, 200, &opts).unwrap();
    assert!(sp.estimate.abs() < 1e-20);
    let haar = matchgate_state_witness(&Ensemble::Haar, 1, 50, &opts).unwrap();
    assert!((haar.estimate - 1.0).abs() < 1e-12);
}

#[test]
fn disjoint_lightcones_factorize_per_sample() {
    // ψ = U†|0⟩ for a depth-1 brickwork: Z_1 and Z_n have disjoint backward lightcones
    let n = 6;
    for g in [GroupTag::O, GroupTag::Cl, GroupTag::U] {
        let spec = CircuitSpec::brickwork_1d(n, 1, g, 2, Boundary::Open).unwrap();
        for t in 0..20 {
            let c = sample_circuit(&spec, &RngStream::new(31, t)).unwrap();
            let mut s = StateVector::zero(n).unwrap();
            s.apply_circuit_inverse(&c).unwrap();
            let zi = s.pauli_expectation(&PauliString::single(n, 0, 'Z')).re;
            let zj = s.pauli_expectation(&PauliString::single(n, n - 1, 'Z')).re;
            let mut p = PauliString::single(n, 0, 'Z');
            p.set(n - 1, 'Z');
            let zij = s.pauli_expectation(&p).re;
            assert!((zij * zij - zi * zi * zj * zj).abs() < 1e-10);
        }
    }
}

#[test]
fn design_checks() {
    let dev = clifford_enumeration_deviation(2, 3, &RunOptions::new(1)).unwrap();
    assert!(dev.estimate < 1e-10);
    assert_eq!(dev.extras["group_order_mod_phases"], 11520.0);
    let gap = t4_witness_gap(3).unwrap();
    assert!(gap.estimate > 0.5);
    for g in [GroupTag::U, GroupTag::Cl] {
        let one = gluing_check(g, 4, 1, 2).unwrap();
        let two = gluing_check(g, 4, 2, 2).unwrap();
        assert!((one.estimate - 0.169412).abs() < 1e-5, "{g}: {}", one.estimate);
        assert!(two.estimate < 1e-12);
        assert!(one.estimate < one.extras["single_layer_distance"]);
    }
    let diag = epr_relative_error_diagnostic(GroupTag::O, 2, 2).unwrap();
    assert!(diag.estimate.is_finite() && diag.estimate > 0.0);
}
