//! Fast invariant checks, run by `designlab verify`.

use designlab::circuits::{sample_circuit, Boundary, CircuitSpec};
use designlab::commutant::{CommutantBasis, ExactTwirl};
use designlab::experiments::*;
use designlab::groups::clifford::enumerate_cliffords;
use designlab::groups::symplectic::SymplecticForm;
use designlab::groups::GroupTag;
use designlab::linalg::{CMatrix, C64};
use designlab::operator::{DenseOperator, PauliString};
use designlab::rng::{complex_normal, RngStream};
use designlab::sim::{StabilizerState, StateVector};
use serde_json::json;

pub struct Outcome {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn gram_golden() -> (bool, String) {
    let d = 4.0;
    let o = CommutantBasis::build(GroupTag::O, 2, 2).and_then(|b| b.gram());
    let sp = CommutantBasis::symplectic(2, 2, &SymplecticForm::new(2, 1).unwrap()).and_then(|b| b.gram());
    match (o, sp) {
        (Ok(o), Ok(sp)) => {
            let diag_ok = (0..3).all(|i| o[(i, i)] == d * d && sp[(i, i)] == d * d);
            let off: Vec<f64> = (0..3).flat_map(|i| (0..3).filter(move |&j| j != i).map(move |j| (i, j))).map(|ij| sp[ij]).collect();
            let sp_signs = off.iter().filter(|&&v| v == -d).count() == 2 && off.iter().filter(|&&v| v == d).count() == 4;
            let o_off = (0..3).all(|i| (0..3).all(|j| i == j || o[(i, j)] == d));
            (diag_ok && sp_signs && o_off, "k=2 Gram matrices at D=4".into())
        }
        _ => (false, "construction failed".into()),
    }
}

fn twirl_idempotent() -> (bool, String) {
    let mut rng = RngStream::new(1, 0).rng();
    let mut worst = 0.0f64;
    for g in [GroupTag::U, GroupTag::O, GroupTag::Cl, GroupTag::M] {
        let tw = ExactTwirl::new(g, 2, 2).expect("twirl");
        let x = CMatrix::from_fn(16, 16, |_, _| complex_normal(&mut rng));
        let a = DenseOperator::with_tag(x, 2, 2).expect("tag");
        let t1 = tw.apply(&a).expect("apply");
        let t2 = tw.apply(&t1).expect("apply");
        worst = worst.max(t2.sub(&t1).max_abs() / t1.max_abs());
    }
    (worst < 1e-9, format!("U, O, Cl, M at n=2, k=2; max deviation {worst:.1e}"))
}

fn clifford_order() -> (bool, String) {
    let (a, b) = (enumerate_cliffords(1).len(), enumerate_cliffords(2).len());
    (a == 24 && b == 11520, format!("|Cl₁| = {a}, |Cl₂| = {b} modulo phases"))
}

fn matchgate_values() -> (bool, String) {
    let chi1 = matchgate_uniform_chi_f64(1);
    let m00 = matchgate_transfer_matrix_corrected(1)[(0, 0)];
    let ok = chi1 == 2.0 && (m00 - 5.0 / 72.0).abs() < 1e-15;
    (ok, format!("χ(1) = {chi1}, M₀₀(ξ=1) = {m00:.12}"))
}

fn ppt_closed_form() -> (bool, String) {
    let psi: Vec<C64> = [0.3f64, 1.2]
        .iter()
        .fold(vec![C64::new(1.0, 0.0)], |acc, t| acc.iter().flat_map(|x| [x * t.cos(), x * t.sin()]).collect());
    match ppt_twirl_distance_pure_power(GroupTag::O, 2, 2, &psi) {
        Ok(r) => ((r.estimate - 0.3).abs() < 1e-10, format!("orthogonal k=2, n=2: {:.12}", r.estimate)),
        Err(e) => (false, e.to_string()),
    }
}

fn stabilizer_backend() -> (bool, String) {
    let n = 3;
    let spec = CircuitSpec::brickwork_1d(n, 3, GroupTag::Cl, 2, Boundary::Open).expect("spec");
    let mut worst = 0.0f64;
    for t in 0..10 {
        let c = sample_circuit(&spec, &RngStream::new(3, t)).expect("sample");
        let mut dense = StateVector::zero(n).expect("state");
        dense.apply_circuit(&c).expect("dense");
        let mut stab = StabilizerState::zero(n);
        stab.apply_circuit(&c).expect("stab");
        for q in 0..n {
            for k in ['X', 'Y', 'Z'] {
                let p = PauliString::single(n, q, k);
                worst = worst.max((dense.pauli_expectation(&p) - C64::new(stab.expectation(&p) as f64, 0.0)).norm());
            }
        }
    }
    (worst < 1e-8, format!("10 Clifford circuits; max deviation {worst:.1e}"))
}

fn worker_invariance() -> (bool, String) {
    let p: Params = [("n".to_string(), json!(4)), ("samples".to_string(), json!(600))].into_iter().collect();
    let a = run_experiment("clifford4_distinguisher", &p, &RunOptions { seed: 9, workers: 1 });
    let b = run_experiment("clifford4_distinguisher", &p, &RunOptions { seed: 9, workers: 3 });
    match (a, b) {
        (Ok(a), Ok(b)) => (a[0].payload() == b[0].payload(), "clifford4_distinguisher payload, 1 vs 3 workers".into()),
        _ => (false, "experiment failed".into()),
    }
}

pub fn run_all() -> Vec<Outcome> {
    let suite: [(&'static str, fn() -> (bool, String)); 7] = [
        ("gram_golden", gram_golden),
        ("twirl_idempotent", twirl_idempotent),
        ("clifford_group_order", clifford_order),
        ("matchgate_values", matchgate_values),
        ("ppt_closed_form", ppt_closed_form),
        ("stabilizer_backend", stabilizer_backend),
        ("worker_invariance", worker_invariance),
    ];
    suite
        .iter()
        .map(|(name, f)| {
            let (pass, detail) = f();
            Outcome { name, pass, detail }
        })
        .collect()
}
