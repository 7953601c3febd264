use designlab::circuits::*;
use designlab::groups::matchgate::{majorana, sample_haar_matchgate};
use designlab::groups::GroupTag;
use designlab::linalg::C64;
use designlab::operator::PauliString;
use designlab::rng::RngStream;
use designlab::sim::*;

fn all_paulis_up_to_weight2(n: usize) -> Vec<PauliString> {
    let mut out = vec![];
    let kinds = ['X', 'Y', 'Z'];
    for a in 0..n {
        for &ka in &kinds {
            out.push(PauliString::single(n, a, ka));
            for b in a + 1..n {
                for &kb in &kinds {
                    let mut p = PauliString::single(n, a, ka);
                    p.set(b, kb);
                    out.push(p);
                }
            }
        }
    }
    out
}

#[test]
fn clifford_dense_vs_stabilizer() {
    let n = 3;
    let spec = CircuitSpec::brickwork_1d(n, 4, GroupTag::Cl, 2, Boundary::Open).unwrap();
    let paulis = all_paulis_up_to_weight2(n);
    for t in 0..100 {
        let c = sample_circuit(&spec, &RngStream::new(77, t)).unwrap();
        let mut dense = StateVector::zero(n).unwrap();
        dense.apply_circuit(&c).unwrap();
        let mut stab = StabilizerState::zero(n);
        stab.apply_circuit(&c).unwrap();
        for p in &paulis {
            let d = dense.pauli_expectation(p);
            let s = stab.expectation(p) as f64;
            assert!((d - C64::new(s, 0.0)).norm() < 1e-8, "{} dense {d} stab {s}", p.label());
        }
    }
}

#[test]
fn matchgate_dense_vs_gaussian() {
    let n = 4;
    let spec = CircuitSpec::brickwork_1d(n, 3, GroupTag::M, 2, Boundary::Open).unwrap();
    for t in 0..100 {
        let c = sample_circuit(&spec, &RngStream::new(78, t)).unwrap();
        let mut dense = StateVector::zero(n).unwrap();
        dense.apply_circuit(&c).unwrap();
        let mut g = GaussianState::vacuum(n);
        g.apply_circuit(&c).unwrap();
        assert!(g.is_pure(1e-9));
        assert!((g.vacuum_overlap_sq() - dense.amps[0].norm_sqr()).abs() < 1e-8);
        for a in 0..2 * n {
            for b in 0..2 * n {
                let p = majorana(n, a).mul(&majorana(n, b));
                let d = dense.pauli_expectation(&p);
                assert!((d - g.majorana_quadratic(a, b)).norm() < 1e-8);
            }
        }
    }
}

#[test]
fn haar_matchgate_overlap_and_witness_vs_dense() {
    let mut rng = RngStream::new(9, 0).rng();
    for n in 1..=6 {
        for _ in 0..5 {
            let o = sample_haar_matchgate(n, &mut rng);
            let u = o.to_dense_matrix().unwrap();
            assert!((gaussian_amplitude_sq(&o) - u[(0, 0)].norm_sqr()).abs() < 1e-8);
            // ⟨0|U γ_0 γ_{2n−1} U†|0⟩
            let p = majorana(n, 0).mul(&majorana(n, 2 * n - 1)).to_matrix();
            let w = u.matmul(&p).matmul(&u.adjoint())[(0, 0)];
            assert!((w - gaussian_majorana_quadratic(&o, 0, 2 * n - 1)).norm() < 1e-8);
        }
    }
}

#[test]
fn circuit_then_inverse_is_identity() {
    for g in [GroupTag::U, GroupTag::O, GroupTag::Cl, GroupTag::M] {
        let spec = CircuitSpec::brickwork_1d(4, 3, g, 2, Boundary::Open).unwrap();
        let c = sample_circuit(&spec, &RngStream::new(1, 2)).unwrap();
        let mut s = StateVector::zero(4).unwrap();
        s.amps[5] = C64::new(0.6, 0.0);
        s.amps[0] = C64::new(0.8, 0.0);
        let before = s.clone();
        s.apply_circuit(&c).unwrap();
        s.apply_circuit_inverse(&c).unwrap();
        let err: f64 = s.amps.iter().zip(&before.amps).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-9);
    }
}

#[test]
fn routing_errors() {
    let spec = CircuitSpec::brickwork_1d(3, 1, GroupTag::U, 2, Boundary::Open).unwrap();
    let c = sample_circuit(&spec, &RngStream::new(1, 0)).unwrap();
    assert!(StabilizerState::zero(3).apply_circuit(&c).is_err());
    assert!(GaussianState::vacuum(3).apply_circuit(&c).is_err());
    let ring = CircuitSpec::fixed(ArchitectureGraph::ring(4), vec![vec![BrickSpec::haar(0, vec![3, 0], GroupTag::M)]]).unwrap();
    assert!(sample_circuit(&ring, &RngStream::new(1, 0)).is_err());
}
