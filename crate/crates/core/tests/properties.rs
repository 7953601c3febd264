use designlab::circuits::*;
use designlab::commutant::{brauer_compose, enumerate_pairings, rep_orthogonal, ExactTwirl};
use designlab::experiments::Welford;
use designlab::groups::GroupTag;
use designlab::linalg::{CMatrix, C64};
use designlab::operator::{partial_transpose, trace_norm, DenseOperator, PauliString};
use designlab::rng::{complex_normal, RngStream};
use proptest::prelude::*;

fn random_op(n: usize, k: usize, seed: u64, hermitian: bool) -> DenseOperator {
    let d = 1usize << (n * k);
    let mut rng = RngStream::new(seed, 0).rng();
    let m = CMatrix::from_fn(d, d, |_, _| complex_normal(&mut rng));
    let m = if hermitian { m.hermitian_part() } else { m };
    DenseOperator::with_tag(m, n, k).unwrap()
}

fn pauli_strategy(n: usize) -> impl Strategy<Value = PauliString> {
    proptest::collection::vec(prop_oneof![Just('I'), Just('X'), Just('Y'), Just('Z')], n).prop_map(move |ks| {
        let mut p = PauliString::identity(n);
        for (q, c) in ks.into_iter().enumerate() {
            p.set(q, c);
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn partial_transpose_is_an_involution(seed in any::<u64>(), n in 1usize..=2, copy in 1usize..=2) {
        let a = random_op(n, 2, seed, false);
        let t = partial_transpose(&a, copy, n, 2).unwrap();
        let back = partial_transpose(&t, copy, n, 2).unwrap();
        prop_assert!(back.sub(&a).max_abs() < 1e-12);
        prop_assert!((t.trace() - a.trace()).norm() < 1e-9);
        let both = partial_transpose(&partial_transpose(&a, 3 - copy, n, 2).unwrap(), copy, n, 2).unwrap();
        prop_assert!(both.sub(&a.transpose()).max_abs() < 1e-12);
    }

    #[test]
    fn pauli_products_match_matrices(p in pauli_strategy(3), q in pauli_strategy(3), r in pauli_strategy(2)) {
        let pm = p.to_matrix();
        prop_assert!(p.mul(&q).to_matrix().sub(&pm.matmul(&q.to_matrix())).max_abs() < 1e-12);
        prop_assert!(p.tensor(&r).to_matrix().sub(&pm.kron(&r.to_matrix())).max_abs() < 1e-12);
        let comm = pm.matmul(&q.to_matrix()).sub(&q.to_matrix().matmul(&pm)).max_abs() < 1e-12;
        prop_assert_eq!(p.commutes(&q), comm);
    }

    #[test]
    fn trace_norm_is_sum_of_absolute_eigenvalues(seed in any::<u64>(), n in 1usize..=3) {
        let a = random_op(n, 1, seed, true);
        let s: f64 = a.eigenvalues().iter().map(|x| x.abs()).sum();
        prop_assert!((trace_norm(&a) - s).abs() < 1e-8 * s.max(1.0));
    }

    #[test]
    fn superblock_layers_cover_each_qubit_once(xi in 1usize..=4, half in 1usize..=4, g in prop_oneof![Just(GroupTag::U), Just(GroupTag::O), Just(GroupTag::M)]) {
        let n = 2 * half * xi;
        let spec = build_superblock(&SuperblockSpec::new(n, xi, g)).unwrap();
        let layers = &spec.components[0].layers;
        prop_assert_eq!(layers.len(), 2);
        for layer in layers {
            let mut seen = vec![0usize; n];
            for b in layer {
                prop_assert_eq!(b.support.len(), 2 * xi);
                for &q in &b.support {
                    seen[q] += 1;
                }
            }
            prop_assert!(seen.iter().all(|&c| c == 1));
        }
    }

    #[test]
    fn forward_and_backward_lightcones_are_dual(n in 3usize..=9, depth in 1usize..=4, a in 0usize..9, b in 0usize..9) {
        let (a, b) = (a % n, b % n);
        let spec = CircuitSpec::brickwork_1d(n, depth, GroupTag::U, 2, Boundary::Open).unwrap();
        let fwd = lightcone(&spec, &[a]);
        let bwd = backward_lightcone(&spec, &[b]);
        prop_assert_eq!(fwd[depth].contains(&b), bwd.contains(&a));
        // one layer of 2-local bricks grows a cone by at most one site per side
        prop_assert!(fwd[depth].len() <= 1 + 2 * depth);
    }

    #[test]
    fn twirls_are_idempotent(seed in any::<u64>(), g in prop_oneof![Just(GroupTag::U), Just(GroupTag::O), Just(GroupTag::Sp)], n in 1usize..=2) {
        let n = if g == GroupTag::Sp { 1 } else { n };
        let tw = ExactTwirl::new(g, n, 2).unwrap();
        let a = random_op(n, 2, seed, false);
        let once = tw.apply(&a).unwrap();
        let twice = tw.apply(&once).unwrap();
        prop_assert!(twice.sub(&once).max_abs() < 1e-9 * once.max_abs().max(1.0));
        prop_assert!((once.trace() - a.trace()).norm() < 1e-9 * a.max_abs().max(1.0) * 16.0);
    }

    #[test]
    fn welford_merge_matches_single_pass(xs in proptest::collection::vec(-1e3f64..1e3, 1..200), cut in 0usize..200) {
        let cut = cut.min(xs.len());
        let mut all = Welford::default();
        xs.iter().for_each(|&x| all.push(x));
        let (mut a, mut b) = (Welford::default(), Welford::default());
        xs[..cut].iter().for_each(|&x| a.push(x));
        xs[cut..].iter().for_each(|&x| b.push(x));
        a.merge(&b);
        prop_assert_eq!(a.count, all.count);
        prop_assert!((a.mean - all.mean).abs() < 1e-9);
        prop_assert!((a.m2 - all.m2).abs() < 1e-6 * all.m2.max(1.0));
    }

    #[test]
    fn brauer_composition_matches_operators(i in 0usize..15, j in 0usize..15) {
        let n = 1;
        let ps = enumerate_pairings(3).unwrap();
        let (s, t) = (&ps[i], &ps[j]);
        let prod = brauer_compose(s, t);
        let lhs = rep_orthogonal(s, n).matmul(&rep_orthogonal(t, n)).to_dense().unwrap();
        let rhs = rep_orthogonal(&prod.result, n).to_dense().unwrap().scale(C64::new(2f64.powi(prod.loops as i32), 0.0));
        prop_assert!(lhs.sub(&rhs).max_abs() < 1e-12);
    }
}
