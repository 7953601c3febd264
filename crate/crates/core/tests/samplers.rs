use designlab::groups::clifford::{class_index, enumerate_cliffords, sample_uniform_clifford};
use designlab::groups::haar::{sample_haar_orthogonal, sample_haar_unitary};
use designlab::groups::symplectic::{sample_haar_symplectic, SymplecticForm};
use designlab::rng::RngStream;

/// |freq − p| in units of the binomial standard error.
fn binomial_sigma(hits: usize, trials: usize, p: f64) -> f64 {
    let f = hits as f64 / trials as f64;
    (f - p).abs() / (p * (1.0 - p) / trials as f64).sqrt()
}

#[test]
fn clifford_group_orders() {
    assert_eq!(enumerate_cliffords(1).len(), 24);
    assert_eq!(enumerate_cliffords(2).len(), 11520);
}

#[test]
fn single_qubit_classes_are_uniform() {
    let all = enumerate_cliffords(1);
    let idx = class_index(&all);
    let trials = 100_000;
    let mut counts = vec![0usize; all.len()];
    let mut rng = RngStream::new(101, 0).rng();
    for _ in 0..trials {
        let t = sample_uniform_clifford(1, &mut rng);
        counts[*idx.get(&t.rows).expect("sample outside the enumerated group")] += 1;
    }
    let p = 1.0 / 24.0;
    let mut chi2 = 0.0;
    for &c in &counts {
        assert!(binomial_sigma(c, trials, p) < 4.0, "class count {c}");
        let e = p * trials as f64;
        chi2 += (c as f64 - e).powi(2) / e;
    }
    // 23 degrees of freedom; 49.7 is the 0.1% tail
    assert!(chi2 < 49.7, "chi2 = {chi2}");
}

#[test]
fn fraction_fixing_zero_state() {
    // W|0⟩ ∝ |0⟩ exactly when W Z W† = +Z
    let all = enumerate_cliffords(1);
    let fixed = all
        .iter()
        .filter(|t| {
            let z = t.image_z(0);
            z.x == 0 && z.z == 1 && z.phase == 0
        })
        .count();
    assert_eq!(fixed * 6, all.len());
}

#[test]
fn two_qubit_factorization_probability() {
    let all = enumerate_cliffords(2);
    let product = all.iter().filter(|t| t.factorizes()).count();
    assert_eq!(product, 24 * 24);
    assert_eq!(product * 20, all.len());

    let trials = 100_000;
    let mut rng = RngStream::new(102, 0).rng();
    let hits = (0..trials).filter(|_| sample_uniform_clifford(2, &mut rng).factorizes()).count();
    assert!(binomial_sigma(hits, trials, 0.05) < 3.0, "hits {hits}");
    // the Z_1 image stays on qubit 1 with probability 3/15
    let mut rng = RngStream::new(103, 0).rng();
    let local = (0..trials)
        .filter(|_| {
            let z = sample_uniform_clifford(2, &mut rng).image_z(0).clone();
            (z.x | z.z) & !1 == 0
        })
        .count();
    assert!(binomial_sigma(local, trials, 0.2) < 3.0, "local {local}");
}

#[test]
fn haar_moments() {
    let samples = 20_000;
    for n in [1usize, 2, 3] {
        let d = (1u64 << n) as f64;
        let mut rng = RngStream::new(104, n as u64).rng();
        let (mut m2u, mut m4u, mut m4o, mut m4s) = (vec![], vec![], vec![], vec![]);
        let form = if n % 2 == 1 { Some(SymplecticForm::standard(n).unwrap()) } else { None };
        for _ in 0..samples {
            let u = sample_haar_unitary(n, &mut rng).unwrap();
            let a = u.mat()[(0, 0)].norm_sqr();
            m2u.push(a);
            m4u.push(a * a);
            let o = sample_haar_orthogonal(n, &mut rng).unwrap();
            m4o.push(o.mat()[(0, 0)].re.powi(4));
            if let Some(f) = &form {
                let s = sample_haar_symplectic(n, f, &mut rng).unwrap();
                m4s.push(s.mat()[(0, 0)].norm_sqr().powi(2));
            }
        }
        let check = |xs: &[f64], want: f64, what: &str| {
            let m = xs.iter().sum::<f64>() / xs.len() as f64;
            let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
            let se = (var / xs.len() as f64).sqrt();
            assert!((m - want).abs() < 4.0 * se + 1e-12, "{what} n={n}: {m} vs {want} (se {se})");
        };
        check(&m2u, 1.0 / d, "unitary second moment");
        check(&m4u, 2.0 / (d * (d + 1.0)), "unitary fourth moment");
        check(&m4o, 3.0 / (d * (d + 2.0)), "orthogonal fourth moment");
        if form.is_some() {
            // Sp acts transitively on the unit sphere, so its columns are uniform
            check(&m4s, 2.0 / (d * (d + 1.0)), "symplectic fourth moment");
        }
    }
}
