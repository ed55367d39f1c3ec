use fpl_core::numerics::*;
use fpl_core::Error;
use proptest::prelude::*;
use std::f64::consts::FRAC_1_SQRT_2;

fn random_matrix(n: usize, rng: &mut RandomSource) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| c64(rng.normal(), rng.normal()))
}

fn hom() -> CMatrix {
    let s = FRAC_1_SQRT_2;
    CMatrix::from_row_slice(2, 2, &[c64(s, 0.0), c64(0.0, s), c64(0.0, s), c64(s, 0.0)])
}

// Laplace expansion along the first row.
fn cofactor_det(m: &CMatrix) -> C64 {
    let n = m.nrows();
    if n == 1 {
        return m[(0, 0)];
    }
    let mut sum = c64(0.0, 0.0);
    for j in 0..n {
        let minor = m.clone().remove_row(0).remove_column(j);
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        sum += m[(0, j)] * cofactor_det(&minor) * sign;
    }
    sum
}

fn rel_err(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

#[test]
fn permanent_small_cases() {
    assert!((permanent(&CMatrix::identity(3, 3)).unwrap() - c64(1.0, 0.0)).norm() < 1e-15);
    let ones = CMatrix::from_element(4, 4, c64(1.0, 0.0));
    assert!((permanent(&ones).unwrap() - c64(24.0, 0.0)).norm() < 1e-12);
    assert!(permanent(&hom()).unwrap().norm() < 1e-15);
    let abcd = CMatrix::from_row_slice(2, 2, &[c64(1.0, 0.0), c64(2.0, 0.0), c64(3.0, 0.0), c64(4.0, 0.0)]);
    assert!((permanent_naive(&abcd).unwrap() - c64(10.0, 0.0)).norm() < 1e-15);
    assert!((permanent_naive(&CMatrix::identity(2, 2)).unwrap() - c64(1.0, 0.0)).norm() < 1e-15);
}

#[test]
fn permanent_errors() {
    let rect = CMatrix::zeros(2, 3);
    assert!(matches!(permanent(&rect), Err(Error::Dimension(_))));
    assert!(matches!(permanent_with_cap(&CMatrix::identity(5, 5), 4), Err(Error::Capacity(_))));
    assert!(matches!(permanent_naive(&CMatrix::identity(10, 10)), Err(Error::Capacity(_))));
}

#[test]
fn ryser_matches_naive_on_random_6x6() {
    let mut rng = RandomSource::new(11);
    for _ in 0..100 {
        let m = random_matrix(6, &mut rng);
        assert!(rel_err(permanent(&m).unwrap(), permanent_naive(&m).unwrap()) <= 1e-10);
    }
}

#[test]
fn ryser_matches_naive_on_large_real_matrix() {
    let mut rng = RandomSource::new(12);
    let n = 9;
    let a: Vec<f64> = (0..n * n).map(|_| rng.uniform()).collect();
    let m = CMatrix::from_fn(n, n, |i, j| c64(a[i * n + j], 0.0));
    let naive = permanent_naive(&m).unwrap().re;
    assert!((permanent_real(&a, n).unwrap() - naive).abs() <= 1e-10 * naive);
}

#[test]
fn determinant_cases() {
    assert!((determinant(&CMatrix::identity(4, 4)).unwrap() - c64(1.0, 0.0)).norm() < 1e-15);
    assert!((determinant(&hom()).unwrap() - c64(1.0, 0.0)).norm() < 1e-15);
    let mut rng = RandomSource::new(13);
    for _ in 0..20 {
        let m = random_matrix(6, &mut rng);
        assert!(rel_err(determinant(&m).unwrap(), cofactor_det(&m)) <= 1e-10);
    }
    assert!(matches!(determinant(&CMatrix::zeros(2, 3)), Err(Error::Dimension(_))));
}

#[test]
fn haar_unitary_is_unitary_for_all_sizes() {
    let mut rng = RandomSource::new(14);
    for m in 1..=30 {
        let u = haar_unitary(m, &mut rng);
        assert!(unitarity_error(&u) <= 1e-12, "m={m}");
    }
    let u1 = haar_unitary(1, &mut rng);
    assert!((u1[(0, 0)].norm() - 1.0).abs() < 1e-15);
}

#[test]
fn haar_first_entry_has_mean_weight_one_over_m() {
    let mut rng = RandomSource::new(15);
    let samples = 100_000;
    let w: Vec<f64> = (0..samples).map(|_| haar_unitary(5, &mut rng)[(0, 0)].norm_sqr()).collect();
    let mean = w.iter().sum::<f64>() / samples as f64;
    let var = w.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (samples - 1) as f64;
    let se = (var / samples as f64).sqrt();
    assert!((mean - 0.2).abs() <= 3.0 * se, "mean {mean}, se {se}");
}

#[test]
fn random_source_is_reproducible() {
    let mut a = RandomSource::new(99);
    let mut b = RandomSource::new(99);
    let ua = haar_unitary(4, &mut a);
    let ub = haar_unitary(4, &mut b);
    assert_eq!(ua, ub);
    assert_eq!(a.seed(), 99);
}

#[test]
fn polar_unitary_cases() {
    let mut rng = RandomSource::new(16);
    let u = haar_unitary(5, &mut rng);
    assert!(max_abs_diff(&polar_unitary(&u).unwrap(), &u) <= 1e-12);
    let two = CMatrix::identity(3, 3) * c64(2.0, 0.0);
    assert!(max_abs_diff(&polar_unitary(&two).unwrap(), &CMatrix::identity(3, 3)) <= 1e-12);
    assert!(matches!(polar_unitary(&CMatrix::zeros(3, 3)), Err(Error::Singular(_))));
}

#[test]
fn polar_unitary_beats_random_unitaries() {
    let mut rng = RandomSource::new(17);
    let u = haar_unitary(4, &mut rng);
    let e = random_matrix(4, &mut rng) * c64(0.05, 0.0);
    let m = &u + &e;
    let p = polar_unitary(&m).unwrap();
    let dist = |w: &CMatrix| (w - &m).norm();
    let best = dist(&p);
    for _ in 0..200 {
        assert!(best <= dist(&haar_unitary(4, &mut rng)));
    }
    // also against small perturbations of the optimum itself
    for _ in 0..200 {
        let nearby = polar_unitary(&(&p + random_matrix(4, &mut rng) * c64(1e-3, 0.0))).unwrap();
        assert!(best <= dist(&nearby) + 1e-12);
    }
}

#[test]
fn gate_fidelity_cases() {
    let mut rng = RandomSource::new(18);
    let u = haar_unitary(4, &mut rng);
    assert!((gate_fidelity(&u, &u).unwrap() - 1.0).abs() < 1e-12);
    let z = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c64(1.0, 0.0), c64(-1.0, 0.0)]));
    assert!(gate_fidelity(&CMatrix::identity(2, 2), &z).unwrap() < 1e-15);
    assert!(matches!(gate_fidelity(&u, &CMatrix::identity(3, 3)), Err(Error::Dimension(_))));
}

#[test]
fn max_gate_fidelity_recovers_phase_gauge_and_conjugation() {
    let mut rng = RandomSource::new(19);
    for _ in 0..5 {
        let u = haar_unitary(5, &mut rng);
        let d1: Vec<C64> = (0..5).map(|_| cis(6.0 * rng.uniform())).collect();
        let d2: Vec<C64> = (0..5).map(|_| cis(6.0 * rng.uniform())).collect();
        let v = CMatrix::from_fn(5, 5, |i, j| d1[i] * u[(i, j)] * d2[j]);
        assert!(max_gate_fidelity(&u, &v).unwrap() >= 1.0 - 1e-6);
        let uc = u.map(|z| z.conj());
        assert!(max_gate_fidelity(&u, &uc).unwrap() >= 1.0 - 1e-6);
    }
}

#[test]
fn total_variation_distance_cases() {
    assert_eq!(total_variation_distance(&[0.3, 0.7], &[0.3, 0.7]).unwrap(), 0.0);
    assert_eq!(total_variation_distance(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 1.0);
    assert!((total_variation_distance(&[0.6, 0.4], &[0.5, 0.5]).unwrap() - 0.1).abs() < 1e-15);
    assert!(total_variation_distance(&[1.0], &[0.5, 0.5]).is_err());
}

#[test]
fn matrix_json_round_trip() {
    let mut rng = RandomSource::new(20);
    let u = haar_unitary(3, &mut rng);
    let text = serde_json::to_string(&MatrixJson::from_matrix(&u)).unwrap();
    let back: MatrixJson = serde_json::from_str(&text).unwrap();
    assert_eq!(back.to_matrix().unwrap(), u);
}

#[test]
fn ryser_agrees_with_naive_on_1000_matrices() {
    let mut rng = RandomSource::new(21);
    for k in 0..1000 {
        let n = 1 + k % 9;
        let m = random_matrix(n, &mut rng);
        assert!(rel_err(permanent(&m).unwrap(), permanent_naive(&m).unwrap()) <= 1e-10, "n={n}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn permanent_is_invariant_under_row_swaps(seed in any::<u64>(), n in 2usize..7, i in 0usize..7, j in 0usize..7) {
        let (i, j) = (i % n, j % n);
        let mut rng = RandomSource::new(seed);
        let m = random_matrix(n, &mut rng);
        let mut swapped = m.clone();
        swapped.swap_rows(i, j);
        prop_assert!(rel_err(permanent(&swapped).unwrap(), permanent(&m).unwrap()) <= 1e-10);
    }

    #[test]
    fn determinant_vanishes_with_repeated_rows(seed in any::<u64>(), n in 2usize..8) {
        let mut rng = RandomSource::new(seed);
        let mut m = random_matrix(n, &mut rng).map(|z| z * 0.5);
        let row = m.row(0).into_owned();
        m.set_row(n - 1, &row);
        prop_assert!(determinant(&m).unwrap().norm() <= 1e-12);
    }

    #[test]
    fn polar_unitary_is_idempotent(seed in any::<u64>(), n in 1usize..7) {
        let mut rng = RandomSource::new(seed);
        let m = random_matrix(n, &mut rng);
        let p = polar_unitary(&m).unwrap();
        prop_assert!(unitarity_error(&p) <= 1e-12);
        prop_assert!(max_abs_diff(&polar_unitary(&p).unwrap(), &p) <= 1e-10);
    }

    #[test]
    fn max_gate_fidelity_dominates_plain_fidelity(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = RandomSource::new(seed);
        let u = haar_unitary(n, &mut rng);
        let v = haar_unitary(n, &mut rng);
        prop_assert!(max_gate_fidelity(&u, &v).unwrap() >= gate_fidelity(&u, &v).unwrap() - 1e-12);
    }
}
