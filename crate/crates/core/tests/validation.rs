use fpl_core::boson::{enumerate_space, output_distribution, quantum_prob, FockState, Regime};
use fpl_core::interferometer::load_fixture;
use fpl_core::numerics::haar_unitary;
use fpl_core::validation::*;
use fpl_core::{CMatrix, Error, RandomSource, C64};
use proptest::prelude::*;
use rand::seq::SliceRandom;

fn first_modes(m: usize, n: usize) -> FockState {
    FockState::new((0..m).map(|i| usize::from(i < n)).collect())
}

fn occ(s: &str) -> FockState {
    FockState::new(s.bytes().map(|b| (b - b'0') as usize).collect())
}

fn balanced_splitter() -> CMatrix {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_row_slice(2, 2, &[C64::new(r, 0.0), C64::new(0.0, r), C64::new(0.0, r), C64::new(r, 0.0)])
}

/// The unitary that `fpl validate ... --seed 1` draws for 9 modes.
fn seeded_haar9() -> (CMatrix, RandomSource) {
    let mut rng = RandomSource::new(1);
    let u = haar_unitary(9, &mut rng);
    (u, rng)
}

/// Exact probability that a single event from `source` gets the right
/// row-norm verdict.
fn single_event_success(u: &CMatrix, t: &FockState, source: Source) -> f64 {
    let (m, n) = (u.nrows(), t.photons());
    let thr = row_norm_threshold(m, n);
    let space = enumerate_space(m, n, true).unwrap();
    match source {
        Source::Quantum => space
            .iter()
            .filter(|s| row_norm_estimator(u, t, s) > thr)
            .map(|s| quantum_prob(u, t, s).unwrap())
            .sum(),
        Source::Uniform => {
            space.iter().filter(|s| row_norm_estimator(u, t, s) <= thr).count() as f64 / space.len() as f64
        }
        Source::Distinguishable => unreachable!(),
    }
}

#[test]
fn unit_norm_rows_give_one() {
    let u = CMatrix::identity(5, 5);
    let t = occ("11100");
    assert_eq!(row_norm_estimator(&u, &t, &t), 1.0);
    let (h, _) = seeded_haar9();
    let all = FockState::new(vec![1; 9]);
    assert!((row_norm_estimator(&h, &all, &all) - 1.0).abs() < 1e-12);
}

#[test]
fn zero_row_gives_zero() {
    let u = CMatrix::identity(5, 5);
    assert_eq!(row_norm_estimator(&u, &occ("11100"), &occ("11010")), 0.0);
}

#[test]
fn threshold_values() {
    assert!((row_norm_threshold(9, 3) - 1.0 / 27.0).abs() < 1e-16);
    assert_eq!(row_norm_threshold(4, 2), 0.25);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn row_norm_ignores_row_phases(seed in any::<u64>(), row in 0usize..6, phase in -3.2f64..3.2, pick in 0usize..20) {
        let u = haar_unitary(6, &mut RandomSource::new(seed));
        let mut v = u.clone();
        let z = C64::from_polar(1.0, phase);
        for c in 0..6 {
            v[(row, c)] *= z;
        }
        let t = occ("111000");
        let space = enumerate_space(6, 3, true).unwrap();
        let s = &space[pick % space.len()];
        let (a, b) = (row_norm_estimator(&u, &t, s), row_norm_estimator(&v, &t, s));
        prop_assert!((a - b).abs() <= 1e-14 * a.max(1.0));
    }

    #[test]
    fn likelihood_score_is_antisymmetric(p in 1e-300f64..1.0, q in 1e-300f64..1.0, k1 in 0.05f64..0.99, extra in 0.0f64..5.0) {
        let k2 = 1.0 / k1 + extra + 1e-9;
        prop_assert_eq!(likelihood_score(p, q, k1, k2), -likelihood_score(q, p, k1, k2));
    }

    #[test]
    fn likelihood_intervals_partition_ratios(log_rho in -5.0f64..5.0, k1 in 0.05f64..0.99, extra in 0.0f64..5.0) {
        let k2 = 1.0 / k1 + extra + 1e-9;
        let rho = log_rho.exp();
        let bounds = [1.0 / k2, k1, 1.0 / k1, k2];
        prop_assume!(bounds.iter().all(|b| (rho / b - 1.0).abs() > 1e-9));
        let expected = if rho <= 1.0 / k2 {
            -2
        } else if rho <= k1 {
            -1
        } else if rho < 1.0 / k1 {
            0
        } else if rho < k2 {
            1
        } else {
            2
        };
        prop_assert_eq!(likelihood_score(rho, 1.0, k1, k2), expected);
    }

    #[test]
    fn trace_invariants(seed in any::<u64>(), n_set in 0usize..60) {
        let mut rng = RandomSource::new(seed);
        let u = haar_unitary(5, &mut rng);
        let t = occ("01110");
        let quantum = output_distribution(&u, &t, Regime::Quantum, None).unwrap();
        let classical = output_distribution(&u, &t, Regime::Classical, None).unwrap();
        let sampler = quantum.sampler();
        let samples: Vec<FockState> = (0..n_set).map(|_| sampler.draw(&mut rng).clone()).collect();
        for trace in [
            aa_uniform_test(&samples, &u, &t).unwrap(),
            likelihood_discriminator(&samples, &quantum, &classical, K1, K2).unwrap(),
        ] {
            prop_assert!(trace.increments.iter().all(|d| d.abs() <= 2));
            prop_assert_eq!(trace.trajectory().last().copied().unwrap_or(0), trace.counter);
            prop_assert_eq!(trace.samples, n_set);
            prop_assert_eq!(trace.increments.len() + trace.skipped_collisions, n_set);
            let sign = match trace.verdict {
                Verdict::BosonSampler | Verdict::Indistinguishable => 1,
                Verdict::UniformSampler | Verdict::Distinguishable => -1,
                Verdict::Inconclusive => 0,
            };
            prop_assert_eq!(sign, trace.counter.signum());
        }
    }
}

#[test]
fn haar_unitaries_show_the_row_norm_gap() {
    let t = first_modes(9, 3);
    let thr = row_norm_threshold(9, 3);
    let space = enumerate_space(9, 3, true).unwrap();
    let mut gaps = Vec::new();
    for seed in 0..20 {
        let u = haar_unitary(9, &mut RandomSource::new(seed));
        let probs: Vec<f64> = space.iter().map(|s| quantum_prob(&u, &t, s).unwrap()).collect();
        let total: f64 = probs.iter().sum();
        let above = |s: &FockState| row_norm_estimator(&u, &t, s) > thr;
        let p_d: f64 = space.iter().zip(&probs).filter(|(s, _)| above(s)).map(|(_, p)| p).sum::<f64>() / total;
        let p_u = space.iter().filter(|s| above(s)).count() as f64 / space.len() as f64;
        gaps.push(p_d - p_u);
    }
    assert!(gaps.iter().all(|&g| g >= 1.0 / 9.0), "gaps {gaps:?}");
}

#[test]
fn empty_sample_set_is_inconclusive() {
    let (u, _) = seeded_haar9();
    let trace = aa_uniform_test(&[], &u, &first_modes(9, 3)).unwrap();
    assert_eq!(trace.verdict, Verdict::Inconclusive);
    assert_eq!((trace.counter, trace.samples), (0, 0));
}

#[test]
fn collisions_are_skipped_and_counted() {
    let u = CMatrix::identity(4, 4);
    let t = occ("1100");
    let samples = [occ("1100"), occ("2000"), occ("0011"), occ("0200")];
    let trace = aa_uniform_test(&samples, &u, &t).unwrap();
    assert_eq!(trace.skipped_collisions, 2);
    assert_eq!(trace.increments, vec![1, -1]);
    assert_eq!(trace.verdict, Verdict::Inconclusive);
}

#[test]
fn row_norm_verdict_depends_only_on_the_multiset() {
    let (u, mut rng) = seeded_haar9();
    let t = first_modes(9, 3);
    let dist = output_distribution(&u, &t, Regime::Quantum, None).unwrap();
    let sampler = dist.sampler();
    let mut samples: Vec<FockState> = (0..101).map(|_| sampler.draw(&mut rng).clone()).collect();
    let first = aa_uniform_test(&samples, &u, &t).unwrap();
    assert_eq!(first, aa_uniform_test(&samples, &u, &t).unwrap());
    for _ in 0..5 {
        samples.shuffle(&mut rng);
        let again = aa_uniform_test(&samples, &u, &t).unwrap();
        assert_eq!((again.counter, again.verdict, again.skipped_collisions), (first.counter, first.verdict, first.skipped_collisions));
    }
}

#[test]
fn row_norm_test_separates_quantum_and_uniform_samples() {
    let (u, mut rng) = seeded_haar9();
    let t = first_modes(9, 3);
    for source in [Source::Quantum, Source::Uniform] {
        let curve = success_rate_curve(&u, &t, CurveTest::RowNorm, source, &[500], 200, &mut rng).unwrap();
        assert!(curve[0].success_rate >= 0.95, "{source:?}: {curve:?}");
    }
}

#[test]
fn input_errors() {
    let (u, _) = seeded_haar9();
    let t = first_modes(9, 3);
    assert!(matches!(aa_uniform_test(&[], &u, &first_modes(8, 3)), Err(Error::Dimension(_))));
    assert!(matches!(aa_uniform_test(&[first_modes(9, 2)], &u, &t), Err(Error::InvalidInput(_))));
    let mut rng = RandomSource::new(0);
    let lik = CurveTest::Likelihood { k1: K1, k2: K2 };
    assert!(success_rate_curve(&u, &t, lik, Source::Uniform, &[1], 1, &mut rng).is_err());
    assert!(success_rate_curve(&u, &t, CurveTest::RowNorm, Source::Distinguishable, &[1], 1, &mut rng).is_err());
    assert!(uniform_no_collision_sample(3, 4, &mut rng).is_err());
    assert!(matches!("bogus".parse::<Source>(), Err(Error::Parse(_))));
    assert_eq!("uniform".parse::<Source>().unwrap(), Source::Uniform);
}

#[test]
fn likelihood_boundaries_follow_the_interval_closures() {
    let (k1, k2) = (0.5, 4.0);
    let cases = [(4.0, 2), (5.0, 2), (2.0, 1), (3.0, 1), (1.9, 0), (1.0, 0), (0.51, 0), (0.5, -1), (0.3, -1), (0.25, -2), (0.1, -2)];
    for (rho, score) in cases {
        assert_eq!(likelihood_score(rho, 1.0, k1, k2), score, "ratio {rho}");
    }
    assert_eq!(likelihood_score(1.0, 0.0, K1, K2), 2);
    assert_eq!(likelihood_score(0.0, 1.0, K1, K2), -2);
}

#[test]
fn identical_distributions_are_inconclusive() {
    let u = haar_unitary(5, &mut RandomSource::new(3));
    let t = occ("01110");
    let p = output_distribution(&u, &t, Regime::Quantum, None).unwrap();
    let trace = likelihood_discriminator(p.space(), &p, &p, K1, K2).unwrap();
    assert!(trace.increments.iter().all(|&d| d == 0));
    assert_eq!((trace.counter, trace.verdict), (0, Verdict::Inconclusive));
}

#[test]
fn swapping_hypotheses_negates_the_discriminator() {
    let mut rng = RandomSource::new(4);
    let u = haar_unitary(5, &mut rng);
    let t = occ("01110");
    let p = output_distribution(&u, &t, Regime::Quantum, None).unwrap();
    let q = output_distribution(&u, &t, Regime::Classical, None).unwrap();
    let samples: Vec<FockState> = (0..200).map(|_| p.sampler().draw(&mut rng).clone()).collect();
    let a = likelihood_discriminator(&samples, &p, &q, K1, K2).unwrap();
    let b = likelihood_discriminator(&samples, &q, &p, K1, K2).unwrap();
    assert_eq!(a.counter, -b.counter);
    assert!(a.increments.iter().zip(&b.increments).all(|(x, y)| *x == -*y));
}

#[test]
fn zero_likelihoods_score_fully_and_are_counted() {
    let u = balanced_splitter();
    let t = occ("11");
    let p = output_distribution(&u, &t, Regime::Quantum, None).unwrap();
    let q = output_distribution(&u, &t, Regime::Classical, None).unwrap();
    let trace = likelihood_discriminator(&[occ("11"), occ("20"), occ("02")], &p, &q, K1, K2).unwrap();
    assert_eq!(trace.increments, vec![-2, 2, 2]);
    assert_eq!(trace.zero_probability_events, 1);
    assert_eq!(trace.verdict, Verdict::Indistinguishable);

    let id = CMatrix::identity(2, 2);
    let p = output_distribution(&id, &t, Regime::Quantum, None).unwrap();
    let q = output_distribution(&id, &t, Regime::Classical, None).unwrap();
    assert!(matches!(likelihood_discriminator(&[occ("20")], &p, &q, K1, K2), Err(Error::InvalidInput(_))));
}

#[test]
fn likelihood_thresholds_are_checked() {
    let u = balanced_splitter();
    let p = output_distribution(&u, &occ("11"), Regime::Quantum, None).unwrap();
    for (k1, k2) in [(0.0, 2.0), (1.0, 2.0), (0.9, 1.1), (0.5, 2.0)] {
        assert!(likelihood_discriminator(&[], &p, &p, k1, k2).is_err(), "{k1} {k2}");
    }
}

#[test]
fn likelihood_test_separates_indistinguishable_and_distinguishable_photons() {
    let u = load_fixture("U7t").unwrap();
    let mut rng = RandomSource::new(11);
    let test = CurveTest::Likelihood { k1: K1, k2: K2 };
    for t in [occ("0011100"), occ("0001110")] {
        for source in [Source::Quantum, Source::Distinguishable] {
            let curve = success_rate_curve(&u, &t, test, source, &[200], 200, &mut rng).unwrap();
            assert!(curve[0].success_rate >= 0.95, "{t} {source:?}: {curve:?}");
        }
    }
}

#[test]
fn uniform_sampler_covers_no_collision_outputs_evenly() {
    let mut rng = RandomSource::new(8);
    let space = enumerate_space(5, 2, true).unwrap();
    let mut counts = vec![0usize; space.len()];
    let draws = 20_000;
    for _ in 0..draws {
        let s = uniform_no_collision_sample(5, 2, &mut rng).unwrap();
        counts[space.iter().position(|x| *x == s).unwrap()] += 1;
    }
    let expected = draws as f64 / space.len() as f64;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    // 9 degrees of freedom; the 0.999 quantile is 27.9.
    assert!(chi2 < 27.9, "chi2 {chi2}, counts {counts:?}");
}

#[test]
fn single_event_curve_matches_the_decision_probability() {
    let (u, mut rng) = seeded_haar9();
    let t = first_modes(9, 3);
    let trials = 4000;
    for source in [Source::Quantum, Source::Uniform] {
        let exact = single_event_success(&u, &t, source);
        let rate = success_rate_curve(&u, &t, CurveTest::RowNorm, source, &[1], trials, &mut rng).unwrap()[0].success_rate;
        let sigma = (exact * (1.0 - exact) / trials as f64).sqrt();
        assert!((rate - exact).abs() <= 4.0 * sigma, "{source:?}: rate {rate}, exact {exact}");
    }
}

#[test]
fn quantum_success_rate_grows_with_set_size() {
    let (u, mut rng) = seeded_haar9();
    let t = first_modes(9, 3);
    let trials = 1000;
    let sizes = [1, 11, 51, 151, 301, 501];
    let curve = success_rate_curve(&u, &t, CurveTest::RowNorm, Source::Quantum, &sizes, trials, &mut rng).unwrap();
    assert_eq!(curve.iter().map(|p| p.n_set).collect::<Vec<_>>(), sizes);
    for w in curve.windows(2) {
        let (a, b) = (w[0].success_rate, w[1].success_rate);
        let sigma = ((a * (1.0 - a) + b * (1.0 - b)) / trials as f64).sqrt();
        assert!(b >= a - 3.0 * sigma, "{curve:?}");
    }
    assert!(curve.last().unwrap().success_rate > curve[0].success_rate + 0.2, "{curve:?}");
}

fn haar_fraction_reaching(n_set: usize) -> f64 {
    let t = first_modes(9, 3);
    let mut good = 0;
    for seed in 0..50 {
        let mut rng = RandomSource::new(seed);
        let u = haar_unitary(9, &mut rng);
        let rate = success_rate_curve(&u, &t, CurveTest::RowNorm, Source::Quantum, &[n_set], 100, &mut rng).unwrap()[0].success_rate;
        good += usize::from(rate >= 0.95);
    }
    good as f64 / 50.0
}

#[test]
fn most_haar_unitaries_validate_within_five_thousand_events() {
    assert!(haar_fraction_reaching(5000) >= 0.8);
}

#[test]
#[ignore = "measured 31/50 unitaries reach 0.95 by 500 events"]
fn most_haar_unitaries_validate_within_five_hundred_events() {
    assert!(haar_fraction_reaching(500) >= 0.8);
}

#[test]
fn verdict_json_has_the_documented_keys() {
    let u = CMatrix::identity(4, 4);
    let t = occ("1100");
    let trace = aa_uniform_test(&[occ("1100"), occ("2000"), occ("1010"), occ("1100")], &u, &t).unwrap();
    let json = serde_json::to_value(trace.to_json()).unwrap();
    assert_eq!(
        json,
        serde_json::json!({"test": "row_norm", "N": 4, "counter": 1, "verdict": "BosonSampler", "skipped_collisions": 1})
    );
    let back: VerdictJson = serde_json::from_value(json).unwrap();
    assert_eq!(back, trace.to_json());
}

#[test]
fn curve_csv_layout() {
    let points = [CurvePoint { n_set: 1, success_rate: 0.5, trials: 10 }, CurvePoint { n_set: 20, success_rate: 1.0 / 3.0, trials: 10 }];
    let mut buf = Vec::new();
    write_curve_csv(&mut buf, &points, 4).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap(), "N_set,success_rate,trials\n1,5.000e-1,10\n20,3.333e-1,10\n");
}
