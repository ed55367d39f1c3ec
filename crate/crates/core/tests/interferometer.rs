use fpl_core::interferometer::*;
use fpl_core::boson::{output_distribution, FockState, Regime};
use fpl_core::CMatrix;
use fpl_core::numerics::*;
use proptest::prelude::*;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};

#[test]
fn empty_chip_is_identity() {
    let chip = Interferometer::new(3, vec![]).unwrap();
    assert_eq!(compose_unitary(&chip).unwrap(), CMatrix::identity(3, 3));
}

#[test]
fn balanced_beam_splitter_matrix() {
    let chip = Interferometer::new(2, vec![OpticalElement::beam_splitter(1, 2, FRAC_PI_4)]).unwrap();
    let u = compose_unitary(&chip).unwrap();
    let s = FRAC_1_SQRT_2;
    let expected = CMatrix::from_row_slice(2, 2, &[c64(s, 0.0), c64(0.0, s), c64(0.0, s), c64(s, 0.0)]);
    assert!(max_abs_diff(&u, &expected) < 1e-15);
}

#[test]
fn phase_then_inverse_is_identity() {
    let chip = Interferometer::new(
        2,
        vec![OpticalElement::phase_shifter(1, PI), OpticalElement::phase_shifter(1, -PI)],
    )
    .unwrap();
    assert!(max_abs_diff(&compose_unitary(&chip).unwrap(), &CMatrix::identity(2, 2)) <= 1e-14);
}

#[test]
fn element_order_puts_last_element_leftmost() {
    let bs = OpticalElement::beam_splitter(1, 2, 0.3);
    let ps = OpticalElement::phase_shifter(1, 0.7);
    let single = |e| compose_unitary(&Interferometer::new(2, vec![e]).unwrap()).unwrap();
    let both = compose_unitary(&Interferometer::new(2, vec![bs, ps]).unwrap()).unwrap();
    assert!(max_abs_diff(&both, &(single(ps) * single(bs))) < 1e-15);
}

#[test]
fn invalid_modes_are_rejected() {
    assert!(Interferometer::new(2, vec![OpticalElement::beam_splitter(1, 3, 0.1)]).is_err());
    assert!(Interferometer::new(2, vec![OpticalElement::beam_splitter(2, 2, 0.1)]).is_err());
    assert!(Interferometer::new(2, vec![OpticalElement::phase_shifter(0, 0.1)]).is_err());
}

#[test]
fn interferometer_json_round_trip() {
    let text = r#"{"m":3,"elements":[{"kind":"bs","modes":[1,2],"theta":0.5},{"kind":"ps","mode":3,"phi":1.0}]}"#;
    let chip = Interferometer::from_json(text).unwrap();
    assert_eq!(chip.elements[1], OpticalElement::phase_shifter(3, 1.0));
    let again = Interferometer::from_json(&serde_json::to_string(&chip).unwrap()).unwrap();
    assert_eq!(again, chip);
    assert!(Interferometer::from_json(r#"{"m":2,"elements":[{"kind":"ps","mode":5,"phi":0}]}"#).is_err());
}

#[test]
fn reck_of_identity_has_unit_transmissivities() {
    let chip = reck_decompose(&CMatrix::identity(4, 4)).unwrap();
    assert_eq!(chip.beam_splitter_count(), 6);
    for e in &chip.elements {
        match *e {
            OpticalElement::BeamSplitter { theta, .. } => assert!((theta.cos() - 1.0).abs() < 1e-12),
            OpticalElement::PhaseShifter { phi, .. } => assert!(phi.abs() < 1e-12),
        }
    }
    assert!(max_abs_diff(&compose_unitary(&chip).unwrap(), &CMatrix::identity(4, 4)) <= 1e-10);
}

#[test]
fn reck_round_trip_haar_m8() {
    let mut rng = RandomSource::new(30);
    let u = haar_unitary(8, &mut rng);
    let chip = reck_decompose(&u).unwrap();
    assert_eq!(chip.beam_splitter_count(), 28);
    assert!(max_abs_diff(&compose_unitary(&chip).unwrap(), &u) <= 1e-10);
}

#[test]
fn reck_handles_permutation_matrices() {
    let mut p = CMatrix::zeros(4, 4);
    for (i, j) in [(0, 2), (1, 0), (2, 3), (3, 1)] {
        p[(i, j)] = c64(0.0, 1.0);
    }
    let chip = reck_decompose(&p).unwrap();
    assert!(max_abs_diff(&compose_unitary(&chip).unwrap(), &p) <= 1e-10);
}

#[test]
fn reck_rejects_non_unitary() {
    assert!(reck_decompose(&(CMatrix::identity(3, 3) * c64(1.1, 0.0))).is_err());
}

#[test]
fn reck_of_five_mode_fixture_matches_published_transmissivities() {
    let u = polar_unitary(&load_fixture("U5t").unwrap()).unwrap();
    let chip = reck_decompose(&u).unwrap();
    // published numbering runs over mode separation 1..4, lower pair first
    let published = parameters5();
    let mut expected_pairs = Vec::new();
    for sep in 1..5 {
        for p in (sep + 1..=5).rev() {
            expected_pairs.push([p - sep, p]);
        }
    }
    for (row, pair) in published.iter().zip(&expected_pairs) {
        let t = chip
            .elements
            .iter()
            .find_map(|e| match *e {
                OpticalElement::BeamSplitter { modes, theta } if modes == *pair => Some(theta.cos().abs()),
                _ => None,
            })
            .unwrap();
        assert!((t - row.t).abs() <= 0.02, "pair {pair:?}: {t} vs {}", row.t);
    }
}

#[test]
fn random_phases_chip_layouts() {
    let mut rng = RandomSource::new(31);
    let chip = random_phases_chip(2, 1, &mut rng).unwrap();
    assert_eq!(chip.beam_splitter_count(), 1);
    assert_eq!(chip.elements.len(), 3);
    for e in &chip.elements {
        if let OpticalElement::PhaseShifter { phi, .. } = *e {
            assert!((0.0..=PI).contains(&phi));
        }
    }
    assert_eq!(layer_pairs(7, 0), vec![(0, 1), (2, 3), (4, 5)]);
    assert_eq!(layer_pairs(7, 1), vec![(1, 2), (3, 4), (5, 6)]);
    let chip = random_phases_chip(7, 5, &mut rng).unwrap();
    assert_eq!(chip.beam_splitter_count(), 15);
    let u = compose_unitary(&chip).unwrap();
    assert!(unitarity_error(&u) <= 1e-12);
}

#[test]
fn fixtures_are_as_printed() {
    let u5 = load_fixture("U5t").unwrap();
    assert_eq!(u5[(0, 0)], c64(0.212, 0.0));
    assert!(unitarity_error(&u5) <= FIXTURE_UNITARITY_TOL);
    let u9 = load_fixture("U9t").unwrap();
    for j in 6..9 {
        assert_eq!(u9[(0, j)], c64(0.0, 0.0));
    }
    for name in FIXTURE_NAMES {
        assert!(unitarity_error(&load_fixture(name).unwrap()) <= FIXTURE_UNITARITY_TOL, "{name}");
    }
    assert!(load_fixture("U6x").is_err());
}

#[test]
fn phase_table_chip_reproduces_seven_mode_fixture() {
    let chip = chip_from_phase_table(7, 5, &parameters7()).unwrap();
    let u = compose_unitary(&chip).unwrap();
    let f = max_gate_fidelity(&load_fixture("U7t").unwrap(), &u).unwrap();
    assert!(f >= 0.97, "fidelity {f}");
}

#[test]
fn phase_table_chip_has_nine_mode_zero_block() {
    let u = compose_unitary(&chip_from_phase_table(9, 6, &parameters9()).unwrap()).unwrap();
    let u9 = load_fixture("U9t").unwrap();
    for i in 0..9 {
        for j in 0..9 {
            if u9[(i, j)] == c64(0.0, 0.0) {
                assert!(u[(i, j)].norm() < 1e-12, "({i},{j})");
            }
        }
    }
    assert!(max_gate_fidelity(&u9, &u).unwrap() >= 0.97);
}

#[test]
fn phase_table_shapes() {
    let u = compose_unitary(&chip_from_phase_table(2, 1, &[]).unwrap()).unwrap();
    let s = FRAC_1_SQRT_2;
    let bs = CMatrix::from_row_slice(2, 2, &[c64(s, 0.0), c64(0.0, s), c64(0.0, s), c64(s, 0.0)]);
    assert!(max_abs_diff(&u, &bs) < 1e-15);
    assert!(chip_from_phase_table(2, 1, &[vec![0.0, 0.0]]).is_ok());
    assert!(chip_from_phase_table(3, 2, &[vec![0.0, 0.0]]).is_err());
    assert!(chip_from_phase_table(3, 4, &[vec![0.0; 3]]).is_err());
}

#[test]
fn deep_random_phase_chips_are_fully_connected_from_central_inputs() {
    let mut rng = RandomSource::new(32);
    for m in [5usize, 7, 9] {
        let layers = (m + 3).div_ceil(2);
        let u = compose_unitary(&random_phases_chip(m, layers, &mut rng).unwrap()).unwrap();
        let centre = (m - 1) / 2;
        for input in centre - 1..=centre + 1 {
            for out in 0..m {
                assert!(u[(out, input)].norm() > 1e-12, "m={m} in={input} out={out}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reck_round_trip(seed in any::<u64>(), m in 2usize..=12) {
        let mut rng = RandomSource::new(seed);
        let u = haar_unitary(m, &mut rng);
        let chip = reck_decompose(&u).unwrap();
        prop_assert_eq!(chip.beam_splitter_count(), m * (m - 1) / 2);
        prop_assert!(max_abs_diff(&compose_unitary(&chip).unwrap(), &u) <= 1e-10);
    }

    #[test]
    fn random_chips_are_unitary(seed in any::<u64>(), m in 2usize..10, layers in 1usize..10) {
        let mut rng = RandomSource::new(seed);
        let u = compose_unitary(&random_phases_chip(m, layers, &mut rng).unwrap()).unwrap();
        prop_assert!(unitarity_error(&u) <= 1e-12);
    }
}

#[test]
fn identity_chip_figures() {
    let f = ChipFigures::of(&CMatrix::identity(5, 5)).unwrap();
    assert_eq!(f.values(), [1.0, 0.0, 1.0, 0.0, 0.0]);
    assert!(ChipFigures::of(&CMatrix::identity(4, 4)).is_err());
}

#[test]
fn chip_figures_match_distribution_oracle() {
    let u = haar_unitary(7, &mut RandomSource::new(12));
    let f = ChipFigures::of(&u).unwrap();
    let t = FockState::from_modes(7, &[2, 3, 4]).unwrap();
    let dist = output_distribution(&u, &t, Regime::Quantum, None).unwrap();
    assert!((f.bunching - dist.bunching_fraction()).abs() < 1e-12);
    let central = dist.prob(&FockState::from_modes(7, &[2, 3, 4]).unwrap());
    let endpoint = dist.prob(&FockState::from_modes(7, &[0, 1, 2]).unwrap());
    assert!((f.prob_central - central).abs() < 1e-12);
    assert!((f.prob_endpoint - endpoint).abs() < 1e-12);
    assert_eq!((f.re_central, f.re_endpoint), (u[(3, 3)].re, u[(0, 3)].re));
}

#[test]
fn shallow_chips_cannot_reach_the_endpoint() {
    let mut rng = RandomSource::new(2);
    // From the central mode of 7, two layers reach at most modes 1..4.
    let figures = ensemble_figures(7, Ensemble::RandomPhases { layers: 2 }, 20, &mut rng).unwrap();
    assert!(figures.iter().all(|f| f.re_endpoint == 0.0 && f.prob_endpoint == 0.0));
}

#[test]
fn histogram_binning_and_distance() {
    let h = Histogram::new(&[-5.0, 0.0, 0.24, 0.25, 0.99, 1.0, 7.0], 0.0, 1.0, 4).unwrap();
    assert_eq!(h.counts, vec![3, 1, 0, 3]);
    assert_eq!(h.bin_center(0), 0.125);
    let g = Histogram::new(&[0.6], 0.0, 1.0, 4).unwrap();
    assert_eq!(h.tvd(&h).unwrap(), 0.0);
    assert!((h.tvd(&g).unwrap() - 1.0).abs() < 1e-15);
    assert!(h.tvd(&Histogram::new(&[0.6], 0.0, 2.0, 4).unwrap()).is_err());
    assert!(Histogram::new(&[], 1.0, 1.0, 4).is_err());
}

#[test]
fn deep_random_phase_chips_approach_haar_statistics() {
    let mut rng = RandomSource::new(21);
    let haar = ensemble_figures(7, Ensemble::Haar, 10_000, &mut rng).unwrap();
    let walk = ensemble_figures(7, Ensemble::RandomPhases { layers: 7 }, 10_000, &mut rng).unwrap();
    let column = |v: &[ChipFigures], i: usize| v.iter().map(|f| f.values()[i]).collect::<Vec<_>>();
    for (i, bounded) in [(0, true), (2, false)] {
        let (a, b) = paired_histograms(&column(&walk, i), &column(&haar, i), 50, bounded).unwrap();
        let tvd = a.tvd(&b).unwrap();
        assert!(tvd <= 0.1, "{}: {tvd}", ChipFigures::NAMES[i]);
    }
}
