use crate::{ChipKind, Cli, Command, CurveKind, MatrixArgs, ModelArgs, RegimeArg, StateArgs, TargetArgs, TomoAction, ValidateArgs, ValidateTest};
use fpl_core::boson::{
    classical_collision_prob, depth3_unitary, depth3_weak_simulate, full_bunching_ratio, output_distribution,
    partial_full_bunching_ratio, quantum_collision_prob, sample, simulate_experiment, DistinguishabilityModel,
    ExperimentConfig, FockState, OutputDistribution, Regime, TwoModeGate,
};
use fpl_core::interferometer::{
    chip_from_phase_table, compose_unitary, ensemble_figures, layer_pairs, load_fixture, paired_histograms,
    parameters7, parameters9, random_phases_chip, reck_decompose, write_histograms_csv, ChipFigures, Ensemble,
    Interferometer, FIXTURE_NAMES,
};
use fpl_core::numerics::{format_sig, haar_unitary, polar_unitary, MatrixJson};
use fpl_core::tomography::{
    permutation_sweep_with, stochastic_refine, ExperimentalDataset, RefineBudget, ReconstructionOptions, ResultJson,
};
use fpl_core::validation::{
    aa_uniform_test, likelihood_discriminator, success_rate_curve, write_curve_csv, CurveTest, Source, VerdictJson,
};
use fpl_core::{CMatrix, Error, RandomSource, Result};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;
use std::time::Duration;

pub fn run(cli: &Cli) -> Result<()> {
    let mut rng = RandomSource::new(cli.seed);
    let mut out: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    };
    let digits = cli.digits.max(1);
    let stochastic = match &cli.command {
        Command::Haar { modes } => {
            emit_json(&mut out, &MatrixJson::from_matrix(&haar_unitary(*modes, &mut rng)))?;
            true
        }
        Command::Reck { matrix, project } => {
            let u = matrix.load(&mut rng)?;
            let u = if *project { polar_unitary(&u)? } else { u };
            emit_json(&mut out, &reck_decompose(&u)?)?;
            matrix.is_random()
        }
        Command::Chip { kind, unitary } => {
            let chip = build_chip(kind, &mut rng)?;
            if *unitary {
                emit_json(&mut out, &MatrixJson::from_matrix(&compose_unitary(&chip)?))?;
            } else {
                emit_json(&mut out, &chip)?;
            }
            matches!(kind, ChipKind::Random { .. })
        }
        Command::Dist { matrix, state, regime, model } => {
            let u = matrix.load(&mut rng)?;
            let t = state.resolve(u.nrows())?;
            distribution(&u, &t, *regime, model)?.write_csv(&mut out, digits)?;
            matrix.is_random()
        }
        Command::Sample { matrix, state, regime, model, count } => {
            let u = matrix.load(&mut rng)?;
            let t = state.resolve(u.nrows())?;
            let dist = distribution(&u, &t, *regime, model)?;
            write_samples(&mut out, &sample(&dist, &mut rng, *count))?;
            true
        }
        Command::Bunching { max_photons, alpha, matrix, state } => {
            emit_json(&mut out, &bunching_report(*max_photons, *alpha, matrix, state)?)?;
            false
        }
        Command::Depth3 { state, modes, count } => {
            let m = match (modes, &state.input) {
                (Some(m), _) => *m,
                (None, Some(s)) => s.parse::<FockState>()?.modes(),
                (None, None) => return Err(Error::InvalidInput("depth3 needs --modes or --input".into())),
            };
            let t = state.resolve(m)?;
            let layer = |l: usize, rng: &mut RandomSource| -> Vec<TwoModeGate> {
                layer_pairs(m, l).into_iter().map(|(a, b)| TwoModeGate::haar(a, b, rng)).collect()
            };
            let (first, second) = (layer(0, &mut rng), layer(1, &mut rng));
            let draws = depth3_weak_simulate(&first, &second, &t, &mut rng, *count)?;
            if let Ok(exact) = output_distribution(&depth3_unitary(m, &first, &second)?, &t, Regime::Quantum, None) {
                eprintln!("tvd to exact: {}", format_sig(exact.empirical_tvd(&draws)?, digits));
            }
            write_samples(&mut out, &draws)?;
            true
        }
        Command::Tomo { action } => tomo(action, &mut out, digits, cli.seed, &mut rng)?,
        Command::Validate { test } => {
            validate(test, &mut out, digits, cli.seed, &mut rng)?;
            true
        }
        Command::Fixtures { name } => {
            match name {
                Some(name) => emit_json(&mut out, &MatrixJson::from_matrix(&load_fixture(name)?))?,
                None => {
                    let all = FIXTURE_NAMES
                        .iter()
                        .map(|&n| Ok((n, MatrixJson::from_matrix(&load_fixture(n)?))))
                        .collect::<Result<BTreeMap<_, _>>>()?;
                    emit_json(&mut out, &all)?
                }
            }
            false
        }
        Command::EnsembleSim { modes, layers, samples, bins } => {
            let walk = ensemble_figures(*modes, Ensemble::RandomPhases { layers: *layers }, *samples, &mut rng)?;
            let haar = ensemble_figures(*modes, Ensemble::Haar, *samples, &mut rng)?;
            let mut rows = Vec::new();
            for (i, name) in ChipFigures::NAMES.iter().enumerate() {
                let column = |v: &[ChipFigures]| v.iter().map(|f| f.values()[i]).collect::<Vec<_>>();
                let (a, b) = paired_histograms(&column(&walk), &column(&haar), *bins, i < 2)?;
                eprintln!("{name}: tvd {}", format_sig(a.tvd(&b)?, digits));
                rows.push((*name, a, b));
            }
            write_histograms_csv(&mut out, &rows, digits)?;
            true
        }
    };
    out.flush()?;
    if stochastic {
        eprintln!("seed: {}", cli.seed);
    }
    Ok(())
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn write_samples(out: &mut dyn Write, samples: &[FockState]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["occupations"])?;
    for s in samples {
        w.write_record([s.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

fn read_samples(path: &Path) -> Result<Vec<FockState>> {
    let mut rdr = csv::Reader::from_reader(File::open(path)?);
    rdr.records().map(|rec| rec?.get(0).ok_or_else(|| Error::Parse("empty sample row".into()))?.parse()).collect()
}

fn read_text(path: &Path) -> Result<String> {
    let mut text = String::new();
    File::open(path)?.read_to_string(&mut text)?;
    Ok(text)
}

impl MatrixArgs {
    fn is_random(&self) -> bool {
        self.fixture.is_none() && self.unitary_file.is_none()
    }

    fn load(&self, rng: &mut RandomSource) -> Result<CMatrix> {
        let u = match (&self.fixture, &self.unitary_file, self.modes) {
            (Some(name), _, _) => load_fixture(name)?,
            (None, Some(path), _) => serde_json::from_str::<MatrixJson>(&read_text(path)?)?.to_matrix()?,
            (None, None, Some(m)) => return Ok(haar_unitary(m, rng)),
            (None, None, None) => {
                return Err(Error::InvalidInput("give --fixture, --unitary-file or --modes".into()));
            }
        };
        if let Some(m) = self.modes {
            if m != u.nrows() {
                return Err(Error::Dimension(format!("--modes {m} does not match the {}-mode matrix", u.nrows())));
            }
        }
        Ok(u)
    }
}

impl StateArgs {
    fn resolve(&self, m: usize) -> Result<FockState> {
        let t = match (&self.input, self.photons) {
            (Some(s), _) => s.parse()?,
            (None, Some(n)) => FockState::new((0..m).map(|i| usize::from(i < n)).collect()),
            (None, None) => return Err(Error::InvalidInput("give --input or --photons".into())),
        };
        if t.modes() != m {
            return Err(Error::Dimension(format!("input {t} has {} modes, the interferometer {m}", t.modes())));
        }
        if t.photons() == 0 {
            return Err(Error::InvalidInput("input carries no photons".into()));
        }
        Ok(t)
    }
}

fn parse_groups(text: &str) -> Result<Vec<Vec<usize>>> {
    text.split(';')
        .map(|g| {
            g.split(',')
                .map(|k| match k.trim().parse::<usize>() {
                    Ok(k) if k >= 1 => Ok(k - 1),
                    _ => Err(Error::Parse(format!("bad mode {k:?} in groups {text:?}"))),
                })
                .collect()
        })
        .collect()
}

fn distribution(u: &CMatrix, t: &FockState, regime: RegimeArg, model: &ModelArgs) -> Result<OutputDistribution> {
    let regime = match regime {
        RegimeArg::Quantum => Regime::Quantum,
        RegimeArg::Classical => Regime::Classical,
        RegimeArg::Mixed => Regime::Mixed,
    };
    let model = match regime {
        Regime::Mixed => {
            let r = match (model.r, model.p) {
                (Some(r), _) => r,
                (None, Some(p)) => p * p,
                (None, None) => return Err(Error::InvalidInput("mixed regime needs --r or --p".into())),
            };
            Some(match &model.groups {
                Some(g) => DistinguishabilityModel::from_mode_groups(t, &parse_groups(g)?, r)?,
                None => DistinguishabilityModel::singletons(t.photons(), r),
            })
        }
        _ if model.groups.is_some() || model.r.is_some() || model.p.is_some() => {
            return Err(Error::InvalidInput("--groups, --r and --p apply to the mixed regime".into()));
        }
        _ => None,
    };
    output_distribution(u, t, regime, model.as_ref())
}

fn build_chip(kind: &ChipKind, rng: &mut RandomSource) -> Result<Interferometer> {
    match kind {
        ChipKind::Random { modes, layers } => random_phases_chip(*modes, *layers, rng),
        ChipKind::Table { phases, published, layers } => {
            let columns = match (phases, published) {
                (Some(path), _) => read_phase_table(path)?,
                (None, Some(7)) => parameters7(),
                (None, Some(9)) => parameters9(),
                (None, Some(m)) => return Err(Error::InvalidInput(format!("no published phase table for {m} modes"))),
                (None, None) => return Err(Error::InvalidInput("give --phases or --published".into())),
            };
            let m = columns.first().map_or(0, Vec::len);
            chip_from_phase_table(m, layers.unwrap_or(columns.len() + 1), &columns)
        }
        ChipKind::File { path } => Interferometer::from_json(&read_text(path)?),
    }
}

/// Phase-table CSV (rows = modes, columns = layers, no header) as columns.
fn read_phase_table(path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).from_reader(File::open(path)?);
    let rows: Vec<Vec<f64>> = rdr
        .records()
        .map(|rec| {
            rec?.iter().map(|x| x.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad phase {x:?}")))).collect()
        })
        .collect::<Result<_>>()?;
    let width = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != width) {
        return Err(Error::Dimension("phase table rows differ in length".into()));
    }
    Ok((0..width).map(|c| rows.iter().map(|r| r[c]).collect()).collect())
}

#[derive(Serialize)]
struct BirthdayPoint {
    photons: usize,
    classical: f64,
    quantum: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    degraded_full_bunching: Option<f64>,
}

#[derive(Serialize)]
struct FullBunching {
    mode: usize,
    quantum: f64,
    classical: f64,
    ratio: f64,
}

#[derive(Serialize)]
struct InterferometerBunching {
    input: String,
    bunching_fraction_quantum: f64,
    bunching_fraction_classical: f64,
    predicted_ratio: f64,
    full_bunching: Vec<FullBunching>,
}

#[derive(Serialize)]
struct BunchingReport {
    modes: usize,
    birthday: Vec<BirthdayPoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    interferometer: Option<InterferometerBunching>,
}

fn bunching_report(max_photons: usize, alpha: Option<f64>, matrix: &MatrixArgs, state: &StateArgs) -> Result<BunchingReport> {
    let u = if matrix.is_random() { None } else { Some(matrix.load(&mut RandomSource::new(0))?) };
    let modes = match (&u, matrix.modes) {
        (Some(u), _) => u.nrows(),
        (None, Some(m)) if m > 0 => m,
        _ => return Err(Error::InvalidInput("bunching needs --modes, --fixture or --unitary-file".into())),
    };
    if let Some(a) = alpha.filter(|a| !(0.0..=1.0).contains(a)) {
        return Err(Error::InvalidInput(format!("alpha {a} outside [0, 1]")));
    }
    let birthday = (1..=max_photons)
        .map(|n| BirthdayPoint {
            photons: n,
            classical: classical_collision_prob(n, modes),
            quantum: quantum_collision_prob(n, modes),
            degraded_full_bunching: alpha.map(|a| partial_full_bunching_ratio(a, n)),
        })
        .collect();
    let interferometer = if let Some(u) = u {
        let t = state.resolve(u.nrows())?;
        let q = output_distribution(&u, &t, Regime::Quantum, None)?;
        let c = output_distribution(&u, &t, Regime::Classical, None)?;
        let full_bunching = (0..u.nrows())
            .map(|j| {
                let mut occ = vec![0; u.nrows()];
                occ[j] = t.photons();
                let s = FockState::new(occ);
                let (pq, pc) = (q.prob(&s), c.prob(&s));
                FullBunching { mode: j + 1, quantum: pq, classical: pc, ratio: if pc > 0.0 { pq / pc } else { f64::NAN } }
            })
            .collect();
        Some(InterferometerBunching {
            input: t.to_string(),
            bunching_fraction_quantum: q.bunching_fraction(),
            bunching_fraction_classical: c.bunching_fraction(),
            predicted_ratio: full_bunching_ratio(&t),
            full_bunching,
        })
    } else {
        None
    };
    Ok(BunchingReport { modes, birthday, interferometer })
}

#[derive(Serialize)]
struct TomoReport {
    seed: u64,
    #[serde(flatten)]
    result: ResultJson,
    sweep_best_chi2: f64,
    failed_references: usize,
    iterations: usize,
    accepted: usize,
}

fn tomo(action: &TomoAction, out: &mut dyn Write, digits: usize, seed: u64, rng: &mut RandomSource) -> Result<bool> {
    match action {
        TomoAction::Simulate { matrix, counts, indistinguishability, dir } => {
            let u = matrix.load(rng)?;
            let config = ExperimentConfig { counts: *counts, indistinguishability: *indistinguishability };
            simulate_experiment(&u, &config, rng)?.write_dir(dir, digits)?;
            writeln!(out, "{}", dir.display())?;
            Ok(true)
        }
        TomoAction::Reconstruct { data, iterations, seconds, step, slack, target } => {
            let data = ExperimentalDataset::read_dir(data)?;
            let options = ReconstructionOptions { arccos_slack: slack.unwrap_or(ReconstructionOptions::default().arccos_slack) };
            let sweep = permutation_sweep_with(&data, &options);
            let best = sweep
                .best()
                .ok_or_else(|| {
                    let reason = sweep.failures.first().map_or("empty dataset", |f| f.reason.as_str());
                    Error::Singular(format!("no reference choice succeeded: {reason}"))
                })?;
            let wall_clock = match seconds {
                Some(s) if *s >= 0.0 && s.is_finite() => Some(Duration::from_secs_f64(*s)),
                Some(s) => return Err(Error::InvalidInput(format!("bad time limit {s}"))),
                None => None,
            };
            let budget = RefineBudget { iterations: *iterations, wall_clock, step: *step, options };
            let refined = stochastic_refine(&data, &best.u, &budget, rng)?;
            let mut result = refined.result;
            if result.reference.is_none() {
                result.reference = best.reference;
            }
            let result = match target.load()? {
                Some(t) => result.with_target(&t)?,
                None => result,
            };
            emit_json(
                out,
                &TomoReport {
                    seed,
                    result: result.to_json(),
                    sweep_best_chi2: best.chi2,
                    failed_references: sweep.failures.len(),
                    iterations: refined.iterations,
                    accepted: refined.accepted,
                },
            )?;
            Ok(true)
        }
    }
}

impl TargetArgs {
    fn load(&self) -> Result<Option<CMatrix>> {
        match (&self.fixture, &self.file) {
            (Some(name), _) => Ok(Some(load_fixture(name)?)),
            (None, Some(path)) => Ok(Some(serde_json::from_str::<MatrixJson>(&read_text(path)?)?.to_matrix()?)),
            (None, None) => Ok(None),
        }
    }
}

#[derive(Serialize)]
struct VerdictReport {
    seed: u64,
    #[serde(flatten)]
    verdict: VerdictJson,
}

#[derive(Serialize)]
struct SuccessReport {
    seed: u64,
    test: &'static str,
    input: String,
    #[serde(rename = "N_set")]
    n_set: usize,
    trials: usize,
    success_rate: BTreeMap<&'static str, f64>,
}

fn validate(test: &ValidateTest, out: &mut dyn Write, digits: usize, seed: u64, rng: &mut RandomSource) -> Result<()> {
    let (setup, curve_test, name, sources) = match test {
        ValidateTest::Aa { setup } => (setup, CurveTest::RowNorm, "row_norm", [Source::Quantum, Source::Uniform]),
        ValidateTest::Likelihood { setup, k1, k2 } => {
            (setup, CurveTest::Likelihood { k1: *k1, k2: *k2 }, "likelihood", [Source::Quantum, Source::Distinguishable])
        }
        ValidateTest::Curves { setup, test, source, set_sizes, k1, k2 } => {
            let u = setup.matrix.load(rng)?;
            let t = setup.state.resolve(u.nrows())?;
            let curve_test = match test {
                CurveKind::Aa => CurveTest::RowNorm,
                CurveKind::Likelihood => CurveTest::Likelihood { k1: *k1, k2: *k2 },
            };
            let points = success_rate_curve(&u, &t, curve_test, source.parse()?, set_sizes, setup.trials, rng)?;
            return write_curve_csv(out, &points, digits);
        }
    };
    let ValidateArgs { matrix, state, nset, trials, samples } = setup;
    let u = matrix.load(rng)?;
    let t = state.resolve(u.nrows())?;
    if let Some(path) = samples {
        let samples = read_samples(path)?;
        let trace = match curve_test {
            CurveTest::RowNorm => aa_uniform_test(&samples, &u, &t)?,
            CurveTest::Likelihood { k1, k2 } => {
                let p = output_distribution(&u, &t, Regime::Quantum, None)?;
                let q = output_distribution(&u, &t, Regime::Classical, None)?;
                likelihood_discriminator(&samples, &p, &q, k1, k2)?
            }
        };
        return emit_json(out, &VerdictReport { seed, verdict: trace.to_json() });
    }
    let mut success_rate = BTreeMap::new();
    for source in sources {
        let point = success_rate_curve(&u, &t, curve_test, source, &[*nset], *trials, rng)?[0];
        let key = match source {
            Source::Quantum => "quantum",
            Source::Uniform => "uniform",
            Source::Distinguishable => "distinguishable",
        };
        success_rate.insert(key, point.success_rate);
    }
    emit_json(out, &SuccessReport { seed, test: name, input: t.to_string(), n_set: *nset, trials: *trials, success_rate })
}
