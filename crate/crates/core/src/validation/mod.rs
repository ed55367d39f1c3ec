//! Statistical validation of boson-sampler output: the row-norm test
//! against uniform sampling and a thresholded likelihood-ratio test against
//! distinguishable photons.

use crate::boson::{output_distribution, transition_submatrix, FockState, OutputDistribution, Regime};
use crate::numerics::{CMatrix, RandomSource};
use crate::{Error, Result};
use rand::seq::index;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;

/// Default likelihood-ratio thresholds.
pub const K1: f64 = 0.9;
pub const K2: f64 = 1.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestKind {
    RowNorm,
    Likelihood,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    BosonSampler,
    UniformSampler,
    Indistinguishable,
    Distinguishable,
    Inconclusive,
}

/// Per-event scores of a sequential test and the resulting verdict.
#[derive(Clone, Debug, PartialEq)]
pub struct ValidationTrace {
    pub test: TestKind,
    /// Scores in sample order; collision events skipped by the row-norm
    /// test are absent.
    pub increments: Vec<i8>,
    pub counter: i64,
    pub verdict: Verdict,
    /// Samples offered to the test, including skipped ones.
    pub samples: usize,
    pub skipped_collisions: usize,
    /// Events where exactly one of the two likelihoods vanished.
    pub zero_probability_events: usize,
}

impl ValidationTrace {
    fn finish(test: TestKind, increments: Vec<i8>, samples: usize, skipped: usize, zero: usize) -> Self {
        let counter: i64 = increments.iter().map(|&d| d as i64).sum();
        let (pos, neg) = match test {
            TestKind::RowNorm => (Verdict::BosonSampler, Verdict::UniformSampler),
            TestKind::Likelihood => (Verdict::Indistinguishable, Verdict::Distinguishable),
        };
        let verdict = match counter.signum() {
            1 => pos,
            -1 => neg,
            _ => Verdict::Inconclusive,
        };
        Self { test, increments, counter, verdict, samples, skipped_collisions: skipped, zero_probability_events: zero }
    }

    /// Running counter after each scored event.
    pub fn trajectory(&self) -> Vec<i64> {
        self.increments
            .iter()
            .scan(0i64, |c, &d| {
                *c += d as i64;
                Some(*c)
            })
            .collect()
    }

    pub fn to_json(&self) -> VerdictJson {
        VerdictJson {
            test: self.test,
            n: self.samples,
            counter: self.counter,
            verdict: self.verdict,
            skipped_collisions: self.skipped_collisions,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub test: TestKind,
    #[serde(rename = "N")]
    pub n: usize,
    pub counter: i64,
    pub verdict: Verdict,
    pub skipped_collisions: usize,
}

/// `R(U_{S,T}) = ∏ᵢ Σⱼ |xᵢⱼ|²` over the rows of the transition submatrix.
pub fn row_norm_estimator(u: &CMatrix, t: &FockState, s: &FockState) -> f64 {
    let n = t.photons();
    transition_submatrix(u, t, s).chunks(n.max(1)).map(|row| row.iter().map(|z| z.norm_sqr()).sum::<f64>()).product()
}

/// Threshold `(n/m)ⁿ` of the row-norm test.
pub fn row_norm_threshold(m: usize, n: usize) -> f64 {
    (n as f64 / m as f64).powi(n as i32)
}

fn check_states(u: &CMatrix, t: &FockState, samples: &[FockState]) -> Result<()> {
    let m = u.nrows();
    if t.modes() != m {
        return Err(Error::Dimension(format!("{}-mode input for a {m}-mode interferometer", t.modes())));
    }
    if let Some(s) = samples.iter().find(|s| s.modes() != m || s.photons() != t.photons()) {
        return Err(Error::InvalidInput(format!("sample {s} does not match the input")));
    }
    Ok(())
}

/// Scores +1 when `R > (n/m)ⁿ` and −1 otherwise; collision samples are
/// skipped and counted.
pub fn aa_uniform_test(samples: &[FockState], u: &CMatrix, t: &FockState) -> Result<ValidationTrace> {
    check_states(u, t, samples)?;
    let threshold = row_norm_threshold(u.nrows(), t.photons());
    let mut increments = Vec::with_capacity(samples.len());
    let mut skipped = 0;
    for s in samples {
        if !s.is_collision_free() {
            skipped += 1;
            continue;
        }
        increments.push(if row_norm_estimator(u, t, s) > threshold { 1 } else { -1 });
    }
    Ok(ValidationTrace::finish(TestKind::RowNorm, increments, samples.len(), skipped, 0))
}

/// Score of one event with likelihoods `p` (indistinguishable) and `q`
/// (distinguishable). Ratios are compared by cross-multiplication so that
/// swapping `p` and `q` negates the score exactly.
pub fn likelihood_score(p: f64, q: f64, k1: f64, k2: f64) -> i8 {
    if p >= k2 * q {
        2
    } else if q >= k2 * p {
        -2
    } else if k1 * p >= q {
        1
    } else if k1 * q >= p {
        -1
    } else {
        0
    }
}

/// Thresholded likelihood-ratio test between the indistinguishable and the
/// distinguishable output distributions.
pub fn likelihood_discriminator(
    samples: &[FockState],
    p_ind: &OutputDistribution,
    q_dis: &OutputDistribution,
    k1: f64,
    k2: f64,
) -> Result<ValidationTrace> {
    if !(k1 > 0.0 && k1 < 1.0 && k2 * k1 > 1.0) {
        return Err(Error::InvalidInput(format!("thresholds need 0 < k1 < 1 and k2 > 1/k1, got {k1}, {k2}")));
    }
    let mut increments = Vec::with_capacity(samples.len());
    let mut zero = 0;
    for s in samples {
        let (p, q) = (p_ind.prob(s), q_dis.prob(s));
        if p == 0.0 && q == 0.0 {
            return Err(Error::InvalidInput(format!("sample {s} lies outside both supports")));
        }
        if p == 0.0 || q == 0.0 {
            zero += 1;
        }
        increments.push(likelihood_score(p, q, k1, k2));
    }
    Ok(ValidationTrace::finish(TestKind::Likelihood, increments, samples.len(), 0, zero))
}

/// Uniformly random collision-free output of `n` photons in `m` modes.
pub fn uniform_no_collision_sample(m: usize, n: usize, rng: &mut RandomSource) -> Result<FockState> {
    if n > m {
        return Err(Error::InvalidInput(format!("{n} photons cannot avoid collisions in {m} modes")));
    }
    let mut occ = vec![0; m];
    for i in index::sample(rng, m, n) {
        occ[i] = 1;
    }
    Ok(FockState::new(occ))
}

/// Where the samples of a simulated validation run come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    /// Indistinguishable photons through `U`.
    Quantum,
    /// Uniform over collision-free outputs.
    Uniform,
    /// Fully distinguishable photons through `U`.
    Distinguishable,
}

impl std::str::FromStr for Source {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quantum" => Ok(Source::Quantum),
            "uniform" => Ok(Source::Uniform),
            "distinguishable" => Ok(Source::Distinguishable),
            _ => Err(Error::Parse(format!("unknown source {s:?}"))),
        }
    }
}

/// Statistical test evaluated by [`success_rate_curve`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CurveTest {
    RowNorm,
    Likelihood { k1: f64, k2: f64 },
}

impl CurveTest {
    fn expected(&self, source: Source) -> Result<Verdict> {
        match (self, source) {
            (CurveTest::RowNorm, Source::Quantum) => Ok(Verdict::BosonSampler),
            (CurveTest::RowNorm, Source::Uniform) => Ok(Verdict::UniformSampler),
            (CurveTest::Likelihood { .. }, Source::Quantum) => Ok(Verdict::Indistinguishable),
            (CurveTest::Likelihood { .. }, Source::Distinguishable) => Ok(Verdict::Distinguishable),
            _ => Err(Error::InvalidInput(format!("{source:?} samples are not a hypothesis of {self:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub n_set: usize,
    pub success_rate: f64,
    pub trials: usize,
}

/// Fraction of `trials` independent sample sets of each size for which the
/// test returns the verdict matching `source`. Every drawn sample counts
/// toward the set size, including skipped and inconclusive ones.
pub fn success_rate_curve(
    u: &CMatrix,
    t: &FockState,
    test: CurveTest,
    source: Source,
    set_sizes: &[usize],
    trials: usize,
    rng: &mut RandomSource,
) -> Result<Vec<CurvePoint>> {
    let expected = test.expected(source)?;
    check_states(u, t, &[])?;
    let (m, n) = (u.nrows(), t.photons());
    let quantum = output_distribution(u, t, Regime::Quantum, None)?;
    let classical = match test {
        CurveTest::Likelihood { .. } => Some(output_distribution(u, t, Regime::Classical, None)?),
        CurveTest::RowNorm => None,
    };
    let drawn = match source {
        Source::Quantum => Some(&quantum),
        Source::Distinguishable => classical.as_ref(),
        Source::Uniform => None,
    };
    let sampler = drawn.map(|d| d.sampler());
    let mut points = Vec::with_capacity(set_sizes.len());
    for &n_set in set_sizes {
        let streams: Vec<RandomSource> = (0..trials).map(|_| rng.fork()).collect();
        let verdicts = streams
            .into_par_iter()
            .map(|mut local| -> Result<Verdict> {
                let samples = match &sampler {
                    Some(s) => (0..n_set).map(|_| s.draw(&mut local).clone()).collect(),
                    None => (0..n_set).map(|_| uniform_no_collision_sample(m, n, &mut local)).collect::<Result<Vec<_>>>()?,
                };
                let trace = match test {
                    CurveTest::RowNorm => aa_uniform_test(&samples, u, t)?,
                    CurveTest::Likelihood { k1, k2 } => {
                        likelihood_discriminator(&samples, &quantum, classical.as_ref().expect("built above"), k1, k2)?
                    }
                };
                Ok(trace.verdict)
            })
            .collect::<Result<Vec<_>>>()?;
        let hits = verdicts.iter().filter(|&&v| v == expected).count();
        let success_rate = if trials == 0 { 0.0 } else { hits as f64 / trials as f64 };
        points.push(CurvePoint { n_set, success_rate, trials });
    }
    Ok(points)
}

/// Curve as CSV with columns `N_set,success_rate,trials`.
pub fn write_curve_csv<W: Write>(w: W, points: &[CurvePoint], digits: usize) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["N_set", "success_rate", "trials"])?;
    for p in points {
        out.write_record([p.n_set.to_string(), crate::numerics::format_sig(p.success_rate, digits), p.trials.to_string()])?;
    }
    out.flush()?;
    Ok(())
}
