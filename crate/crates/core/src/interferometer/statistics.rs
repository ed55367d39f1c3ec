use super::{compose_unitary, random_phases_chip};
use crate::boson::{enumerate_space, quantum_prob, FockState};
use crate::numerics::{haar_unitary, permanent, CMatrix, RandomSource};
use crate::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;

/// Source of random interferometers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ensemble {
    Haar,
    RandomPhases { layers: usize },
}

impl Ensemble {
    pub fn sample(&self, m: usize, rng: &mut RandomSource) -> Result<CMatrix> {
        match *self {
            Ensemble::Haar => Ok(haar_unitary(m, rng)),
            Ensemble::RandomPhases { layers } => compose_unitary(&random_phases_chip(m, layers, rng)?),
        }
    }
}

/// Figures of merit of one odd-sized interferometer, for photons entering
/// the central mode (amplitudes) or the three central modes (the rest).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChipFigures {
    /// `Re U[c,c]` for the central mode `c`.
    pub re_central: f64,
    /// `Re U[0,c]`: central input to the first output.
    pub re_endpoint: f64,
    /// Probability that the three photons exit the three central modes.
    pub prob_central: f64,
    /// Probability that they exit the first three modes.
    pub prob_endpoint: f64,
    /// Probability of at least two photons sharing an output.
    pub bunching: f64,
}

impl ChipFigures {
    pub const NAMES: [&'static str; 5] = ["re_central", "re_endpoint", "prob_central", "prob_endpoint", "bunching"];

    pub fn of(u: &CMatrix) -> Result<Self> {
        let m = u.nrows();
        if m < 3 || m % 2 == 0 || u.ncols() != m {
            return Err(Error::Dimension(format!("ensemble figures need an odd square matrix with m >= 3, got {}x{}", m, u.ncols())));
        }
        let c = m / 2;
        let central = [c - 1, c, c + 1];
        let prob = |outs: [usize; 3]| -> Result<f64> {
            let sub = CMatrix::from_fn(3, 3, |i, j| u[(outs[i], central[j])]);
            Ok(permanent(&sub)?.norm_sqr())
        };
        let input = FockState::from_modes(m, &central)?;
        let spread: f64 = enumerate_space(m, 3, true)?.iter().map(|s| quantum_prob(u, &input, s)).sum::<Result<f64>>()?;
        Ok(Self {
            re_central: u[(c, c)].re,
            re_endpoint: u[(0, c)].re,
            prob_central: prob(central)?,
            prob_endpoint: prob([0, 1, 2])?,
            bunching: 1.0 - spread,
        })
    }

    pub fn values(&self) -> [f64; 5] {
        [self.re_central, self.re_endpoint, self.prob_central, self.prob_endpoint, self.bunching]
    }
}

/// Figures of `samples` independent draws from `ensemble`, one forked
/// stream per draw.
pub fn ensemble_figures(m: usize, ensemble: Ensemble, samples: usize, rng: &mut RandomSource) -> Result<Vec<ChipFigures>> {
    let streams: Vec<RandomSource> = (0..samples).map(|_| rng.fork()).collect();
    streams.into_par_iter().map(|mut local| ChipFigures::of(&ensemble.sample(m, &mut local)?)).collect()
}

/// Equal-width histogram on `[lo, hi]`; values outside fall into the edge bins.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<usize>,
}

impl Histogram {
    pub fn new(values: &[f64], lo: f64, hi: f64, bins: usize) -> Result<Self> {
        if bins == 0 || !(hi > lo) {
            return Err(Error::InvalidInput(format!("histogram needs bins > 0 and hi > lo, got {bins} bins on [{lo}, {hi}]")));
        }
        let mut counts = vec![0; bins];
        let width = (hi - lo) / bins as f64;
        for &v in values {
            let i = ((v - lo) / width).floor().clamp(0.0, (bins - 1) as f64) as usize;
            counts[i] += 1;
        }
        Ok(Self { lo, hi, counts })
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Total variation distance between the normalized histograms.
    pub fn tvd(&self, other: &Histogram) -> Result<f64> {
        if self.counts.len() != other.counts.len() || self.lo != other.lo || self.hi != other.hi {
            return Err(Error::Dimension("histograms have different binnings".into()));
        }
        let (a, b) = (self.total().max(1) as f64, other.total().max(1) as f64);
        Ok(0.5 * self.counts.iter().zip(&other.counts).map(|(&x, &y)| (x as f64 / a - y as f64 / b).abs()).sum::<f64>())
    }

    pub fn bin_center(&self, i: usize) -> f64 {
        self.lo + (i as f64 + 0.5) * (self.hi - self.lo) / self.counts.len() as f64
    }
}

/// Histograms of two samples on a common binning: `[-1, 1]` for amplitudes
/// (`bounded`), otherwise `[0, q]` with `q` the 99th percentile of the pooled
/// values.
pub fn paired_histograms(a: &[f64], b: &[f64], bins: usize, bounded: bool) -> Result<(Histogram, Histogram)> {
    let (lo, hi) = if bounded {
        (-1.0, 1.0)
    } else {
        let mut pooled: Vec<f64> = a.iter().chain(b).copied().collect();
        if pooled.is_empty() {
            return Err(Error::InvalidInput("no values to histogram".into()));
        }
        pooled.sort_by(f64::total_cmp);
        let q = pooled[((pooled.len() - 1) as f64 * 0.99).round() as usize];
        (0.0, if q > 0.0 { q } else { 1.0 })
    };
    Ok((Histogram::new(a, lo, hi, bins)?, Histogram::new(b, lo, hi, bins)?))
}

/// Per-figure histograms as CSV with columns `figure,bin_center,first,second`.
pub fn write_histograms_csv<W: Write>(w: W, rows: &[(&str, Histogram, Histogram)], digits: usize) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["figure", "bin_center", "first", "second"])?;
    for (name, a, b) in rows {
        for i in 0..a.counts.len() {
            out.write_record([
                name.to_string(),
                crate::numerics::format_sig(a.bin_center(i), digits),
                a.counts[i].to_string(),
                b.counts[i].to_string(),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}
