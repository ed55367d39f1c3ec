use super::{classical_prob, enumerate_space, quantum_prob, FockState};
use crate::numerics::{format_sig, total_variation_distance, CMatrix, RandomSource};
use crate::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::io::{Read, Write};

/// Negative probabilities above this (from cancellation) are clamped to zero.
const CLAMP_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Quantum,
    Classical,
    Mixed,
}

impl std::str::FromStr for Regime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quantum" => Ok(Regime::Quantum),
            "classical" => Ok(Regime::Classical),
            "mixed" => Ok(Regime::Mixed),
            _ => Err(Error::Parse(format!("unknown regime {s:?}"))),
        }
    }
}

/// Partial distinguishability as a mixture of the fully indistinguishable
/// evolution (weight `r`) and one where photons interfere only within
/// their group.
///
/// Photons are numbered `0..n` in the order of [`FockState::mode_list`] of
/// the input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistinguishabilityModel {
    pub groups: Vec<Vec<usize>>,
    pub r: f64,
}

impl DistinguishabilityModel {
    pub fn new(groups: Vec<Vec<usize>>, r: f64) -> Self {
        Self { groups, r }
    }

    /// Mixture weight from the pairwise indistinguishability `p`, `r = p²`.
    pub fn from_indistinguishability(groups: Vec<Vec<usize>>, p: f64) -> Self {
        Self { groups, r: p * p }
    }

    /// Every photon in its own group.
    pub fn singletons(n: usize, r: f64) -> Self {
        Self { groups: (0..n).map(|i| vec![i]).collect(), r }
    }

    /// Groups given by input modes (0-based) instead of photon indices.
    pub fn from_mode_groups(input: &FockState, mode_groups: &[Vec<usize>], r: f64) -> Result<Self> {
        let list = input.mode_list();
        let mut groups = Vec::with_capacity(mode_groups.len());
        for g in mode_groups {
            let mut photons = Vec::new();
            for &mode in g {
                let hits: Vec<usize> = (0..list.len()).filter(|&i| list[i] == mode).collect();
                if hits.is_empty() {
                    return Err(Error::InvalidInput(format!("mode {mode} carries no input photon")));
                }
                photons.extend(hits);
            }
            groups.push(photons);
        }
        let model = Self { groups, r };
        model.validate(list.len())?;
        Ok(model)
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if !(0.0..=1.0).contains(&self.r) {
            return Err(Error::InvalidInput(format!("mixture weight {} outside [0,1]", self.r)));
        }
        let mut seen = vec![false; n];
        for &i in self.groups.iter().flatten() {
            if i >= n || seen[i] {
                return Err(Error::InvalidInput(format!("groups do not partition 0..{n}")));
            }
            seen[i] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidInput(format!("groups do not cover 0..{n}")));
        }
        Ok(())
    }
}

/// Normalized probabilities over an ordered Fock space.
#[derive(Clone, Debug)]
pub struct OutputDistribution {
    space: Vec<FockState>,
    probs: Vec<f64>,
    regime: Regime,
    index: HashMap<FockState, usize>,
}

impl OutputDistribution {
    /// Clamps float-level negatives to zero and renormalizes.
    pub fn new(space: Vec<FockState>, mut probs: Vec<f64>, regime: Regime) -> Result<Self> {
        if space.len() != probs.len() {
            return Err(Error::Dimension(format!("{} states but {} probabilities", space.len(), probs.len())));
        }
        for p in probs.iter_mut() {
            if !p.is_finite() || *p < -CLAMP_TOL {
                return Err(Error::InvalidInput(format!("invalid probability {p}")));
            }
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        let total: f64 = probs.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidInput("distribution has no mass".into()));
        }
        probs.iter_mut().for_each(|p| *p /= total);
        let index = space.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        Ok(Self { space, probs, regime, index })
    }

    pub fn space(&self) -> &[FockState] {
        &self.space
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    pub fn index_of(&self, s: &FockState) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Probability of `s`, zero outside the space.
    pub fn prob(&self, s: &FockState) -> f64 {
        self.index_of(s).map_or(0.0, |i| self.probs[i])
    }

    pub fn tvd(&self, other: &OutputDistribution) -> Result<f64> {
        if self.space != other.space {
            return Err(Error::InvalidInput("distributions live on different sample spaces".into()));
        }
        total_variation_distance(&self.probs, &other.probs)
    }

    /// Relative frequencies of `samples` over this distribution's space.
    pub fn empirical(&self, samples: &[FockState]) -> Result<Vec<f64>> {
        let mut counts = vec![0.0; self.len()];
        for s in samples {
            let i = self
                .index_of(s)
                .ok_or_else(|| Error::InvalidInput(format!("sample {s} outside the sample space")))?;
            counts[i] += 1.0;
        }
        let n = samples.len().max(1) as f64;
        counts.iter_mut().for_each(|c| *c /= n);
        Ok(counts)
    }

    /// Total variation distance between the empirical law of `samples` and `self`.
    pub fn empirical_tvd(&self, samples: &[FockState]) -> Result<f64> {
        total_variation_distance(&self.empirical(samples)?, &self.probs)
    }

    /// Mass on outcomes with at least one multiply occupied mode.
    pub fn bunching_fraction(&self) -> f64 {
        let free: f64 =
            self.space.iter().zip(&self.probs).filter(|(s, _)| s.is_collision_free()).map(|(_, p)| p).sum();
        (1.0 - free).max(0.0)
    }

    pub fn sampler(&self) -> Sampler<'_> {
        Sampler::new(self)
    }

    pub fn write_csv<W: Write>(&self, w: W, digits: usize) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["occupations", "probability"])?;
        for (s, p) in self.space.iter().zip(&self.probs) {
            out.write_record([s.to_string(), format_sig(*p, digits)])?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R, regime: Regime) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let mut space = Vec::new();
        let mut probs = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            if rec.len() != 2 {
                return Err(Error::Parse(format!("expected 2 columns, found {}", rec.len())));
            }
            space.push(rec[0].parse::<FockState>()?);
            probs.push(rec[1].trim().parse::<f64>().map_err(|e| Error::Parse(e.to_string()))?);
        }
        Self::new(space, probs, regime)
    }
}

/// Inverse-CDF sampler over a fixed distribution.
pub struct Sampler<'a> {
    dist: &'a OutputDistribution,
    cdf: Vec<f64>,
}

impl<'a> Sampler<'a> {
    pub fn new(dist: &'a OutputDistribution) -> Self {
        let mut acc = 0.0;
        let cdf = dist
            .probs
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        Self { dist, cdf }
    }

    pub fn draw_index(&self, rng: &mut RandomSource) -> usize {
        let total = *self.cdf.last().expect("non-empty distribution");
        let x = rng.uniform() * total;
        // First index whose cumulative mass exceeds x; zero-mass states are never hit.
        self.cdf.partition_point(|&c| c <= x).min(self.cdf.len() - 1)
    }

    pub fn draw(&self, rng: &mut RandomSource) -> &'a FockState {
        &self.dist.space[self.draw_index(rng)]
    }
}

/// `count` independent draws from `dist`.
pub fn sample(dist: &OutputDistribution, rng: &mut RandomSource, count: usize) -> Vec<FockState> {
    let sampler = dist.sampler();
    (0..count).map(|_| sampler.draw(rng).clone()).collect()
}

pub fn bunching_fraction(dist: &OutputDistribution) -> f64 {
    dist.bunching_fraction()
}

/// Output distribution of input `t` through `u` in the requested regime.
/// The mixed regime requires `model`.
pub fn output_distribution(
    u: &CMatrix,
    t: &FockState,
    regime: Regime,
    model: Option<&DistinguishabilityModel>,
) -> Result<OutputDistribution> {
    let m = u.nrows();
    let n = t.photons();
    let space = enumerate_space(m, n, false)?;
    let probs = match regime {
        Regime::Quantum => map_space(&space, |s| quantum_prob(u, t, s))?,
        Regime::Classical => map_space(&space, |s| classical_prob(u, t, s))?,
        Regime::Mixed => {
            let model = model.ok_or_else(|| Error::InvalidInput("mixed regime needs a model".into()))?;
            model.validate(n)?;
            let q = map_space(&space, |s| quantum_prob(u, t, s))?;
            let g = grouped_probs(u, t, &model.groups, &space)?;
            q.iter().zip(&g).map(|(a, b)| model.r * a + (1.0 - model.r) * b).collect()
        }
    };
    OutputDistribution::new(space, probs, regime)
}

/// Photons interfere within each group; groups are mutually distinguishable,
/// so their per-group quantum distributions convolve.
pub fn grouped_distribution(u: &CMatrix, t: &FockState, groups: &[Vec<usize>]) -> Result<OutputDistribution> {
    let n = t.photons();
    DistinguishabilityModel::new(groups.to_vec(), 0.0).validate(n)?;
    let space = enumerate_space(u.nrows(), n, false)?;
    let probs = grouped_probs(u, t, groups, &space)?;
    OutputDistribution::new(space, probs, Regime::Mixed)
}

fn grouped_probs(u: &CMatrix, t: &FockState, groups: &[Vec<usize>], space: &[FockState]) -> Result<Vec<f64>> {
    let m = u.nrows();
    if t.modes() != m {
        return Err(Error::Dimension(format!("input on {} modes for a {m}-mode unitary", t.modes())));
    }
    let list = t.mode_list();
    let mut acc: HashMap<Vec<usize>, f64> = HashMap::from([(vec![0; m], 1.0)]);
    for g in groups {
        let mut occ = vec![0; m];
        for &photon in g {
            occ[list[photon]] += 1;
        }
        let sub_input = FockState::new(occ);
        let sub_space = enumerate_space(m, g.len(), false)?;
        let sub_probs = map_space(&sub_space, |s| quantum_prob(u, &sub_input, s))?;
        let mut next: HashMap<Vec<usize>, f64> = HashMap::with_capacity(acc.len() * sub_space.len());
        for (partial, p) in &acc {
            for (s, q) in sub_space.iter().zip(&sub_probs) {
                if *q == 0.0 {
                    continue;
                }
                let key: Vec<usize> = partial.iter().zip(s.occupations()).map(|(a, b)| a + b).collect();
                *next.entry(key).or_insert(0.0) += p * q;
            }
        }
        acc = next;
    }
    Ok(space.iter().map(|s| acc.get(s.occupations()).copied().unwrap_or(0.0)).collect())
}

fn map_space<F>(space: &[FockState], f: F) -> Result<Vec<f64>>
where
    F: Fn(&FockState) -> Result<f64> + Sync + Send,
{
    space.par_iter().map(f).collect()
}
