use crate::numerics::{CMatrix, RandomSource};
use crate::tomography::ExperimentalDataset;
use crate::{Error, Result};
use rand_distr::{Binomial, Distribution, Poisson};

/// Settings for synthetic characterization data.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExperimentConfig {
    /// Photons (single-photon runs) or photon pairs (two-photon runs)
    /// injected per input configuration; `None` gives exact values with
    /// zero error bars.
    pub counts: Option<u64>,
    /// Weight of the indistinguishable branch; visibilities scale by it.
    pub indistinguishability: f64,
}

impl ExperimentConfig {
    pub fn exact() -> Self {
        Self { counts: None, indistinguishability: 1.0 }
    }

    pub fn with_counts(counts: u64) -> Self {
        Self { counts: Some(counts), indistinguishability: 1.0 }
    }
}

/// Simulates single-photon transition counts (multinomial per input) and
/// two-photon coincidences for indistinguishable and distinguishable pairs
/// (Poissonian), converted to probabilities, visibilities and standard errors.
pub fn simulate_experiment(u: &CMatrix, config: &ExperimentConfig, rng: &mut RandomSource) -> Result<ExperimentalDataset> {
    let m = u.nrows();
    if !u.is_square() || m < 2 {
        return Err(Error::Dimension(format!("{}x{} interferometer", u.nrows(), u.ncols())));
    }
    if config.counts == Some(0) {
        return Err(Error::InvalidInput("counts per configuration must be positive".into()));
    }
    let r = config.indistinguishability;
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::InvalidInput(format!("indistinguishability {r} outside [0,1]")));
    }
    let mut data = ExperimentalDataset::zeros(m);

    for k in 0..m {
        let column: Vec<f64> = (0..m).map(|j| u[(j, k)].norm_sqr()).collect();
        let total: f64 = column.iter().sum();
        match config.counts {
            None => {
                for j in 0..m {
                    data.single[(j, k)] = column[j] / total;
                }
            }
            Some(n) => {
                let mut left = n;
                let mut mass = 1.0;
                for j in 0..m {
                    let p = column[j] / total;
                    let hits = if j == m - 1 || mass <= 0.0 {
                        left
                    } else {
                        sample_binomial(left, (p / mass).clamp(0.0, 1.0), rng)
                    };
                    left -= hits;
                    mass -= p;
                    let est = hits as f64 / n as f64;
                    data.single[(j, k)] = est;
                    data.single_err[(j, k)] = (est * (1.0 - est) / n as f64).sqrt();
                }
            }
        }
    }

    for (k, h, j, g) in data.pair_indices() {
        let a = u[(j, k)] * u[(g, h)];
        let b = u[(j, h)] * u[(g, k)];
        let pc = a.norm_sqr() + b.norm_sqr();
        if pc < 1e-14 {
            continue;
        }
        let pq = r * (a + b).norm_sqr() + (1.0 - r) * pc;
        let (v, sigma) = match config.counts {
            None => ((pc - pq) / pc, 0.0),
            Some(n) => {
                let cc = sample_poisson(n as f64 * pc, rng);
                let cq = sample_poisson(n as f64 * pq, rng);
                if cc == 0.0 {
                    continue;
                }
                let ratio = cq / cc;
                // Poissonian propagation for 1 − cq/cc, with a one-count floor.
                let sigma = (cq.max(1.0) / (cc * cc) + ratio * ratio / cc).sqrt();
                (1.0 - ratio, sigma)
            }
        };
        data.set_visibility(k, h, j, g, v, sigma);
    }
    Ok(data)
}

fn sample_binomial(n: u64, p: f64, rng: &mut RandomSource) -> u64 {
    Binomial::new(n, p).expect("probability clamped to [0,1]").sample(rng)
}

fn sample_poisson(mean: f64, rng: &mut RandomSource) -> f64 {
    if mean <= 0.0 {
        return 0.0;
    }
    Poisson::new(mean).expect("positive mean").sample(rng)
}
