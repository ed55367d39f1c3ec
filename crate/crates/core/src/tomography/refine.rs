use super::laing_obrien::{sweep_scored, ReconstructionOptions, ReconstructionResult};
use super::metrics::model_visibility;
use super::ExperimentalDataset;
use crate::numerics::{unitarity_error, CMatrix, RandomSource};
use crate::{Error, Result};
use std::time::{Duration, Instant};

/// Unitarity tolerance for the starting matrix of a refinement.
const START_UNITARY_TOL: f64 = 1e-8;

/// Stopping rule and step scale for [`stochastic_refine`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RefineBudget {
    pub iterations: usize,
    pub wall_clock: Option<Duration>,
    /// Perturbation widths are the error bars divided by this.
    pub step: f64,
    pub options: ReconstructionOptions,
}

impl Default for RefineBudget {
    fn default() -> Self {
        Self { iterations: 1000, wall_clock: None, step: 1.0, options: ReconstructionOptions::default() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RefineOutcome {
    pub result: ReconstructionResult,
    pub initial_chi2: f64,
    /// Best χ² after each iteration.
    pub trace: Vec<f64>,
    pub accepted: usize,
    pub iterations: usize,
}

/// Synthetic data around the prediction of `u`: single-photon columns
/// perturbed then renormalized, visibilities perturbed, each by Gaussians
/// with the experimental error bars divided by `step`.
fn perturbed(u: &CMatrix, data: &ExperimentalDataset, step: f64, rng: &mut RandomSource) -> ExperimentalDataset {
    let m = data.m;
    let mut out = ExperimentalDataset::zeros(m);
    out.single_err = data.single_err.clone();
    for k in 0..m {
        let column: Vec<f64> =
            (0..m).map(|j| u[(j, k)].norm_sqr() + rng.normal() * data.single_err[(j, k)] / step).collect();
        let total: f64 = column.iter().sum();
        for j in 0..m {
            out.single[(j, k)] = column[j] / total;
        }
    }
    for (k, h, j, g) in data.pair_indices() {
        let sigma = data.visibility_err(k, h, j, g);
        let v = model_visibility(u, k, h, j, g) + rng.normal() * sigma / step;
        out.set_visibility(k, h, j, g, v, sigma);
    }
    out
}

/// Random search around `u0`: predicted data is perturbed within the error
/// bars, swept over all reference choices, and the best candidate replaces
/// the current matrix whenever its χ² against the measured data is lower.
pub fn stochastic_refine(
    data: &ExperimentalDataset,
    u0: &CMatrix,
    budget: &RefineBudget,
    rng: &mut RandomSource,
) -> Result<RefineOutcome> {
    data.validate()?;
    if u0.shape() != (data.m, data.m) || unitarity_error(u0) > START_UNITARY_TOL {
        return Err(Error::InvalidInput("refinement must start from a unitary of the dataset's size".into()));
    }
    if !(budget.step > 0.0) {
        return Err(Error::InvalidInput(format!("step divisor {} must be positive", budget.step)));
    }
    let start = Instant::now();
    let mut best = ReconstructionResult::evaluate(data, u0.clone())?;
    let initial_chi2 = best.chi2;
    let mut trace = Vec::with_capacity(budget.iterations.min(1 << 16));
    let mut accepted = 0;
    let mut iterations = 0;
    while iterations < budget.iterations && budget.wall_clock.is_none_or(|limit| start.elapsed() < limit) {
        iterations += 1;
        let trial = perturbed(&best.u, data, budget.step, rng);
        let sweep = sweep_scored(&trial, data, &budget.options);
        if let Some(candidate) = sweep.candidates.into_iter().next() {
            if candidate.chi2 < best.chi2 {
                best = candidate;
                accepted += 1;
            }
        }
        trace.push(best.chi2);
    }
    Ok(RefineOutcome { result: best, initial_chi2, trace, accepted, iterations })
}
