use super::{enumerate_space, quantum_amplitude, FockState, OutputDistribution, Regime};
use crate::numerics::{CMatrix, C64};
use crate::{Error, Result};

/// Heralded evolution: the outcome of a post-selection on ancilla modes.
#[derive(Clone, Debug)]
pub struct PostSelection {
    /// Probability that the ancillas show the requested pattern.
    pub success: f64,
    /// States of the remaining modes, in their original order.
    pub space: Vec<FockState>,
    /// Unnormalized amplitudes onto `space` given the herald.
    pub amplitudes: Vec<C64>,
    /// Conditional distribution, absent when the herald never fires.
    pub conditional: Option<OutputDistribution>,
}

/// Evolves `input` through `u`, keeps only outcomes whose `ancilla_modes`
/// (0-based) hold exactly `ancilla_outcome`, and returns the heralded map
/// on the remaining modes.
pub fn postselected_map(
    u: &CMatrix,
    input: &FockState,
    ancilla_modes: &[usize],
    ancilla_outcome: &[usize],
) -> Result<PostSelection> {
    let m = u.nrows();
    if ancilla_modes.len() != ancilla_outcome.len() {
        return Err(Error::InvalidInput("one outcome per ancilla mode required".into()));
    }
    let mut is_ancilla = vec![false; m];
    for &a in ancilla_modes {
        if a >= m || is_ancilla[a] {
            return Err(Error::InvalidInput(format!("ancilla mode {a} repeated or outside 0..{m}")));
        }
        is_ancilla[a] = true;
    }
    let heralded: usize = ancilla_outcome.iter().sum();
    let n = input.photons();
    if heralded > n {
        return Err(Error::InvalidInput(format!("ancillas expect {heralded} photons, input has {n}")));
    }
    let kept: Vec<usize> = (0..m).filter(|&k| !is_ancilla[k]).collect();
    let space = if kept.is_empty() {
        if heralded != n {
            return Err(Error::InvalidInput("no free modes left for the unheralded photons".into()));
        }
        vec![FockState::new(Vec::new())]
    } else {
        enumerate_space(kept.len(), n - heralded, false)?
    };

    let mut amplitudes = Vec::with_capacity(space.len());
    for s in &space {
        let mut full = vec![0; m];
        for (&k, &c) in kept.iter().zip(s.occupations()) {
            full[k] = c;
        }
        for (&a, &c) in ancilla_modes.iter().zip(ancilla_outcome) {
            full[a] = c;
        }
        amplitudes.push(quantum_amplitude(u, input, &FockState::new(full))?);
    }
    let probs: Vec<f64> = amplitudes.iter().map(|a| a.norm_sqr()).collect();
    let success: f64 = probs.iter().sum();
    let conditional = if success > 1e-15 {
        Some(OutputDistribution::new(space.clone(), probs, Regime::Quantum)?)
    } else {
        None
    };
    Ok(PostSelection { success, space, amplitudes, conditional })
}
