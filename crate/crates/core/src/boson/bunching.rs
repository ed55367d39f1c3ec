use super::{classical_prob, factorial, quantum_prob, FockState};
use crate::numerics::CMatrix;
use crate::{Error, Result};

/// Chance that `n` distinguishable particles dropped uniformly into `m`
/// boxes share at least one box: `1 − ∏_{k<n}(1 − k/m)`.
pub fn classical_collision_prob(n: usize, m: usize) -> f64 {
    if n > m {
        return 1.0;
    }
    let m = m as f64;
    1.0 - (1..n).map(|k| 1.0 - k as f64 / m).product::<f64>()
}

/// Collision probability for `n` bosons uniformly spread over the `m`-mode
/// symmetric space: `1 − ∏_{k<n}(1 − k/m)/(1 + k/m) = 1 − C(m,n)/C(m+n−1,n)`.
pub fn quantum_collision_prob(n: usize, m: usize) -> f64 {
    if n > m {
        return 1.0;
    }
    let m = m as f64;
    1.0 - (1..n)
        .map(|k| {
            let x = k as f64 / m;
            (1.0 - x) / (1.0 + x)
        })
        .product::<f64>()
}

/// Quantum over classical probability of all photons leaving through one
/// mode, `n!/∏tₖ!`, independent of the interferometer.
pub fn full_bunching_ratio(t: &FockState) -> f64 {
    factorial(t.photons()) / t.factorial_product()
}

/// Full-bunching ratio for single-photon inputs when only a fraction `α²`
/// of events are fully indistinguishable and the rest behave as if one
/// photon were distinguishable: `α²·n! + (1−α²)·(n−1)!`.
pub fn partial_full_bunching_ratio(alpha: f64, n: usize) -> f64 {
    let w = alpha * alpha;
    w * factorial(n) + (1.0 - w) * factorial(n.saturating_sub(1))
}

/// Two-photon visibility `(P_c − P_q)/P_c` for photons entering modes
/// `inputs` and leaving through `outputs` (0-based).
pub fn visibility(u: &CMatrix, inputs: (usize, usize), outputs: (usize, usize)) -> Result<f64> {
    let m = u.nrows();
    if inputs.0 == inputs.1 || outputs.0 == outputs.1 {
        return Err(Error::InvalidInput("visibility needs distinct input and output modes".into()));
    }
    let t = FockState::from_modes(m, &[inputs.0, inputs.1])?;
    let s = FockState::from_modes(m, &[outputs.0, outputs.1])?;
    let pc = classical_prob(u, &t, &s)?;
    if pc < 1e-14 {
        return Err(Error::Singular(format!(
            "classical coincidence probability {pc:e} leaves the visibility undefined"
        )));
    }
    let pq = quantum_prob(u, &t, &s)?;
    Ok((pc - pq) / pc)
}
