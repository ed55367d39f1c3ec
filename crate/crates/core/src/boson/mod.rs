//! BosonSampling engine: Fock-space enumeration, permanent-based transition
//! probabilities, exact sampling, bunching laws and the depth-3 weak simulator.

mod bunching;
mod depth3;
mod distribution;
mod experiment;
mod postselect;

pub use bunching::{
    classical_collision_prob, full_bunching_ratio, partial_full_bunching_ratio, quantum_collision_prob,
    visibility,
};
pub use depth3::{depth3_unitary, depth3_weak_simulate, TwoModeGate};
pub use distribution::{
    bunching_fraction, grouped_distribution, output_distribution, sample, DistinguishabilityModel,
    OutputDistribution, Regime, Sampler,
};
pub use experiment::{simulate_experiment, ExperimentConfig};
pub use postselect::{postselected_map, PostSelection};

use crate::numerics::{determinant, ryser, CMatrix, C64, PERMANENT_CAP};
use crate::{Error, Result};
use std::fmt;
use std::str::FromStr;

/// Largest sample space [`enumerate_space`] will materialize.
pub const ENUMERATION_CAP: u128 = 100_000_000;

/// Photon counts per mode.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockState(Vec<usize>);

impl FockState {
    pub fn new(occupations: Vec<usize>) -> Self {
        Self(occupations)
    }

    /// One photon in each listed mode (0-based) of an `m`-mode register.
    pub fn from_modes(m: usize, modes: &[usize]) -> Result<Self> {
        let mut occ = vec![0; m];
        for &k in modes {
            if k >= m {
                return Err(Error::InvalidInput(format!("mode {k} outside 0..{m}")));
            }
            occ[k] += 1;
        }
        Ok(Self(occ))
    }

    pub fn occupations(&self) -> &[usize] {
        &self.0
    }

    pub fn modes(&self) -> usize {
        self.0.len()
    }

    pub fn photons(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_collision_free(&self) -> bool {
        self.0.iter().all(|&s| s <= 1)
    }

    /// Mode index repeated once per photon, ascending.
    pub fn mode_list(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &s)| std::iter::repeat_n(i, s))
            .collect()
    }

    /// `∏ sᵢ!`.
    pub fn factorial_product(&self) -> f64 {
        self.0.iter().map(|&s| factorial(s)).product()
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Accepts `1|0|2` or, when every mode holds at most nine photons, the
/// compact digit form `102`.
impl FromStr for FockState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty occupation string".into()));
        }
        let bad = || Error::Parse(format!("bad occupation string {s:?}"));
        let occ = if s.contains('|') {
            s.split('|').map(|p| p.trim().parse::<usize>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?
        } else {
            s.chars().map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad)).collect::<Result<Vec<_>>>()?
        };
        Ok(Self(occ))
    }
}

pub fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Exact binomial coefficient, `None` on overflow.
pub fn binomial(n: u128, k: u128) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        // acc·(n−k+i) is divisible by i at every step.
        acc = acc.checked_mul(n - k + i)? / i;
    }
    Some(acc)
}

/// Size of the `m`-mode, `n`-photon space without enumerating it:
/// `C(m+n−1, n)`, or `C(m, n)` for no-collision outcomes.
pub fn space_size(m: usize, n: usize, no_collision: bool) -> Option<u128> {
    if m == 0 {
        return Some(u128::from(n == 0));
    }
    if no_collision {
        binomial(m as u128, n as u128)
    } else {
        binomial((m + n - 1) as u128, n as u128)
    }
}

/// All `n`-photon states over `m` modes, ordered with the first mode's
/// occupation descending, then the second, and so on.
pub fn enumerate_space(m: usize, n: usize, no_collision: bool) -> Result<Vec<FockState>> {
    if m == 0 {
        return Err(Error::InvalidInput("need at least one mode".into()));
    }
    match space_size(m, n, no_collision) {
        Some(c) if c <= ENUMERATION_CAP => {}
        other => {
            let shown = other.map_or("overflow".to_string(), |c| c.to_string());
            return Err(Error::Capacity(format!(
                "space of {n} photons in {m} modes has {shown} states (cap {ENUMERATION_CAP})"
            )));
        }
    }
    let max_per_mode = if no_collision { 1 } else { n };
    let mut out = Vec::new();
    let mut occ = vec![0; m];
    fill(&mut occ, 0, n, max_per_mode, &mut out);
    Ok(out)
}

fn fill(occ: &mut [usize], k: usize, left: usize, cap: usize, out: &mut Vec<FockState>) {
    let m = occ.len();
    if k == m - 1 {
        if left <= cap {
            occ[k] = left;
            out.push(FockState(occ.to_vec()));
        }
        return;
    }
    for s in (0..=left.min(cap)).rev() {
        occ[k] = s;
        fill(occ, k + 1, left - s, cap, out);
    }
    occ[k] = 0;
}

fn check_transition(u: &CMatrix, t: &FockState, s: &FockState) -> Result<usize> {
    let m = u.nrows();
    if !u.is_square() || t.modes() != m || s.modes() != m {
        return Err(Error::Dimension(format!(
            "{}x{} matrix with states on {} and {} modes",
            u.nrows(),
            u.ncols(),
            t.modes(),
            s.modes()
        )));
    }
    let n = t.photons();
    if s.photons() != n {
        return Err(Error::InvalidInput(format!(
            "photon number mismatch: input {n}, output {}",
            s.photons()
        )));
    }
    if n > PERMANENT_CAP {
        return Err(Error::Capacity(format!("{n} photons exceed the permanent cap {PERMANENT_CAP}")));
    }
    Ok(n)
}

/// `U_{S,T}` row-major: `sⱼ` copies of row `j`, `tᵢ` copies of column `i`.
pub fn transition_submatrix(u: &CMatrix, t: &FockState, s: &FockState) -> Vec<C64> {
    let rows = s.mode_list();
    let cols = t.mode_list();
    let mut out = Vec::with_capacity(rows.len() * cols.len());
    for &r in &rows {
        for &c in &cols {
            out.push(u[(r, c)]);
        }
    }
    out
}

/// `⟨S|φ(U)|T⟩ = perm(U_{S,T}) / √(∏sᵢ! ∏tᵢ!)`.
pub fn quantum_amplitude(u: &CMatrix, t: &FockState, s: &FockState) -> Result<C64> {
    let n = check_transition(u, t, s)?;
    let p = ryser(&transition_submatrix(u, t, s), n);
    Ok(p / (s.factorial_product() * t.factorial_product()).sqrt())
}

pub fn quantum_prob(u: &CMatrix, t: &FockState, s: &FockState) -> Result<f64> {
    quantum_amplitude(u, t, s).map(|a| a.norm_sqr())
}

/// Distinguishable-photon probability `perm(|U_{S,T}|²) / ∏sᵢ!`.
pub fn classical_prob(u: &CMatrix, t: &FockState, s: &FockState) -> Result<f64> {
    let n = check_transition(u, t, s)?;
    let sq: Vec<f64> = transition_submatrix(u, t, s).iter().map(|z| z.norm_sqr()).collect();
    Ok(ryser(&sq, n) / s.factorial_product())
}

/// Fermionic probability `|det U_{S,T}|²`; zero for any multiply occupied mode.
pub fn fermion_prob(u: &CMatrix, t: &FockState, s: &FockState) -> Result<f64> {
    let n = check_transition(u, t, s)?;
    if !t.is_collision_free() || !s.is_collision_free() {
        return Ok(0.0);
    }
    let sub = CMatrix::from_row_slice(n, n, &transition_submatrix(u, t, s));
    Ok(determinant(&sub)?.norm_sqr())
}
