//! Linear-optical circuits: element lists, their unitaries, Reck
//! decomposition, random ensembles, their statistics and the published fixture chips.

mod ensemble;
mod fixtures;
mod reck;
mod statistics;

pub use ensemble::{chip_from_phase_table, layer_pairs, random_phases_chip};
pub use fixtures::{
    knill_cz_chip, load_fixture, parameters5, parameters7, parameters9, ReckRow, FIXTURE_NAMES,
    FIXTURE_UNITARITY_TOL, KNILL_PHI_DEG, KNILL_THETA_DEG,
};
pub use reck::reck_decompose;
pub use statistics::{ensemble_figures, paired_histograms, write_histograms_csv, ChipFigures, Ensemble, Histogram};

use crate::numerics::{cis, CMatrix, C64};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Two-mode or one-mode optical element. Mode indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum OpticalElement {
    /// `[[cosθ, i sinθ], [i sinθ, cosθ]]` on `modes`; transmissivity `t = cosθ`.
    #[serde(rename = "bs")]
    BeamSplitter { modes: [usize; 2], theta: f64 },
    /// `e^{iφ}` on `mode`.
    #[serde(rename = "ps")]
    PhaseShifter { mode: usize, phi: f64 },
}

impl OpticalElement {
    pub fn beam_splitter(i: usize, j: usize, theta: f64) -> Self {
        OpticalElement::BeamSplitter { modes: [i, j], theta }
    }

    pub fn phase_shifter(mode: usize, phi: f64) -> Self {
        OpticalElement::PhaseShifter { mode, phi }
    }

    /// Amplitude transmissivity of a beam splitter.
    pub fn transmissivity(&self) -> Option<f64> {
        match self {
            OpticalElement::BeamSplitter { theta, .. } => Some(theta.cos().abs()),
            OpticalElement::PhaseShifter { .. } => None,
        }
    }

    fn validate(&self, m: usize) -> Result<()> {
        let in_range = |k: usize| (1..=m).contains(&k);
        match *self {
            OpticalElement::BeamSplitter { modes: [i, j], theta } => {
                if !in_range(i) || !in_range(j) || i == j {
                    return Err(Error::InvalidInput(format!("beam splitter on modes ({i},{j}) with m={m}")));
                }
                if !theta.is_finite() {
                    return Err(Error::InvalidInput("non-finite beam-splitter angle".into()));
                }
            }
            OpticalElement::PhaseShifter { mode, phi } => {
                if !in_range(mode) {
                    return Err(Error::InvalidInput(format!("phase shifter on mode {mode} with m={m}")));
                }
                if !phi.is_finite() {
                    return Err(Error::InvalidInput("non-finite phase".into()));
                }
            }
        }
        Ok(())
    }

    /// Left-multiplies `u` by this element.
    fn apply_to(&self, u: &mut CMatrix) {
        match *self {
            OpticalElement::BeamSplitter { modes: [i, j], theta } => {
                let (i, j) = (i - 1, j - 1);
                let c = C64::new(theta.cos(), 0.0);
                let s = C64::new(0.0, theta.sin());
                for col in 0..u.ncols() {
                    let (a, b) = (u[(i, col)], u[(j, col)]);
                    u[(i, col)] = c * a + s * b;
                    u[(j, col)] = s * a + c * b;
                }
            }
            OpticalElement::PhaseShifter { mode, phi } => {
                let p = cis(phi);
                for col in 0..u.ncols() {
                    u[(mode - 1, col)] *= p;
                }
            }
        }
    }
}

/// Ordered element list on `m` modes; the first element acts first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interferometer {
    pub m: usize,
    pub elements: Vec<OpticalElement>,
}

impl Interferometer {
    pub fn new(m: usize, elements: Vec<OpticalElement>) -> Result<Self> {
        let chip = Self { m, elements };
        chip.validate()?;
        Ok(chip)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::InvalidInput("interferometer needs at least one mode".into()));
        }
        self.elements.iter().try_for_each(|e| e.validate(self.m))
    }

    pub fn beam_splitter_count(&self) -> usize {
        self.elements.iter().filter(|e| matches!(e, OpticalElement::BeamSplitter { .. })).count()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let chip: Self = serde_json::from_str(text)?;
        chip.validate()?;
        Ok(chip)
    }
}

/// Product of the element unitaries, last-applied element left-most.
pub fn compose_unitary(chip: &Interferometer) -> Result<CMatrix> {
    chip.validate()?;
    let mut u = CMatrix::identity(chip.m, chip.m);
    for e in &chip.elements {
        e.apply_to(&mut u);
    }
    Ok(u)
}
