use super::{Interferometer, OpticalElement};
use crate::numerics::RandomSource;
use crate::{Error, Result};
use std::f64::consts::{FRAC_PI_4, PI};

/// 0-based mode pairs of beam-splitter layer `layer` (0-based): even layers
/// couple (0,1),(2,3),…, odd layers (1,2),(3,4),…
pub fn layer_pairs(m: usize, layer: usize) -> Vec<(usize, usize)> {
    let first = layer % 2;
    (first..m.saturating_sub(1)).step_by(2).map(|i| (i, i + 1)).collect()
}

fn push_layer(elements: &mut Vec<OpticalElement>, m: usize, layer: usize) {
    for (i, j) in layer_pairs(m, layer) {
        elements.push(OpticalElement::beam_splitter(i + 1, j + 1, FRAC_PI_4));
    }
}

/// `layers` layers of 50:50 beam splitters between neighbouring modes, each
/// layer preceded by independent phases drawn uniformly from `[0, π]` on every mode.
pub fn random_phases_chip(m: usize, layers: usize, rng: &mut RandomSource) -> Result<Interferometer> {
    if m < 2 || layers < 1 {
        return Err(Error::InvalidInput(format!("random-phases chip needs m >= 2 and L >= 1, got m={m}, L={layers}")));
    }
    let mut elements = Vec::with_capacity(layers * (m + m / 2));
    for layer in 0..layers {
        for k in 0..m {
            elements.push(OpticalElement::phase_shifter(k + 1, PI * rng.uniform()));
        }
        push_layer(&mut elements, m, layer);
    }
    Interferometer::new(m, elements)
}

/// Random-phases layout with prescribed phases, `phases[column][mode]`.
///
/// With `L − 1` columns the phases sit between consecutive beam-splitter
/// layers (the published tables); with `L` columns each column precedes
/// the matching layer, as in [`random_phases_chip`].
pub fn chip_from_phase_table(m: usize, layers: usize, phases: &[Vec<f64>]) -> Result<Interferometer> {
    if m < 2 || layers < 1 {
        return Err(Error::InvalidInput(format!("phase-table chip needs m >= 2 and L >= 1, got m={m}, L={layers}")));
    }
    if let Some(bad) = phases.iter().position(|col| col.len() != m) {
        return Err(Error::Dimension(format!("phase column {} has {} entries, expected {m}", bad + 1, phases[bad].len())));
    }
    let offset = if phases.len() + 1 == layers {
        1
    } else if phases.len() == layers {
        0
    } else {
        return Err(Error::Dimension(format!(
            "{} phase columns for {layers} layers (expected {} or {layers})",
            phases.len(),
            layers - 1
        )));
    };
    let mut elements = Vec::new();
    for layer in 0..layers {
        if layer >= offset {
            for (k, &phi) in phases[layer - offset].iter().enumerate() {
                elements.push(OpticalElement::phase_shifter(k + 1, phi));
            }
        }
        push_layer(&mut elements, m, layer);
    }
    Interferometer::new(m, elements)
}
