use super::metrics::{chi_square, dataset_tvds};
use super::ExperimentalDataset;
use crate::numerics::{cis, max_gate_fidelity, polar_unitary, CMatrix, MatrixJson};
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// How far `|V·y/2|` may exceed 1 before the data is rejected instead of
/// clamped.
pub const ARCCOS_SLACK: f64 = 1e-6;

/// Tunable behaviour of the reconstruction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReconstructionOptions {
    /// Arguments with `1 < |V·y/2| ≤ 1 + arccos_slack` are clamped; larger
    /// ones reject the reference choice. `f64::INFINITY` clamps everything.
    pub arccos_slack: f64,
}

impl Default for ReconstructionOptions {
    fn default() -> Self {
        Self { arccos_slack: ARCCOS_SLACK }
    }
}

/// A reconstructed interferometer with its agreement to the data.
#[derive(Clone, Debug, PartialEq)]
pub struct ReconstructionResult {
    pub u: CMatrix,
    pub chi2: f64,
    pub tvd_single: f64,
    pub tvd_two: f64,
    pub fidelity_vs_target: Option<f64>,
    /// Reference (output row, input column), 0-based; `None` for matrices
    /// not produced directly by a reconstruction.
    pub reference: Option<(usize, usize)>,
    /// Phase equations whose arccos argument was clamped into `[−1, 1]`.
    pub clamped: usize,
}

impl ReconstructionResult {
    /// Scores `u` against `data`.
    pub fn evaluate(data: &ExperimentalDataset, u: CMatrix) -> Result<Self> {
        let chi2 = chi_square(data, &u)?;
        let (tvd_single, tvd_two) = dataset_tvds(data, &u)?;
        Ok(Self { u, chi2, tvd_single, tvd_two, fidelity_vs_target: None, reference: None, clamped: 0 })
    }

    /// Fills `fidelity_vs_target` with the phase- and conjugation-maximized
    /// gate fidelity to `target`.
    pub fn with_target(mut self, target: &CMatrix) -> Result<Self> {
        self.fidelity_vs_target = Some(max_gate_fidelity(target, &self.u)?);
        Ok(self)
    }

    pub fn to_json(&self) -> ResultJson {
        ResultJson {
            u: MatrixJson::from_matrix(&self.u),
            chi2: self.chi2,
            tvd_single: self.tvd_single,
            tvd_two: self.tvd_two,
            fidelity_vs_target: self.fidelity_vs_target,
            reference: self.reference.map(|(r, c)| [r + 1, c + 1]),
            clamped: self.clamped,
        }
    }

    pub fn from_json(json: &ResultJson) -> Result<Self> {
        let reference = match json.reference {
            Some([r, c]) if r == 0 || c == 0 => return Err(Error::Parse("reference indices are 1-based".into())),
            Some([r, c]) => Some((r - 1, c - 1)),
            None => None,
        };
        Ok(Self {
            u: json.u.to_matrix()?,
            chi2: json.chi2,
            tvd_single: json.tvd_single,
            tvd_two: json.tvd_two,
            fidelity_vs_target: json.fidelity_vs_target,
            reference,
            clamped: json.clamped,
        })
    }
}

/// Serialized result; the reference is 1-based `[row, column]`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ResultJson {
    #[serde(rename = "U")]
    pub u: MatrixJson,
    pub chi2: f64,
    pub tvd_single: f64,
    pub tvd_two: f64,
    pub fidelity_vs_target: Option<f64>,
    pub reference: Option<[usize; 2]>,
    #[serde(default)]
    pub clamped: usize,
}

/// Wraps an angle into `[−π, π)`.
fn wrap(x: f64) -> f64 {
    (x + PI).rem_euclid(2.0 * PI) - PI
}

/// Core reconstruction on data whose reference row and column are index 0.
struct Solver<'a> {
    d: &'a ExperimentalDataset,
    slack: f64,
    clamped: usize,
}

impl Solver<'_> {
    /// `√(R_{jk}R_{gh} / (R_{jh}R_{gk}))`.
    fn x(&self, k: usize, h: usize, j: usize, g: usize) -> f64 {
        let r = &self.d.single;
        (r[(j, k)] * r[(g, h)] / (r[(j, h)] * r[(g, k)])).sqrt()
    }

    /// `|α_{jk} − α_{jh} − α_{gk} + α_{gh}|` from `−V·y/2 = cos(·)`.
    fn beta(&mut self, k: usize, h: usize, j: usize, g: usize) -> Result<f64> {
        let x = self.x(k, h, j, g);
        let arg = -self.d.visibility(k, h, j, g) * (x + 1.0 / x) / 2.0;
        if !arg.is_finite() || arg.abs() > 1.0 + self.slack {
            return Err(Error::InvalidInput(format!(
                "visibility at inputs ({k},{h}) outputs ({j},{g}) gives arccos argument {arg}"
            )));
        }
        if arg.abs() > 1.0 {
            self.clamped += 1;
        }
        Ok(arg.clamp(-1.0, 1.0).acos())
    }

    /// Sign of `α_{gh}` given its modulus and the other three phases.
    fn sign(&mut self, a: &DMatrix<f64>, a0: &DMatrix<f64>, k: usize, h: usize, j: usize, g: usize) -> Result<f64> {
        let beta = self.beta(k, h, j, g)?;
        let base = a[(j, k)] - a[(j, h)] - a[(g, k)];
        let minus = (beta - wrap(base - a0[(g, h)]).abs()).abs();
        let plus = (beta - wrap(base + a0[(g, h)]).abs()).abs();
        Ok(if plus <= minus { 1.0 } else { -1.0 })
    }

    fn solve(&mut self) -> Result<CMatrix> {
        let m = self.d.m;
        if self.d.single.iter().any(|&p| !(p > 0.0)) {
            return Err(Error::Singular("single-photon probabilities must be positive".into()));
        }
        let mut a0 = DMatrix::zeros(m, m);
        for g in 1..m {
            for h in 1..m {
                a0[(g, h)] = self.beta(0, h, 0, g)?;
            }
        }
        let mut a = DMatrix::zeros(m, m);
        if m > 1 {
            a[(1, 1)] = a0[(1, 1)];
        }
        for g in 2..m {
            a[(g, 1)] = self.sign(&a, &a0, 0, 1, 1, g)? * a0[(g, 1)];
        }
        for h in 2..m {
            a[(1, h)] = self.sign(&a, &a0, 1, h, 0, 1)? * a0[(1, h)];
        }
        for g in 2..m {
            for h in 2..m {
                a[(g, h)] = self.sign(&a, &a0, 1, h, 1, g)? * a0[(g, h)];
            }
        }

        // U_{gh} = M2_{gh}·τ_{0h}·τ_{g0}/τ_{00}; unitarity of the reference
        // column and row gives linear systems in the squared moduli.
        let m2 = CMatrix::from_fn(m, m, |i, j| cis(a[(i, j)]) * self.x(0, j, 0, i));
        let col_sq = real_least_squares(&m2.transpose())?;
        let row_sq = real_least_squares(&m2)?;
        if col_sq.iter().chain(row_sq.iter()).any(|&t| !(t >= 0.0)) {
            return Err(Error::Singular("negative squared modulus for the reference row or column".into()));
        }
        let col: Vec<f64> = col_sq.iter().map(|t| t.sqrt()).collect();
        let row: Vec<f64> = row_sq.iter().map(|t| t.sqrt()).collect();
        if row[0] == 0.0 {
            return Err(Error::Singular("zero reference corner element".into()));
        }
        Ok(CMatrix::from_fn(m, m, |g, h| {
            let tau = match (g, h) {
                (0, _) => row[h],
                (_, 0) => col[g],
                _ => self.x(0, h, 0, g) * row[h] * col[g] / row[0],
            };
            cis(a[(g, h)]) * tau
        }))
    }
}

/// Real `w` minimizing `‖A·w − e₀‖` for complex `A`.
fn real_least_squares(a: &CMatrix) -> Result<DVector<f64>> {
    let m = a.nrows();
    let stacked = DMatrix::from_fn(2 * m, a.ncols(), |i, j| if i < m { a[(i, j)].re } else { a[(i - m, j)].im });
    let mut rhs = DVector::zeros(2 * m);
    rhs[0] = 1.0;
    let w = stacked
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::Singular(format!("reference moduli system: {e}")))?;
    if w.iter().any(|t| !t.is_finite()) {
        return Err(Error::Singular("reference moduli system is degenerate".into()));
    }
    Ok(w)
}

fn shifted(m: usize, offset: usize) -> Vec<usize> {
    (0..m).map(|i| (i + offset) % m).collect()
}

/// Reconstructs the interferometer taking output `ref_row` and input
/// `ref_col` (0-based) as the real reference row and column; `data` is the
/// set whose labels are relabelled and `score` the set the result is graded
/// against.
fn reconstruct(
    data: &ExperimentalDataset,
    score: &ExperimentalDataset,
    ref_row: usize,
    ref_col: usize,
    options: &ReconstructionOptions,
) -> Result<ReconstructionResult> {
    data.validate()?;
    let m = data.m;
    if ref_row >= m || ref_col >= m {
        return Err(Error::InvalidInput(format!("reference ({ref_row},{ref_col}) outside {m} modes")));
    }
    let relabelled = data.relabel(&shifted(m, ref_col), &shifted(m, ref_row));
    let mut solver = Solver { d: &relabelled, slack: options.arccos_slack, clamped: 0 };
    let raw = solver.solve()?;
    let unshifted = CMatrix::from_fn(m, m, |r, c| raw[((r + m - ref_row) % m, (c + m - ref_col) % m)]);
    let u = polar_unitary(&unshifted)?;
    let mut out = ReconstructionResult::evaluate(score, u)?;
    out.reference = Some((ref_row, ref_col));
    out.clamped = solver.clamped;
    Ok(out)
}

/// Laing–O'Brien reconstruction: phases of the reference row and column
/// are fixed to zero and the phase at the next diagonal position to
/// `[0, π]`, which removes the external phase and conjugation freedom.
pub fn laing_obrien(data: &ExperimentalDataset, ref_row: usize, ref_col: usize) -> Result<ReconstructionResult> {
    laing_obrien_with(data, ref_row, ref_col, &ReconstructionOptions::default())
}

pub fn laing_obrien_with(
    data: &ExperimentalDataset,
    ref_row: usize,
    ref_col: usize,
    options: &ReconstructionOptions,
) -> Result<ReconstructionResult> {
    reconstruct(data, data, ref_row, ref_col, options)
}

/// A reference choice that failed, with the reason.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepFailure {
    pub reference: (usize, usize),
    pub reason: String,
}

/// All reference choices: successful candidates sorted by χ² (ties by
/// reference) and the failures.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepReport {
    pub candidates: Vec<ReconstructionResult>,
    pub failures: Vec<SweepFailure>,
}

impl SweepReport {
    pub fn best(&self) -> Option<&ReconstructionResult> {
        self.candidates.first()
    }

    /// Fills every candidate's fidelity to `target`.
    pub fn with_target(mut self, target: &CMatrix) -> Result<Self> {
        self.candidates = self.candidates.into_iter().map(|c| c.with_target(target)).collect::<Result<_>>()?;
        Ok(self)
    }
}

pub(crate) fn sweep_scored(
    data: &ExperimentalDataset,
    score: &ExperimentalDataset,
    options: &ReconstructionOptions,
) -> SweepReport {
    let m = data.m;
    let outcomes: Vec<_> = (0..m * m)
        .into_par_iter()
        .map(|i| ((i / m, i % m), reconstruct(data, score, i / m, i % m, options)))
        .collect();
    let mut candidates = Vec::new();
    let mut failures = Vec::new();
    for (reference, outcome) in outcomes {
        match outcome {
            Ok(r) => candidates.push(r),
            Err(e) => failures.push(SweepFailure { reference, reason: e.to_string() }),
        }
    }
    candidates.sort_by(|a, b| a.chi2.total_cmp(&b.chi2).then(a.reference.cmp(&b.reference)));
    SweepReport { candidates, failures }
}

/// Runs the reconstruction for all `m²` reference rows and columns.
pub fn permutation_sweep(data: &ExperimentalDataset) -> SweepReport {
    permutation_sweep_with(data, &ReconstructionOptions::default())
}

pub fn permutation_sweep_with(data: &ExperimentalDataset, options: &ReconstructionOptions) -> SweepReport {
    sweep_scored(data, data, options)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::C64;

    #[test]
    fn wrap_range() {
        assert_eq!(wrap(PI), -PI);
        assert!((wrap(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert_eq!(wrap(0.25), 0.25);
    }

    #[test]
    fn stacked_least_squares_recovers_real_solution() {
        let a = CMatrix::from_fn(3, 3, |i, j| C64::new((i + 2 * j) as f64 + if i == j { 5.0 } else { 0.0 }, 0.0));
        let w = real_least_squares(&a).unwrap();
        let r = &a * w.map(|t| C64::new(t, 0.0));
        assert!((r[0] - C64::new(1.0, 0.0)).norm() < 1e-12 && r[1].norm() < 1e-12 && r[2].norm() < 1e-12);
    }
}
