use super::ExperimentalDataset;
use crate::numerics::CMatrix;
use crate::{Error, Result};

/// Visibilities with a classical coincidence probability below this are
/// treated as undefined and modelled as zero.
pub const MIN_CLASSICAL_PROB: f64 = 1e-14;

/// Model visibility `(P_c − P_q)/P_c` of `U` for inputs `(k, h)` and
/// outputs `(j, g)`, 0-based.
pub fn model_visibility(u: &CMatrix, k: usize, h: usize, j: usize, g: usize) -> f64 {
    let a = u[(j, k)] * u[(g, h)];
    let b = u[(j, h)] * u[(g, k)];
    let pc = a.norm_sqr() + b.norm_sqr();
    if pc < MIN_CLASSICAL_PROB {
        return 0.0;
    }
    (pc - (a + b).norm_sqr()) / pc
}

/// Exact data generated by `U`, carrying the error bars of `errors`.
pub fn predicted_dataset(u: &CMatrix, errors: &ExperimentalDataset) -> ExperimentalDataset {
    let m = u.nrows();
    let mut out = ExperimentalDataset::zeros(m);
    out.single = u.map(|z| z.norm_sqr());
    out.single_err = errors.single_err.clone();
    for (k, h, j, g) in out.pair_indices() {
        out.set_visibility(k, h, j, g, model_visibility(u, k, h, j, g), errors.visibility_err(k, h, j, g));
    }
    out
}

/// χ² of a model against a dataset, with the number of points used and
/// the number skipped for a zero error bar.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChiSquare {
    pub value: f64,
    pub points: usize,
    pub excluded: usize,
}

fn check_model(data: &ExperimentalDataset, u: &CMatrix) -> Result<()> {
    if u.shape() != (data.m, data.m) {
        return Err(Error::Dimension(format!("{:?} model for an {}-mode dataset", u.shape(), data.m)));
    }
    Ok(())
}

/// `Σ ((model − data)/σ)²` over all single-photon probabilities and all
/// visibilities of unordered input and output pairs.
pub fn chi_square_report(data: &ExperimentalDataset, u: &CMatrix) -> Result<ChiSquare> {
    check_model(data, u)?;
    let mut acc = ChiSquare { value: 0.0, points: 0, excluded: 0 };
    let mut add = |model: f64, value: f64, sigma: f64| {
        if sigma == 0.0 {
            acc.excluded += 1;
        } else {
            acc.value += ((model - value) / sigma).powi(2);
            acc.points += 1;
        }
    };
    for j in 0..data.m {
        for k in 0..data.m {
            add(u[(j, k)].norm_sqr(), data.single[(j, k)], data.single_err[(j, k)]);
        }
    }
    for (k, h, j, g) in data.pair_indices() {
        add(model_visibility(u, k, h, j, g), data.visibility(k, h, j, g), data.visibility_err(k, h, j, g));
    }
    Ok(acc)
}

pub fn chi_square(data: &ExperimentalDataset, u: &CMatrix) -> Result<f64> {
    Ok(chi_square_report(data, u)?.value)
}

/// Total variation distances between data and model, averaged over inputs:
/// single photons over every input mode, photon pairs over every unordered
/// input pair. Measured pair probabilities are recovered from visibilities
/// as `(1 − V)·(R_{jk}R_{gh} + R_{jh}R_{gk})`.
pub fn dataset_tvds(data: &ExperimentalDataset, u: &CMatrix) -> Result<(f64, f64)> {
    check_model(data, u)?;
    let m = data.m;
    let r = &data.single;
    let mut single = 0.0;
    for j in 0..m {
        for k in 0..m {
            single += (r[(j, k)] - u[(j, k)].norm_sqr()).abs();
        }
    }
    let single = 0.5 * single / m as f64;

    let mut two = 0.0;
    for k in 0..m {
        for h in k + 1..m {
            for j in 0..m {
                for g in j + 1..m {
                    let classical = r[(j, k)] * r[(g, h)] + r[(j, h)] * r[(g, k)];
                    let measured = (1.0 - data.visibility(k, h, j, g)) * classical;
                    let model = (u[(j, k)] * u[(g, h)] + u[(j, h)] * u[(g, k)]).norm_sqr();
                    two += 0.5 * (measured - model).abs();
                }
            }
        }
    }
    let pairs = (m * (m - 1) / 2) as f64;
    Ok((single, two / pairs))
}
