use super::{Interferometer, OpticalElement};
use crate::numerics::{unitarity_error, CMatrix, C64};
use crate::{Error, Result};
use std::f64::consts::FRAC_PI_2;

const INPUT_TOL: f64 = 1e-8;

/// Triangular decomposition into `m(m−1)/2` beam splitters, each preceded by
/// two phase shifters, and a trailing phase layer on every mode.
///
/// Elimination runs from the last output row upwards. Row `p` is cleared
/// left of the diagonal by mixing each column `j < p` into pivot column `p`,
/// nearest column first. The composed chip reproduces `U` exactly.
pub fn reck_decompose(u: &CMatrix) -> Result<Interferometer> {
    let err = unitarity_error(u);
    if !(err <= INPUT_TOL) {
        return Err(Error::InvalidInput(format!("matrix is not unitary (deviation {err:e})")));
    }
    let m = u.nrows();
    let mut w = u.clone();
    // (j, p, 2x2 block of G†) in the order the blocks act on the input
    let mut blocks: Vec<(usize, usize, [[C64; 2]; 2])> = Vec::with_capacity(m * (m - 1) / 2);
    for p in (1..m).rev() {
        for j in (0..p).rev() {
            let (a, b) = (w[(p, j)], w[(p, p)]);
            let n = a.norm().hypot(b.norm());
            let (ga, gb) = if n > 0.0 { (a / n, b / n) } else { (C64::new(0.0, 0.0), C64::new(1.0, 0.0)) };
            // G on columns (j,p): [[gb, conj(ga)], [-ga, conj(gb)]]
            for r in 0..m {
                let (x, y) = (w[(r, j)], w[(r, p)]);
                w[(r, j)] = x * gb - y * ga;
                w[(r, p)] = x * ga.conj() + y * gb.conj();
            }
            blocks.push((j, p, [[gb.conj(), -ga.conj()], [ga, gb]]));
        }
    }

    let mut pending = vec![C64::new(1.0, 0.0); m];
    let mut elements = Vec::with_capacity(3 * blocks.len() + m);
    for (j, p, k) in blocks {
        // conjugate by the phases accumulated so far: P† K P
        let kp = [
            [k[0][0], k[0][1] * pending[p] / pending[j]],
            [k[1][0] * pending[j] / pending[p], k[1][1]],
        ];
        let (alpha, beta, theta, out_j, out_p) = split_two_mode(kp);
        elements.push(OpticalElement::phase_shifter(j + 1, alpha));
        elements.push(OpticalElement::phase_shifter(p + 1, beta));
        elements.push(OpticalElement::beam_splitter(j + 1, p + 1, theta));
        pending[j] *= C64::from_polar(1.0, out_j);
        pending[p] *= C64::from_polar(1.0, out_p);
    }
    for k in 0..m {
        let phase = (w[(k, k)] * pending[k]).arg();
        elements.push(OpticalElement::phase_shifter(k + 1, phase));
    }
    Interferometer::new(m, elements)
}

// K = diag(e^{iγ}, e^{iδ})·BS(θ)·diag(e^{iα}, e^{iβ}) with γ = 0.
fn split_two_mode(k: [[C64; 2]; 2]) -> (f64, f64, f64, f64, f64) {
    let theta = k[0][1].norm().atan2(k[0][0].norm());
    let (c, s) = (theta.cos(), theta.sin());
    const EPS: f64 = 1e-13;
    if s <= EPS {
        (k[0][0].arg(), k[1][1].arg(), 0.0, 0.0, 0.0)
    } else if c <= EPS {
        (k[1][0].arg() - FRAC_PI_2, k[0][1].arg() - FRAC_PI_2, theta, 0.0, 0.0)
    } else {
        let alpha = k[0][0].arg();
        let beta = k[0][1].arg() - FRAC_PI_2;
        let delta = k[1][0].arg() - FRAC_PI_2 - alpha;
        (alpha, beta, theta, 0.0, delta)
    }
}
