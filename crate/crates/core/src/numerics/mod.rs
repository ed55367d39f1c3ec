//! Complex linear-algebra kernel shared by the rest of the crate.

mod fidelity;
mod json;
mod permanent;
mod random;

pub use fidelity::{gate_fidelity, max_gate_fidelity, polar_unitary, total_variation_distance};
pub use json::MatrixJson;
pub use permanent::{
    permanent, permanent_naive, permanent_real, permanent_with_cap, ryser, NAIVE_CAP, PERMANENT_CAP,
};
pub use random::{haar_unitary, RandomSource};

use crate::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

/// Tolerance under which a matrix is treated as unitary.
pub const UNITARY_TOL: f64 = 1e-10;

pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `e^{iφ}`.
pub fn cis(phi: f64) -> C64 {
    C64::from_polar(1.0, phi)
}

pub fn determinant(m: &CMatrix) -> Result<C64> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "determinant of a {}x{} matrix",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.nrows() == 0 {
        return Ok(C64::new(1.0, 0.0));
    }
    Ok(m.clone().lu().determinant())
}

/// Max-norm of `U†U − I`.
pub fn unitarity_error(u: &CMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    let g = u.adjoint() * u;
    let mut worst = 0.0f64;
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g[(i, j)] - target).norm());
        }
    }
    worst
}

pub fn is_unitary(u: &CMatrix, tol: f64) -> bool {
    unitarity_error(u) <= tol
}

/// Largest elementwise modulus of `a − b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Elementwise squared modulus.
pub fn abs_squared(u: &CMatrix) -> DMatrix<f64> {
    u.map(|z| z.norm_sqr())
}

/// Formats `x` with `digits` significant digits in scientific notation,
/// which parses back losslessly at that precision.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    format!("{:.*e}", digits.max(1) - 1, x)
}
