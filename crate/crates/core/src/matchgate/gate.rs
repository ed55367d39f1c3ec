use crate::numerics::{cis, C64};
use crate::{Error, Result};
use nalgebra::{Matrix2, Matrix4};
use std::f64::consts::{FRAC_PI_2, PI};

pub type Matrix2c = Matrix2<C64>;
pub type Matrix4c = Matrix4<C64>;

/// Tolerance of the determinant condition defining matchgates.
pub const MATCHGATE_TOL: f64 = 1e-9;
const UNITARY_TOL: f64 = 1e-10;

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn im(x: f64) -> C64 {
    C64::new(0.0, x)
}

pub fn pauli_i() -> Matrix2c {
    Matrix2c::identity()
}

pub fn pauli_x() -> Matrix2c {
    Matrix2c::new(re(0.0), re(1.0), re(1.0), re(0.0))
}

pub fn pauli_y() -> Matrix2c {
    Matrix2c::new(re(0.0), im(-1.0), im(1.0), re(0.0))
}

pub fn pauli_z() -> Matrix2c {
    Matrix2c::new(re(1.0), re(0.0), re(0.0), re(-1.0))
}

/// `[[cos t, i sin t], [i sin t, cos t]]`.
pub fn rx(t: f64) -> Matrix2c {
    Matrix2c::new(re(t.cos()), im(t.sin()), im(t.sin()), re(t.cos()))
}

/// `diag(e^{it}, e^{-it})`.
pub fn rz(t: f64) -> Matrix2c {
    Matrix2c::new(cis(t), re(0.0), re(0.0), cis(-t))
}

fn is_unitary2(m: &Matrix2c) -> bool {
    let d = m.adjoint() * m - Matrix2c::identity();
    d.iter().all(|z| z.norm() <= UNITARY_TOL)
}

/// Parity-preserving two-qubit gate: `a` acts on `|00⟩,|11⟩` and `b` on
/// `|01⟩,|10⟩`, with the first qubit most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoQubitGate {
    pub a: Matrix2c,
    pub b: Matrix2c,
}

impl TwoQubitGate {
    pub fn new(a: Matrix2c, b: Matrix2c) -> Result<Self> {
        if !is_unitary2(&a) || !is_unitary2(&b) {
            return Err(Error::InvalidInput("gate blocks must be unitary".into()));
        }
        Ok(Self { a, b })
    }

    /// Splits a 4×4 matrix into its parity blocks.
    pub fn from_matrix(m: &Matrix4c) -> Result<Self> {
        let tol = UNITARY_TOL;
        for (r, c) in [(0, 1), (0, 2), (1, 0), (2, 0), (1, 3), (2, 3), (3, 1), (3, 2)] {
            if m[(r, c)].norm() > tol {
                return Err(Error::InvalidInput("matrix mixes even and odd parity".into()));
            }
        }
        let a = Matrix2c::new(m[(0, 0)], m[(0, 3)], m[(3, 0)], m[(3, 3)]);
        let b = Matrix2c::new(m[(1, 1)], m[(1, 2)], m[(2, 1)], m[(2, 2)]);
        Self::new(a, b)
    }

    pub fn identity() -> Self {
        Self { a: pauli_i(), b: pauli_i() }
    }

    /// `G(Z, X)`: swaps the qubits with a sign on `|11⟩`.
    pub fn fswap() -> Self {
        Self { a: pauli_z(), b: pauli_x() }
    }

    pub fn swap() -> Self {
        Self { a: pauli_i(), b: pauli_x() }
    }

    /// `G(I, iX)`.
    pub fn iswap() -> Self {
        Self { a: pauli_i(), b: pauli_x() * im(1.0) }
    }

    pub fn cz() -> Self {
        Self { a: pauli_z(), b: pauli_i() }
    }

    /// `e^{i c Z⊗Z}`.
    pub fn zz(c: f64) -> Self {
        Self { a: Matrix2c::identity() * cis(c), b: Matrix2c::identity() * cis(-c) }
    }

    pub fn to_matrix(&self) -> Matrix4c {
        let (a, b) = (&self.a, &self.b);
        let z = re(0.0);
        Matrix4c::new(
            a[(0, 0)], z, z, a[(0, 1)],
            z, b[(0, 0)], b[(0, 1)], z,
            z, b[(1, 0)], b[(1, 1)], z,
            a[(1, 0)], z, z, a[(1, 1)],
        )
    }

    pub fn adjoint(&self) -> Self {
        Self { a: self.a.adjoint(), b: self.b.adjoint() }
    }

    /// `self · other`, i.e. `other` acts first.
    pub fn compose(&self, other: &Self) -> Self {
        Self { a: self.a * other.a, b: self.b * other.b }
    }

    pub fn scale(&self, phase: C64) -> Self {
        Self { a: self.a * phase, b: self.b * phase }
    }

    /// The same operation with the tensor factors exchanged.
    pub fn flipped(&self) -> Self {
        let x = pauli_x();
        Self { a: self.a, b: x * self.b * x }
    }

    pub fn is_matchgate(&self) -> bool {
        let (da, db) = (self.a.determinant(), self.b.determinant());
        (da * db.conj() - (da * db).norm()).norm() <= MATCHGATE_TOL
    }

    /// Copy multiplied by the global phase that gives `det A · det B = 1`
    /// and `arg det A ∈ (−π/2, π/2]`.
    pub fn gauge_fixed(&self) -> Self {
        let da = self.a.determinant();
        let db = self.b.determinant();
        let gamma = -(da * db).arg() / 4.0;
        let base = da.arg() + 2.0 * gamma;
        // Shifting gamma by π/2 moves arg det A by π.
        let mut best = gamma;
        for k in 0..2 {
            let g = gamma + k as f64 * FRAC_PI_2;
            let arg = wrap_pi(base + k as f64 * PI);
            if arg > -FRAC_PI_2 && arg <= FRAC_PI_2 {
                best = g;
                break;
            }
        }
        self.scale(cis(best) / (da * db).norm().powf(0.25))
    }

    /// Nonlocal parameters `(a, b, c)` of the parity-preserving gate.
    pub fn nonlocal_parameters(&self) -> (f64, f64, f64) {
        let g = self.gauge_fixed();
        let theta = g.a[(0, 1)].norm().atan2(g.a[(0, 0)].norm());
        let phi = g.b[(0, 1)].norm().atan2(g.b[(0, 0)].norm());
        let c = g.a.determinant().arg() / 2.0;
        ((phi + theta) / 2.0, (phi - theta) / 2.0, c)
    }

    pub fn entangling_power(&self) -> f64 {
        let (a, b, c) = self.nonlocal_parameters();
        entangling_power(a, b, c)
    }

    /// Splits the gate as `residual · e^{icZ⊗Z}` with a matchgate residual.
    /// The residual carries the gauge-fixed global phase; matchgates are
    /// returned unchanged with `c = 0`.
    pub fn extract_entangler(&self) -> (f64, TwoQubitGate) {
        if self.is_matchgate() {
            return (0.0, self.clone());
        }
        let g = self.gauge_fixed();
        let (_, _, c) = g.nonlocal_parameters();
        (c, g.compose(&Self::zz(-c)))
    }
}

fn wrap_pi(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    if y <= -PI {
        y + 2.0 * PI
    } else {
        y
    }
}

/// Rescaled entangling power of a gate with nonlocal parameters `(a, b, c)`.
pub fn entangling_power(a: f64, b: f64, c: f64) -> f64 {
    let (ca, cb, cc) = ((2.0 * a).cos(), (2.0 * b).cos(), (2.0 * c).cos());
    let (sa, sb, sc) = ((2.0 * a).sin(), (2.0 * b).sin(), (2.0 * c).sin());
    1.0 - (ca * cb * cc).powi(2) - (sa * sb * sc).powi(2)
}
