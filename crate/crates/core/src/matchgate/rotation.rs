use super::circuit::{MatchgateCircuit, Topology};
use super::gate::{pauli_i, pauli_x, pauli_y, pauli_z, Matrix4c, TwoQubitGate};
use crate::{Error, Result};
use nalgebra::{DMatrix, Matrix4};

pub type Matrix4r = Matrix4<f64>;

/// Heisenberg-picture action `U† c_i U = Σ_j R_ij c_j` of a circuit on the
/// Jordan-Wigner operators.
///
/// For cycles `r` is valid on even-parity states and `r_odd` on odd ones;
/// they differ only through gates on the closing edge.
#[derive(Clone, Debug, PartialEq)]
pub struct JWRotation {
    pub r: DMatrix<f64>,
    pub r_odd: Option<DMatrix<f64>>,
}

impl JWRotation {
    pub fn identity(n: usize) -> Self {
        Self { r: DMatrix::identity(2 * n, 2 * n), r_odd: None }
    }

    /// Rotation for the parity sector `+1` (even) or `-1` (odd).
    pub fn sector(&self, parity: i32) -> &DMatrix<f64> {
        match (&self.r_odd, parity < 0) {
            (Some(r), true) => r,
            _ => &self.r,
        }
    }
}

fn kron(a: &nalgebra::Matrix2<crate::C64>, b: &nalgebra::Matrix2<crate::C64>) -> Matrix4c {
    Matrix4c::from_fn(|r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
}

/// Jordan-Wigner operators of two qubits: `X⊗I, Y⊗I, Z⊗X, Z⊗Y`.
fn two_qubit_majoranas() -> [Matrix4c; 4] {
    [kron(&pauli_x(), &pauli_i()), kron(&pauli_y(), &pauli_i()), kron(&pauli_z(), &pauli_x()), kron(&pauli_z(), &pauli_y())]
}

/// 4×4 rotation `r_ij = ¼ Tr(d_j G† d_i G)` of a matchgate whose first
/// qubit precedes the second on the path.
pub fn gate_block(g: &TwoQubitGate) -> Result<Matrix4r> {
    if !g.is_matchgate() {
        return Err(Error::InvalidInput("gate is not a matchgate; no free-fermion rotation exists".into()));
    }
    let u = g.to_matrix();
    let ud = u.adjoint();
    let d = two_qubit_majoranas();
    Ok(Matrix4r::from_fn(|i, j| (d[j] * ud * d[i] * u).trace().re / 4.0))
}

/// Rotation of a matchgate on qubits `(k, k+1)` of an `n`-qubit path.
pub fn gate_rotation(g: &TwoQubitGate, k: usize, n: usize) -> Result<JWRotation> {
    if k + 1 >= n {
        return Err(Error::InvalidInput(format!("no qubit pair ({k}, {}) on {n} qubits", k + 1)));
    }
    let mut rot = JWRotation::identity(n);
    apply_block(&mut rot.r, [2 * k, 2 * k + 1, 2 * k + 2, 2 * k + 3], &gate_block(g)?);
    Ok(rot)
}

/// Block of a gate on the closing edge as seen from parity sector `p`,
/// for a gate whose first tensor factor is qubit 0.
fn boundary_block(g: &TwoQubitGate, p: f64) -> Result<Matrix4r> {
    #[rustfmt::skip]
    let o = Matrix4r::new(
        0.0, 1.0, 0.0, 0.0,
        -1.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, -p,
        0.0, 0.0, p, 0.0,
    );
    Ok(o * gate_block(g)? * o.transpose())
}

/// Left-multiplies `r` by `block` embedded on coordinates `idx`.
fn apply_block(r: &mut DMatrix<f64>, idx: [usize; 4], block: &Matrix4r) {
    let cols = r.ncols();
    for c in 0..cols {
        let old = [r[(idx[0], c)], r[(idx[1], c)], r[(idx[2], c)], r[(idx[3], c)]];
        for (a, &row) in idx.iter().enumerate() {
            r[(row, c)] = (0..4).map(|b| block[(a, b)] * old[b]).sum();
        }
    }
}

/// Product of the gate rotations of a path or cycle circuit.
pub fn circuit_rotation(circ: &MatchgateCircuit) -> Result<JWRotation> {
    circ.validate()?;
    let n = circ.n;
    let cycle = match circ.topology {
        Topology::Path => false,
        Topology::Cycle => n > 2,
        Topology::Graph(_) => {
            return Err(Error::Unsupported("free-fermion rotations need a path or cycle".into()));
        }
    };
    let mut rot = JWRotation::identity(n);
    if cycle {
        rot.r_odd = Some(rot.r.clone());
    }
    for placed in &circ.gates {
        let (i, j) = placed.qubits;
        let (lo, hi) = (i.min(j), i.max(j));
        if hi - lo == 1 {
            let g = if i < j { placed.gate.clone() } else { placed.gate.flipped() };
            let block = gate_block(&g)?;
            let idx = [2 * lo, 2 * lo + 1, 2 * lo + 2, 2 * lo + 3];
            apply_block(&mut rot.r, idx, &block);
            if let Some(r_odd) = rot.r_odd.as_mut() {
                apply_block(r_odd, idx, &block);
            }
        } else {
            let g = if i == 0 { placed.gate.clone() } else { placed.gate.flipped() };
            let idx = [0, 1, 2 * n - 2, 2 * n - 1];
            apply_block(&mut rot.r, idx, &boundary_block(&g, 1.0)?);
            let r_odd = rot.r_odd.as_mut().expect("cycle keeps both sectors");
            apply_block(r_odd, idx, &boundary_block(&g, -1.0)?);
        }
    }
    Ok(rot)
}

/// Largest deviation of `r` from orthogonality, `max |RᵀR − I|`.
pub fn orthogonality_error(r: &DMatrix<f64>) -> f64 {
    let n = r.nrows();
    (r.transpose() * r - DMatrix::<f64>::identity(n, n)).amax()
}
