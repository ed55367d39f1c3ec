use super::circuit::{MatchgateCircuit, Topology};
use super::gate::{rx, rz, TwoQubitGate};
use super::rotation::circuit_rotation;
use crate::{Error, Result};

/// Entries below this are treated as already zero during Givens sweeps.
const GIVENS_TOL: f64 = 1e-15;

/// Re-expresses a path circuit as at most `n(2n−1)` generator gates
/// `e^{φ c_a c_{a+1}}` with the same rotation.
///
/// The rotation is reduced column by column with adjacent-plane Givens
/// rotations; each one becomes `e^{iφZ_k}` (even plane) or `e^{iφX_kX_{k+1}}`
/// (odd plane) on a neighbouring qubit pair.
pub fn normal_form(circ: &MatchgateCircuit) -> Result<MatchgateCircuit> {
    if circ.topology != Topology::Path {
        return Err(Error::Unsupported("normal form is defined for path circuits".into()));
    }
    let n = circ.n;
    let mut r = circuit_rotation(circ)?.r;
    let dim = 2 * n;
    let mut planes = Vec::new();
    for j in 0..dim.saturating_sub(1) {
        for i in (j + 1..dim).rev() {
            let (x, y) = (r[(i - 1, j)], r[(i, j)]);
            if y.abs() <= GIVENS_TOL {
                continue;
            }
            let h = x.hypot(y);
            let (c, s) = (x / h, y / h);
            for col in 0..dim {
                let (top, bottom) = (r[(i - 1, col)], r[(i, col)]);
                r[(i - 1, col)] = c * top + s * bottom;
                r[(i, col)] = -s * top + c * bottom;
            }
            planes.push((i - 1, c, s));
        }
    }

    let mut out = MatchgateCircuit::new(n, Topology::Path);
    for &(a, c, s) in planes.iter().rev() {
        // Needed block is [[c, −s], [s, c]]; e^{φ c_a c_b} gives [[cos 2φ, sin 2φ], [−sin 2φ, cos 2φ]].
        let phi = (-s).atan2(c) / 2.0;
        let k = a / 2;
        if a % 2 == 1 {
            out.push(TwoQubitGate { a: rx(phi), b: rx(phi) }, k, k + 1)?;
        } else if k + 1 < n {
            out.push(TwoQubitGate { a: rz(phi), b: rz(phi) }, k, k + 1)?;
        } else {
            out.push(TwoQubitGate { a: rz(phi), b: rz(-phi) }, k - 1, k)?;
        }
    }
    Ok(out)
}
