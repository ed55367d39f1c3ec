//! Named gate identities behind the universality constructions, checked by
//! dense simulation.
//!
//! Products are written as in operator notation (the right-most gate acts
//! first) and qubit labels are 0-based.

use super::gate::{pauli_x, pauli_z, rx, Matrix2c, Matrix4c, TwoQubitGate};
use super::simulate::StateVector;
use crate::numerics::{RandomSource, C64};
use crate::{Error, Result};

pub const IDENTITY_NAMES: [&str; 8] =
    ["fswaponXX", "CZL", "logicswap", "0swap", "switch", "logicswap2", "0iswap", "2qubitg"];

/// Seed for the random angles of the `2qubitg` check.
const ANGLE_SEED: u64 = 0x5eed;

/// Maximum deviation between the two sides of the named identity.
pub fn verify_identity(name: &str) -> Result<f64> {
    match name {
        "fswaponXX" => Ok(fswap_on_xx()),
        "CZL" => Ok(cz_from_fswap()),
        "logicswap" => Ok(logic_swap()),
        "0swap" => Ok(zero_swap()),
        "switch" => Ok(switch()),
        "logicswap2" => Ok(logic_swap_odd()),
        "0iswap" => Ok(zero_iswap()),
        "2qubitg" => Ok(xz_sequence(&random_angles(20))),
        _ => Err(Error::InvalidInput(format!(
            "unknown identity {name:?}; known: {}",
            IDENTITY_NAMES.join(", ")
        ))),
    }
}

/// Every registered identity with its deviation.
pub fn verify_all() -> Vec<(&'static str, f64)> {
    IDENTITY_NAMES.iter().map(|&n| (n, verify_identity(n).expect("registered identity"))).collect()
}

/// One step of a gate sequence: a two-qubit gate or a single-qubit operator.
enum Op {
    Two(Matrix4c, usize, usize),
    One(Matrix2c, usize),
}

fn two(g: &TwoQubitGate, i: usize, j: usize) -> Op {
    Op::Two(g.to_matrix(), i, j)
}

fn apply_one(state: &mut StateVector, m: &Matrix2c, q: usize) {
    let mask = 1 << (state.n - 1 - q);
    for s in 0..state.amps.len() {
        if s & mask != 0 {
            continue;
        }
        let (a, b) = (state.amps[s], state.amps[s | mask]);
        state.amps[s] = m[(0, 0)] * a + m[(0, 1)] * b;
        state.amps[s | mask] = m[(1, 0)] * a + m[(1, 1)] * b;
    }
}

/// Applies an operator product, right-most factor first.
fn run(product: &[Op], mut state: StateVector) -> StateVector {
    for op in product.iter().rev() {
        match op {
            Op::Two(g, i, j) => state.apply_two(g, *i, *j),
            Op::One(m, q) => apply_one(&mut state, m, *q),
        }
    }
    state
}

fn basis(bits: &[u8]) -> StateVector {
    let n = bits.len();
    let index = bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize);
    StateVector::basis(n, index).expect("small register")
}

fn distance(a: &StateVector, b: &StateVector) -> f64 {
    a.amps.iter().zip(&b.amps).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn scaled(mut s: StateVector, c: C64) -> StateVector {
    s.amps.iter_mut().for_each(|a| *a *= c);
    s
}

/// Largest deviation between the two operator products over all basis inputs.
fn operator_distance(n: usize, lhs: &[Op], rhs: &[Op]) -> f64 {
    (0..1usize << n)
        .map(|s| {
            let input = StateVector::basis(n, s).expect("small register");
            distance(&run(lhs, input.clone()), &run(rhs, input))
        })
        .fold(0.0, f64::max)
}

/// `fS_{12} (X_0 X_1) fS_{12} = X_0 Z_1 X_2`.
fn fswap_on_xx() -> f64 {
    let fs = TwoQubitGate::fswap();
    let lhs = [two(&fs, 1, 2), Op::One(pauli_x(), 0), Op::One(pauli_x(), 1), two(&fs, 1, 2)];
    let rhs = [Op::One(pauli_x(), 0), Op::One(pauli_z(), 1), Op::One(pauli_x(), 2)];
    operator_distance(3, &lhs, &rhs)
}

/// `CZ = f-SWAP · SWAP` as 4×4 matrices.
fn cz_from_fswap() -> f64 {
    let lhs = TwoQubitGate::fswap().to_matrix() * TwoQubitGate::swap().to_matrix();
    (lhs - TwoQubitGate::cz().to_matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `fS_{01} fS_{12} |Ψ⟩_L |φ⟩ = |φ⟩ |Ψ⟩_L` for even-encoded `|Ψ⟩_L`.
fn logic_swap() -> f64 {
    let fs = TwoQubitGate::fswap();
    let seq = [two(&fs, 0, 1), two(&fs, 1, 2)];
    let mut worst = 0.0f64;
    for x in 0..2u8 {
        for y in 0..2u8 {
            let out = run(&seq, basis(&[x, x, y]));
            worst = worst.max(distance(&out, &basis(&[y, x, x])));
        }
    }
    worst
}

/// `fS |0⟩|ψ⟩ = |ψ⟩|0⟩`.
fn zero_swap() -> f64 {
    let seq = [two(&TwoQubitGate::fswap(), 0, 1)];
    (0..2u8).map(|y| distance(&run(&seq, basis(&[0, y])), &basis(&[y, 0]))).fold(0.0, f64::max)
}

/// Logical CZ between even-encoded pairs `{2,3}` and `{4,5}` from eleven
/// f-SWAPs around a branching vertex.
///
/// Layout: ancillas `α = 0` and `β = 1` in `|0⟩` both attach to qubit 2,
/// which continues the path 2–3–4–5.
fn switch() -> f64 {
    let fs = TwoQubitGate::fswap();
    let (alpha, beta, q1, q2, q3, q4) = (0, 1, 2, 3, 4, 5);
    let seq = [
        two(&fs, q2, q3),
        two(&fs, q3, q4),
        two(&fs, q1, q2),
        two(&fs, beta, q1),
        two(&fs, q1, q2),
        two(&fs, alpha, q1),
        two(&fs, beta, q1),
        two(&fs, q1, q2),
        two(&fs, alpha, q1),
        two(&fs, q3, q4),
        two(&fs, q2, q3),
    ];
    let mut worst = 0.0f64;
    for x in 0..2u8 {
        for y in 0..2u8 {
            let input = basis(&[0, 0, x, x, y, y]);
            let sign = if x * y == 1 { -1.0 } else { 1.0 };
            let expected = scaled(input.clone(), C64::new(sign, 0.0));
            worst = worst.max(distance(&run(&seq, input), &expected));
        }
    }
    worst
}

/// `iS_{01} iS_{12} |Ψ⟩_L |φ⟩ = i |φ⟩ |Ψ⟩_L` for odd-encoded `|Ψ⟩_L`.
fn logic_swap_odd() -> f64 {
    let is = TwoQubitGate::iswap();
    let seq = [two(&is, 0, 1), two(&is, 1, 2)];
    let mut worst = 0.0f64;
    for x in 0..2u8 {
        for y in 0..2u8 {
            let out = run(&seq, basis(&[x, 1 - x, y]));
            let expected = scaled(basis(&[y, x, 1 - x]), C64::new(0.0, 1.0));
            worst = worst.max(distance(&out, &expected));
        }
    }
    worst
}

/// `iS |0⟩|ψ⟩ = (P|ψ⟩)|0⟩` with `P = diag(1, i)`.
fn zero_iswap() -> f64 {
    let seq = [two(&TwoQubitGate::iswap(), 0, 1)];
    (0..2u8)
        .map(|y| {
            let phase = if y == 1 { C64::new(0.0, 1.0) } else { C64::new(1.0, 0.0) };
            distance(&run(&seq, basis(&[0, y])), &scaled(basis(&[y, 0]), phase))
        })
        .fold(0.0, f64::max)
}

fn random_angles(count: usize) -> Vec<f64> {
    let mut rng = RandomSource::new(ANGLE_SEED);
    (0..count).map(|_| (2.0 * rng.uniform() - 1.0) * std::f64::consts::PI).collect()
}

/// `e^{i a X⊗Z}` on odd-encoded pairs `{0,1}` and `{2,3}` from XY
/// interactions and i-SWAPs, with ancilla 4 in `|0⟩`.
pub fn xz_sequence(angles: &[f64]) -> f64 {
    let is = TwoQubitGate::iswap();
    let isd = is.adjoint();
    let mut worst = 0.0f64;
    for &a in angles {
        let xy = TwoQubitGate { a: Matrix2c::identity(), b: rx(a) };
        let seq = [
            two(&is, 1, 4),
            two(&is, 1, 2),
            two(&is, 2, 3),
            two(&isd, 1, 4),
            two(&xy, 0, 1),
            two(&is, 1, 4),
            two(&isd, 2, 3),
            two(&isd, 1, 2),
            two(&isd, 1, 4),
        ];
        let encode = |x: u8, y: u8| basis(&[x, 1 - x, y, 1 - y, 0]);
        for x in 0..2u8 {
            for y in 0..2u8 {
                // e^{iaX⊗Z}|x,y⟩ = cos a |x,y⟩ + i sin a (−1)^y |1−x,y⟩
                let z = if y == 1 { -1.0 } else { 1.0 };
                let stay = scaled(encode(x, y), C64::new(a.cos(), 0.0));
                let flip = scaled(encode(1 - x, y), C64::new(0.0, z * a.sin()));
                let expected = StateVector {
                    n: 5,
                    amps: stay.amps.iter().zip(&flip.amps).map(|(p, q)| p + q).collect(),
                };
                worst = worst.max(distance(&run(&seq, encode(x, y)), &expected));
            }
        }
    }
    worst
}
