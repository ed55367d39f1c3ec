//! Matchgates and free fermions: parity-preserving gate algebra, nonlocal
//! invariants, Jordan-Wigner rotations, efficient `⟨Z_k⟩` on paths and
//! cycles, normal forms and a dense state-vector oracle.
//!
//! Qubit 0 is the most significant bit of a computational basis index and
//! the first tensor factor of every two-qubit gate.

mod circuit;
mod gate;
pub mod identities;
mod normal_form;
mod pauli;
mod rotation;
mod simulate;

pub use circuit::{classify_graph, CircuitJson, GateJson, GraphClass, MatchgateCircuit, PlacedGate, Topology, TopologyJson};
pub use gate::{
    entangling_power, pauli_i, pauli_x, pauli_y, pauli_z, rx, rz, Matrix2c, Matrix4c, TwoQubitGate, MATCHGATE_TOL,
};
pub use identities::{verify_all, verify_identity, IDENTITY_NAMES};
pub use normal_form::normal_form;
pub use pauli::{Pauli, PauliString};
pub use rotation::{circuit_rotation, gate_block, gate_rotation, orthogonality_error, JWRotation, Matrix4r};
pub use simulate::{
    brute_force, brute_force_state, expected_z, simulate_z, Engine, ProductState, StateVector, BRUTE_FORCE_MAX_QUBITS,
};

use crate::numerics::{haar_unitary, RandomSource};

/// Random matchgate: Haar blocks with `B` rephased so `det B = det A`.
pub fn random_matchgate(rng: &mut RandomSource) -> TwoQubitGate {
    let (a, b) = random_blocks(rng);
    let ratio = (a.determinant() / b.determinant()).sqrt();
    TwoQubitGate { a, b: b * ratio }
}

/// Random parity-preserving gate with independent Haar blocks.
pub fn random_parity_preserving(rng: &mut RandomSource) -> TwoQubitGate {
    let (a, b) = random_blocks(rng);
    TwoQubitGate { a, b }
}

fn random_blocks(rng: &mut RandomSource) -> (Matrix2c, Matrix2c) {
    let to_fixed = |m: crate::CMatrix| Matrix2c::from_fn(|i, j| m[(i, j)]);
    (to_fixed(haar_unitary(2, rng)), to_fixed(haar_unitary(2, rng)))
}

/// Random circuit of `len` matchgates on random edges of a path or cycle.
pub fn random_circuit(n: usize, topology: Topology, len: usize, rng: &mut RandomSource) -> MatchgateCircuit {
    let edges = topology.edges(n);
    assert!(!edges.is_empty(), "random circuits need at least one edge");
    let mut circ = MatchgateCircuit::new(n, topology);
    for _ in 0..len {
        let (i, j) = edges[(rng.uniform() * edges.len() as f64) as usize % edges.len()];
        let (i, j) = if rng.uniform() < 0.5 { (i, j) } else { (j, i) };
        circ.push(random_matchgate(rng), i, j).expect("edge of the topology");
    }
    circ
}
