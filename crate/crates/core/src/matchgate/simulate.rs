use super::circuit::{MatchgateCircuit, Topology};
use super::gate::Matrix4c;
use super::pauli::PauliString;
use super::rotation::circuit_rotation;
use crate::numerics::{RandomSource, C64};
use crate::{Error, Result};
use nalgebra::DMatrix;

/// Largest register the dense simulator accepts.
pub const BRUTE_FORCE_MAX_QUBITS: usize = 14;

/// `|ψ_0⟩ ⊗ |ψ_1⟩ ⊗ …`, each factor normalized.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductState(Vec<[C64; 2]>);

impl ProductState {
    pub fn new(factors: Vec<[C64; 2]>) -> Result<Self> {
        let mut out = Vec::with_capacity(factors.len());
        for [a, b] in factors {
            let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
            if !norm.is_finite() || norm == 0.0 {
                return Err(Error::InvalidInput("single-qubit state has zero norm".into()));
            }
            out.push([a / norm, b / norm]);
        }
        Ok(Self(out))
    }

    /// Computational basis state with `bits[q]` on qubit `q`.
    pub fn from_bits(bits: &[u8]) -> Self {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        Self(bits.iter().map(|&b| if b == 0 { [one, zero] } else { [zero, one] }).collect())
    }

    /// Independent uniformly random qubit states.
    pub fn random(n: usize, rng: &mut RandomSource) -> Self {
        let factors = (0..n)
            .map(|_| [C64::new(rng.normal(), rng.normal()), C64::new(rng.normal(), rng.normal())])
            .collect();
        Self::new(factors).expect("Gaussian draws are nonzero")
    }

    pub fn factors(&self) -> &[[C64; 2]] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `⟨ψ|c_a c_b|ψ⟩` and `⟨ψ|c_a c_b Z_0⋯Z_{n−1}|ψ⟩` for all `a, b`.
fn quadratic_moments(input: &ProductState) -> Result<(DMatrix<C64>, DMatrix<C64>)> {
    let n = input.len();
    let m = 2 * n;
    let c: Vec<PauliString> = (0..m).map(|a| PauliString::majorana(n, a)).collect();
    let parity = PauliString::parity(n);
    let mut plain = DMatrix::zeros(m, m);
    let mut with_parity = DMatrix::zeros(m, m);
    for a in 0..m {
        for b in 0..m {
            let ab = &c[a] * &c[b];
            plain[(a, b)] = ab.expectation(input.factors())?;
            with_parity[(a, b)] = (&ab * &parity).expectation(input.factors())?;
        }
    }
    Ok((plain, with_parity))
}

/// `⟨Z_k⟩` after a path or cycle matchgate circuit acting on a product state.
pub fn expected_z(circ: &MatchgateCircuit, input: &ProductState, k: usize) -> Result<f64> {
    check_input(circ, input, k)?;
    if !circ.all_matchgates() {
        return Err(Error::InvalidInput("circuit contains non-matchgates".into()));
    }
    let rot = circuit_rotation(circ)?;
    let (plain, with_parity) = quadratic_moments(input)?;
    let minus_i = C64::new(0.0, -1.0);
    let contract = |r: &DMatrix<f64>, moments: &DMatrix<C64>| -> C64 {
        let m = r.nrows();
        let mut acc = C64::new(0.0, 0.0);
        for a in 0..m {
            let ra = r[(2 * k, a)];
            if ra == 0.0 {
                continue;
            }
            for b in 0..m {
                acc += moments[(a, b)] * (ra * r[(2 * k + 1, b)]);
            }
        }
        acc
    };
    let value = match &rot.r_odd {
        None => minus_i * contract(&rot.r, &plain),
        Some(r_odd) => {
            let even = (&plain + &with_parity) * C64::new(0.5, 0.0);
            let odd = (&plain - &with_parity) * C64::new(0.5, 0.0);
            minus_i * (contract(&rot.r, &even) + contract(r_odd, &odd))
        }
    };
    Ok(value.re)
}

fn check_input(circ: &MatchgateCircuit, input: &ProductState, k: usize) -> Result<()> {
    if input.len() != circ.n {
        return Err(Error::Dimension(format!("{}-qubit input for a {}-qubit circuit", input.len(), circ.n)));
    }
    if k >= circ.n {
        return Err(Error::InvalidInput(format!("qubit {k} out of range for {} qubits", circ.n)));
    }
    Ok(())
}

/// Dense `2^n` amplitude vector; qubit 0 is the most significant bit.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    pub n: usize,
    pub amps: Vec<C64>,
}

impl StateVector {
    pub fn from_product(input: &ProductState) -> Result<Self> {
        let n = input.len();
        if n > BRUTE_FORCE_MAX_QUBITS {
            return Err(Error::Capacity(format!("{n} qubits exceeds the dense limit {BRUTE_FORCE_MAX_QUBITS}")));
        }
        let mut amps = vec![C64::new(1.0, 0.0)];
        for f in input.factors() {
            amps = amps.iter().flat_map(|a| [a * f[0], a * f[1]]).collect();
        }
        Ok(Self { n, amps })
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        if n > BRUTE_FORCE_MAX_QUBITS {
            return Err(Error::Capacity(format!("{n} qubits exceeds the dense limit {BRUTE_FORCE_MAX_QUBITS}")));
        }
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    fn mask(&self, q: usize) -> usize {
        1 << (self.n - 1 - q)
    }

    /// Applies `g` with qubit `i` as its first tensor factor.
    pub fn apply_two(&mut self, g: &Matrix4c, i: usize, j: usize) {
        let (mi, mj) = (self.mask(i), self.mask(j));
        for s in 0..self.amps.len() {
            if s & (mi | mj) != 0 {
                continue;
            }
            let idx = [s, s | mj, s | mi, s | mi | mj];
            let old = idx.map(|t| self.amps[t]);
            for (r, &t) in idx.iter().enumerate() {
                self.amps[t] = (0..4).map(|c| g[(r, c)] * old[c]).sum();
            }
        }
    }

    pub fn apply_circuit(&mut self, circ: &MatchgateCircuit) {
        for g in &circ.gates {
            self.apply_two(&g.gate.to_matrix(), g.qubits.0, g.qubits.1);
        }
    }

    pub fn expectation_z(&self, k: usize) -> f64 {
        let mk = self.mask(k);
        self.amps.iter().enumerate().map(|(s, a)| if s & mk == 0 { a.norm_sqr() } else { -a.norm_sqr() }).sum()
    }

    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }
}

/// Dense simulation of any circuit, returning the output state.
pub fn brute_force_state(circ: &MatchgateCircuit, input: &ProductState) -> Result<StateVector> {
    circ.validate()?;
    if input.len() != circ.n {
        return Err(Error::Dimension(format!("{}-qubit input for a {}-qubit circuit", input.len(), circ.n)));
    }
    let mut state = StateVector::from_product(input)?;
    state.apply_circuit(circ);
    Ok(state)
}

/// Dense simulation of any circuit, returning `⟨Z_k⟩`.
pub fn brute_force(circ: &MatchgateCircuit, input: &ProductState, k: usize) -> Result<f64> {
    check_input(circ, input, k)?;
    Ok(brute_force_state(circ, input)?.expectation_z(k))
}

/// Which simulator produced a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    JordanWigner,
    StateVector,
}

/// `⟨Z_k⟩` through the free-fermion path when the circuit allows it, and
/// the dense simulator otherwise (non-matchgates or general graphs).
pub fn simulate_z(circ: &MatchgateCircuit, input: &ProductState, k: usize) -> Result<(f64, Engine)> {
    let fast = !matches!(circ.topology, Topology::Graph(_)) && circ.all_matchgates();
    if fast {
        Ok((expected_z(circ, input, k)?, Engine::JordanWigner))
    } else {
        Ok((brute_force(circ, input, k)?, Engine::StateVector))
    }
}
