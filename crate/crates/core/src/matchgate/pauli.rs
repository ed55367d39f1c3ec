use crate::numerics::C64;
use crate::{Error, Result};
use std::fmt;
use std::ops::Mul;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// `(phase exponent of i, result)` of `self · other`.
    fn mul(self, other: Pauli) -> (u8, Pauli) {
        use Pauli::*;
        match (self, other) {
            (I, p) | (p, I) => (0, p),
            (X, X) | (Y, Y) | (Z, Z) => (0, I),
            (X, Y) => (1, Z),
            (Y, X) => (3, Z),
            (Y, Z) => (1, X),
            (Z, Y) => (3, X),
            (Z, X) => (1, Y),
            (X, Z) => (3, Y),
        }
    }

    /// `⟨ψ|σ|ψ⟩` for a single-qubit state.
    pub fn expectation(self, psi: &[C64; 2]) -> C64 {
        let [a, b] = *psi;
        match self {
            Pauli::I => (a.norm_sqr() + b.norm_sqr()).into(),
            Pauli::X => (a.conj() * b + b.conj() * a).re.into(),
            Pauli::Y => (C64::i() * (b.conj() * a - a.conj() * b)).re.into(),
            Pauli::Z => (a.norm_sqr() - b.norm_sqr()).into(),
        }
    }

    /// `⟨ψ|σ Z|ψ⟩`.
    pub fn expectation_times_z(self, psi: &[C64; 2]) -> C64 {
        let (phase, p) = self.mul(Pauli::Z);
        i_pow(phase) * p.expectation(psi)
    }
}

fn i_pow(k: u8) -> C64 {
    match k % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

/// `i^phase · σ_0 ⊗ σ_1 ⊗ …` with qubit 0 first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    pub phase: u8,
    pub ops: Vec<Pauli>,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        Self { phase: 0, ops: vec![Pauli::I; n] }
    }

    /// Jordan-Wigner operator `c_a` (0-based): `Z…Z X_j` for `a = 2j`,
    /// `Z…Z Y_j` for `a = 2j + 1`.
    pub fn majorana(n: usize, a: usize) -> Self {
        assert!(a < 2 * n, "majorana index {a} out of range for {n} qubits");
        let j = a / 2;
        let mut ops = vec![Pauli::I; n];
        ops[..j].fill(Pauli::Z);
        ops[j] = if a % 2 == 0 { Pauli::X } else { Pauli::Y };
        Self { phase: 0, ops }
    }

    /// `Z_0 Z_1 ⋯ Z_{n−1}`.
    pub fn parity(n: usize) -> Self {
        Self { phase: 0, ops: vec![Pauli::Z; n] }
    }

    pub fn coefficient(&self) -> C64 {
        i_pow(self.phase)
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Expectation on the product state `⊗ψ_i`.
    pub fn expectation(&self, product: &[[C64; 2]]) -> Result<C64> {
        if product.len() != self.ops.len() {
            return Err(Error::Dimension(format!("{}-qubit string on a {}-qubit state", self.len(), product.len())));
        }
        let mut acc = self.coefficient();
        for (p, psi) in self.ops.iter().zip(product) {
            acc *= p.expectation(psi);
        }
        Ok(acc)
    }
}

impl Mul for &PauliString {
    type Output = PauliString;

    fn mul(self, rhs: &PauliString) -> PauliString {
        assert_eq!(self.len(), rhs.len(), "Pauli strings on different qubit counts");
        let mut phase = (self.phase + rhs.phase) % 4;
        let ops = self
            .ops
            .iter()
            .zip(&rhs.ops)
            .map(|(&a, &b)| {
                let (k, p) = a.mul(b);
                phase = (phase + k) % 4;
                p
            })
            .collect();
        PauliString { phase, ops }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = ["+", "+i", "-", "-i"][self.phase as usize % 4];
        write!(f, "{prefix}")?;
        for p in &self.ops {
            let c = match p {
                Pauli::I => 'I',
                Pauli::X => 'X',
                Pauli::Y => 'Y',
                Pauli::Z => 'Z',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}
