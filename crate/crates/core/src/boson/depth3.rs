use super::{factorial, FockState};
use crate::numerics::{haar_unitary, is_unitary, CMatrix, RandomSource, C64};
use crate::{Error, Result};
use std::collections::BTreeMap;

/// A 2×2 mode transformation on `(modes.0, modes.1)`; `matrix[out][in]`
/// with local index 0 for `modes.0`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoModeGate {
    pub modes: (usize, usize),
    pub matrix: [[C64; 2]; 2],
}

impl TwoModeGate {
    pub fn new(a: usize, b: usize, matrix: [[C64; 2]; 2]) -> Self {
        Self { modes: (a, b), matrix }
    }

    pub fn from_matrix(a: usize, b: usize, u: &CMatrix) -> Result<Self> {
        if u.shape() != (2, 2) {
            return Err(Error::Dimension(format!("two-mode gate from a {:?} matrix", u.shape())));
        }
        Ok(Self::new(a, b, [[u[(0, 0)], u[(0, 1)]], [u[(1, 0)], u[(1, 1)]]]))
    }

    /// `[[cos θ, i sin θ], [i sin θ, cos θ]]`.
    pub fn beam_splitter(a: usize, b: usize, theta: f64) -> Self {
        let c = C64::new(theta.cos(), 0.0);
        let s = C64::new(0.0, theta.sin());
        Self::new(a, b, [[c, s], [s, c]])
    }

    pub fn haar(a: usize, b: usize, rng: &mut RandomSource) -> Self {
        Self::from_matrix(a, b, &haar_unitary(2, rng)).expect("2x2 sample")
    }

    pub fn to_matrix(&self) -> CMatrix {
        let g = &self.matrix;
        CMatrix::from_row_slice(2, 2, &[g[0][0], g[0][1], g[1][0], g[1][1]])
    }
}

fn validate_layer(m: usize, layer: &[TwoModeGate], name: &str) -> Result<()> {
    let mut used = vec![false; m];
    for g in layer {
        let (a, b) = g.modes;
        if a >= m || b >= m || a == b {
            return Err(Error::InvalidInput(format!("{name}: bad mode pair ({a}, {b}) for {m} modes")));
        }
        if used[a] || used[b] {
            return Err(Error::InvalidInput(format!("{name}: gates overlap on ({a}, {b})")));
        }
        used[a] = true;
        used[b] = true;
        if !is_unitary(&g.to_matrix(), 1e-8) {
            return Err(Error::InvalidInput(format!("{name}: gate on ({a}, {b}) is not unitary")));
        }
    }
    Ok(())
}

/// The `m×m` unitary of `layer2 · layer1`.
pub fn depth3_unitary(m: usize, layer1: &[TwoModeGate], layer2: &[TwoModeGate]) -> Result<CMatrix> {
    validate_layer(m, layer1, "layer 1")?;
    validate_layer(m, layer2, "layer 2")?;
    let embed = |layer: &[TwoModeGate]| {
        let mut u = CMatrix::identity(m, m);
        for g in layer {
            let (a, b) = g.modes;
            u[(a, a)] = g.matrix[0][0];
            u[(a, b)] = g.matrix[0][1];
            u[(b, a)] = g.matrix[1][0];
            u[(b, b)] = g.matrix[1][1];
        }
        u
    };
    Ok(embed(layer2) * embed(layer1))
}

// Joint Fock amplitudes of a handful of modes that are still entangled.
#[derive(Clone, Debug)]
struct Block {
    modes: Vec<usize>,
    amps: BTreeMap<Vec<usize>, C64>,
}

impl Block {
    fn product(x: &Block, y: &Block) -> Block {
        let mut modes = x.modes.clone();
        modes.extend(&y.modes);
        let mut amps = BTreeMap::new();
        for (kx, ax) in &x.amps {
            for (ky, ay) in &y.amps {
                let mut key = kx.clone();
                key.extend(ky);
                amps.insert(key, ax * ay);
            }
        }
        Block { modes, amps }
    }

    fn position(&self, mode: usize) -> usize {
        self.modes.iter().position(|&k| k == mode).expect("mode tracked by block")
    }

    // Expands each creation operator of the two modes through the gate.
    fn apply(&mut self, g: &TwoModeGate) {
        let pu = self.position(g.modes.0);
        let pv = self.position(g.modes.1);
        let u = &g.matrix;
        let mut out: BTreeMap<Vec<usize>, C64> = BTreeMap::new();
        for (key, amp) in &self.amps {
            let (p, q) = (key[pu], key[pv]);
            let norm_in = (factorial(p) * factorial(q)).sqrt();
            for k in 0..=p {
                let from_u = binom(p, k) * u[0][0].powu(k as u32) * u[1][0].powu((p - k) as u32);
                for l in 0..=q {
                    let from_v = binom(q, l) * u[0][1].powu(l as u32) * u[1][1].powu((q - l) as u32);
                    let (nu, nv) = (k + l, p + q - k - l);
                    let c = from_u * from_v * ((factorial(nu) * factorial(nv)).sqrt() / norm_in);
                    let mut nk = key.clone();
                    nk[pu] = nu;
                    nk[pv] = nv;
                    *out.entry(nk).or_insert(C64::new(0.0, 0.0)) += amp * c;
                }
            }
        }
        self.amps = out;
    }

    // Samples the occupations of `which`, returning them and the collapsed rest.
    fn measure(self, which: &[usize], rng: &mut RandomSource) -> (Vec<usize>, Block) {
        let pos: Vec<usize> = which.iter().map(|&k| self.position(k)).collect();
        let mut marginal: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
        for (key, amp) in &self.amps {
            let sub: Vec<usize> = pos.iter().map(|&p| key[p]).collect();
            *marginal.entry(sub).or_insert(0.0) += amp.norm_sqr();
        }
        let total: f64 = marginal.values().sum();
        let x = rng.uniform() * total;
        let mut acc = 0.0;
        let mut outcome = None;
        for (sub, p) in &marginal {
            if *p <= 0.0 {
                continue;
            }
            acc += p;
            outcome = Some(sub.clone());
            if x < acc {
                break;
            }
        }
        let outcome = outcome.expect("block carries probability mass");
        let norm = marginal[&outcome].sqrt();
        let keep: Vec<usize> = (0..self.modes.len()).filter(|i| !pos.contains(i)).collect();
        let modes = keep.iter().map(|&i| self.modes[i]).collect();
        let mut amps = BTreeMap::new();
        for (key, amp) in self.amps {
            if pos.iter().zip(&outcome).all(|(&p, &o)| key[p] == o) {
                amps.insert(keep.iter().map(|&i| key[i]).collect(), amp / norm);
            }
        }
        (outcome, Block { modes, amps })
    }
}

fn binom(n: usize, k: usize) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Exact weak simulation of two layers of disjoint two-mode gates followed
/// by photon counting, for inputs with at most one photon per mode.
///
/// Measurements are taken one layer-2 gate at a time: the gate touches at
/// most two layer-1 blocks, so the state to track never exceeds four modes.
pub fn depth3_weak_simulate(
    layer1: &[TwoModeGate],
    layer2: &[TwoModeGate],
    input: &FockState,
    rng: &mut RandomSource,
    count: usize,
) -> Result<Vec<FockState>> {
    let m = input.modes();
    validate_layer(m, layer1, "layer 1")?;
    validate_layer(m, layer2, "layer 2")?;
    if !input.is_collision_free() {
        return Err(Error::InvalidInput("depth-3 simulation needs at most one photon per input mode".into()));
    }
    let occ = input.occupations();

    let mut initial = Vec::new();
    let mut in_layer1 = vec![false; m];
    for g in layer1 {
        let (a, b) = g.modes;
        in_layer1[a] = true;
        in_layer1[b] = true;
        let mut block =
            Block { modes: vec![a, b], amps: BTreeMap::from([(vec![occ[a], occ[b]], C64::new(1.0, 0.0))]) };
        block.apply(g);
        initial.push(block);
    }
    for k in (0..m).filter(|&k| !in_layer1[k]) {
        initial.push(Block { modes: vec![k], amps: BTreeMap::from([(vec![occ[k]], C64::new(1.0, 0.0))]) });
    }
    let mut in_layer2 = vec![false; m];
    for g in layer2 {
        in_layer2[g.modes.0] = true;
        in_layer2[g.modes.1] = true;
    }

    let mut samples = Vec::with_capacity(count);
    for _ in 0..count {
        let mut blocks: Vec<Option<Block>> = initial.iter().cloned().map(Some).collect();
        let mut owner = vec![0; m];
        for (i, b) in initial.iter().enumerate() {
            for &k in &b.modes {
                owner[k] = i;
            }
        }
        let mut result = vec![0; m];
        let mut settle = |blocks: &mut Vec<Option<Block>>, owner: &mut Vec<usize>, merged: Block, which: &[usize]| {
            let (outcome, rest) = merged.measure(which, rng);
            for (&k, &c) in which.iter().zip(&outcome) {
                result[k] = c;
            }
            let id = blocks.len();
            for &k in &rest.modes {
                owner[k] = id;
            }
            blocks.push(Some(rest));
        };
        for g in layer2 {
            let (x, y) = (owner[g.modes.0], owner[g.modes.1]);
            let mut merged = if x == y {
                blocks[x].take().expect("live block")
            } else {
                let bx = blocks[x].take().expect("live block");
                let by = blocks[y].take().expect("live block");
                Block::product(&bx, &by)
            };
            merged.apply(g);
            settle(&mut blocks, &mut owner, merged, &[g.modes.0, g.modes.1]);
        }
        for k in (0..m).filter(|&k| !in_layer2[k]) {
            let block = blocks[owner[k]].take().expect("live block");
            settle(&mut blocks, &mut owner, block, &[k]);
        }
        samples.push(FockState::new(result));
    }
    Ok(samples)
}
