use super::gate::{Matrix2c, TwoQubitGate};
use crate::numerics::{CMatrix, MatrixJson};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Interaction graph of a circuit. Vertices are qubits `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Topology {
    Path,
    /// A path plus the edge between the first and last qubits.
    Cycle,
    Graph(Vec<(usize, usize)>),
}

impl Topology {
    pub fn allows(&self, n: usize, i: usize, j: usize) -> bool {
        if i >= n || j >= n || i == j {
            return false;
        }
        let (lo, hi) = (i.min(j), i.max(j));
        match self {
            Topology::Path => hi - lo == 1,
            Topology::Cycle => hi - lo == 1 || (lo == 0 && hi == n - 1),
            Topology::Graph(edges) => edges.iter().any(|&(a, b)| (a.min(b), a.max(b)) == (lo, hi)),
        }
    }

    /// Explicit edge list on `n` vertices.
    pub fn edges(&self, n: usize) -> Vec<(usize, usize)> {
        match self {
            Topology::Path => (1..n).map(|i| (i - 1, i)).collect(),
            Topology::Cycle => {
                let mut e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
                if n > 2 {
                    e.push((0, n - 1));
                }
                e
            }
            Topology::Graph(edges) => edges.clone(),
        }
    }
}

/// Outcome of the path/cycle dichotomy for matchgates on a graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GraphClass {
    SimulablePathOrCycle,
    Universal,
    Disconnected,
}

/// Classifies a simple graph on `n` vertices. Self-loops and repeated
/// edges are ignored.
pub fn classify_graph(edges: &[(usize, usize)], n: usize) -> GraphClass {
    let set: BTreeSet<(usize, usize)> =
        edges.iter().filter(|(a, b)| a != b && *a < n && *b < n).map(|&(a, b)| (a.min(b), a.max(b))).collect();
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in &set {
        adj[a].push(b);
        adj[b].push(a);
    }
    if n == 0 {
        return GraphClass::SimulablePathOrCycle;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return GraphClass::Disconnected;
    }
    let degrees: Vec<usize> = adj.iter().map(Vec::len).collect();
    let leaves = degrees.iter().filter(|&&d| d == 1).count();
    let path = n == 1 || (leaves == 2 && degrees.iter().all(|&d| d == 1 || d == 2));
    let cycle = degrees.iter().all(|&d| d == 2);
    if path || cycle {
        GraphClass::SimulablePathOrCycle
    } else {
        GraphClass::Universal
    }
}

/// A gate acting on `qubits`; the first qubit is the first tensor factor.
#[derive(Clone, Debug, PartialEq)]
pub struct PlacedGate {
    pub gate: TwoQubitGate,
    pub qubits: (usize, usize),
}

/// Ordered two-qubit gates on `n` qubits; the first gate acts first.
#[derive(Clone, Debug, PartialEq)]
pub struct MatchgateCircuit {
    pub n: usize,
    pub topology: Topology,
    pub gates: Vec<PlacedGate>,
}

impl MatchgateCircuit {
    pub fn new(n: usize, topology: Topology) -> Self {
        Self { n, topology, gates: Vec::new() }
    }

    /// Appends a gate, rejecting pairs that are not edges of the topology.
    pub fn push(&mut self, gate: TwoQubitGate, i: usize, j: usize) -> Result<()> {
        if !self.topology.allows(self.n, i, j) {
            return Err(Error::InvalidInput(format!("qubits ({i}, {j}) are not an edge of the topology")));
        }
        self.gates.push(PlacedGate { gate, qubits: (i, j) });
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidInput("circuit has no qubits".into()));
        }
        if let Topology::Graph(edges) = &self.topology {
            if edges.iter().any(|&(a, b)| a >= self.n || b >= self.n || a == b) {
                return Err(Error::InvalidInput("graph edge outside the qubit range".into()));
            }
        }
        for g in &self.gates {
            let (i, j) = g.qubits;
            if !self.topology.allows(self.n, i, j) {
                return Err(Error::InvalidInput(format!("qubits ({i}, {j}) are not an edge of the topology")));
            }
        }
        Ok(())
    }

    pub fn all_matchgates(&self) -> bool {
        self.gates.iter().all(|g| g.gate.is_matchgate())
    }

    pub fn to_json(&self) -> CircuitJson {
        let topology = match &self.topology {
            Topology::Path => TopologyJson::Named("path".into()),
            Topology::Cycle => TopologyJson::Named("cycle".into()),
            Topology::Graph(edges) => TopologyJson::Graph { edges: edges.iter().map(|&(a, b)| [a + 1, b + 1]).collect() },
        };
        let gates = self
            .gates
            .iter()
            .map(|g| GateJson {
                a: MatrixJson::from_matrix(&to_dynamic(&g.gate.a)),
                b: MatrixJson::from_matrix(&to_dynamic(&g.gate.b)),
                qubits: [g.qubits.0 + 1, g.qubits.1 + 1],
            })
            .collect();
        CircuitJson { n: self.n, topology, gates }
    }

    pub fn from_json(json: &CircuitJson) -> Result<Self> {
        let one_based = |q: usize| {
            q.checked_sub(1).ok_or_else(|| Error::Parse("qubit labels are 1-based".into()))
        };
        let topology = match &json.topology {
            TopologyJson::Named(s) if s == "path" => Topology::Path,
            TopologyJson::Named(s) if s == "cycle" => Topology::Cycle,
            TopologyJson::Named(s) => return Err(Error::Parse(format!("unknown topology {s:?}"))),
            TopologyJson::Graph { edges } => Topology::Graph(
                edges.iter().map(|[a, b]| Ok((one_based(*a)?, one_based(*b)?))).collect::<Result<_>>()?,
            ),
        };
        let mut gates = Vec::with_capacity(json.gates.len());
        for g in &json.gates {
            let gate = TwoQubitGate::new(to_fixed(&g.a.to_matrix()?)?, to_fixed(&g.b.to_matrix()?)?)?;
            gates.push(PlacedGate { gate, qubits: (one_based(g.qubits[0])?, one_based(g.qubits[1])?) });
        }
        let circ = Self { n: json.n, topology, gates };
        circ.validate()?;
        Ok(circ)
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_json())?)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(s)?)
    }
}

fn to_dynamic(m: &Matrix2c) -> CMatrix {
    CMatrix::from_fn(2, 2, |i, j| m[(i, j)])
}

fn to_fixed(m: &CMatrix) -> Result<Matrix2c> {
    if m.shape() != (2, 2) {
        return Err(Error::Dimension(format!("gate block of shape {:?}", m.shape())));
    }
    Ok(Matrix2c::from_fn(|i, j| m[(i, j)]))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TopologyJson {
    Named(String),
    Graph { edges: Vec<[usize; 2]> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateJson {
    #[serde(rename = "A")]
    pub a: MatrixJson,
    #[serde(rename = "B")]
    pub b: MatrixJson,
    /// 1-based labels.
    pub qubits: [usize; 2],
}

/// Serialized circuit; qubit labels are 1-based.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitJson {
    pub n: usize,
    pub topology: TopologyJson,
    pub gates: Vec<GateJson>,
}
