// SPDX-License-Identifier: Apache-2.0
//! Ising models, spin configurations and weighted graphs.
//!
//! Energies follow `H(σ) = -Σ h_i σ_i - Σ_{i<j} J_ij σ_i σ_j` and are evaluated
//! in exact integer arithmetic. MAX-CUT instances map onto Ising models with
//! `h = 0` and `J_ij = -w_ij`, so that `H(σ) = W_total - 2·cut(σ)`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default signed bit-width of `h` and `J` entries.
pub const DEFAULT_WEIGHT_BITS: u8 = 4;

/// Returns true if `value` is representable as a signed `bits`-bit integer.
pub fn fits_signed(value: i64, bits: u8) -> bool {
    debug_assert!((1..=63).contains(&bits));
    let lo = -(1i64 << (bits - 1));
    let hi = (1i64 << (bits - 1)) - 1;
    (lo..=hi).contains(&value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coupling {
    pub i: usize,
    pub j: usize,
    pub weight: i32,
}

/// An Ising instance with integer biases and sparse symmetric couplings.
///
/// Couplings are kept as a list sorted by `(i, j)` with `i < j`, plus a
/// per-spin adjacency index sorted by neighbor, so iterating the
/// interactions of one spin costs its degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsingModel {
    n: usize,
    h: Vec<i32>,
    couplings: Vec<Coupling>,
    weight_bits: u8,
    adjacency: Vec<Vec<(usize, i32)>>,
}

impl IsingModel {
    /// Builds a model from biases and `(i, j, J_ij)` triples. Pairs may be
    /// given in either order; self-couplings, out-of-range indices, duplicate
    /// pairs and weights outside `weight_bits` are rejected. Zero-weight
    /// couplings are dropped.
    pub fn new(
        h: Vec<i32>,
        couplings: impl IntoIterator<Item = (usize, usize, i32)>,
        weight_bits: u8,
    ) -> Result<Self> {
        let n = h.len();
        if n == 0 {
            return Err(Error::InvalidModel("model needs at least one spin".into()));
        }
        if !(2..=32).contains(&weight_bits) {
            return Err(Error::InvalidModel(format!(
                "weight_bits must be in 2..=32, got {weight_bits}"
            )));
        }
        for &hi in &h {
            if !fits_signed(hi as i64, weight_bits) {
                return Err(Error::Range {
                    value: hi as i64,
                    bits: weight_bits,
                });
            }
        }
        let mut seen = HashSet::new();
        let mut list = Vec::new();
        for (a, b, w) in couplings {
            if a == b {
                return Err(Error::InvalidModel(format!("self-coupling on spin {a}")));
            }
            let (i, j) = if a < b { (a, b) } else { (b, a) };
            if j >= n {
                return Err(Error::InvalidModel(format!(
                    "coupling ({a}, {b}) out of range for {n} spins"
                )));
            }
            if !fits_signed(w as i64, weight_bits) {
                return Err(Error::Range {
                    value: w as i64,
                    bits: weight_bits,
                });
            }
            if !seen.insert((i, j)) {
                return Err(Error::InvalidModel(format!(
                    "duplicate coupling ({i}, {j})"
                )));
            }
            if w != 0 {
                list.push(Coupling { i, j, weight: w });
            }
        }
        list.sort_by_key(|c| (c.i, c.j));

        let mut adjacency = vec![Vec::new(); n];
        for c in &list {
            adjacency[c.i].push((c.j, c.weight));
            adjacency[c.j].push((c.i, c.weight));
        }
        for row in &mut adjacency {
            row.sort_unstable_by_key(|&(j, _)| j);
        }

        Ok(Self {
            n,
            h,
            couplings: list,
            weight_bits,
            adjacency,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> &[i32] {
        &self.h
    }

    pub fn couplings(&self) -> &[Coupling] {
        &self.couplings
    }

    pub fn weight_bits(&self) -> u8 {
        self.weight_bits
    }

    /// Nonzero-weight neighbors of spin `i` as `(j, J_ij)`, ascending in `j`.
    pub fn neighbors(&self, i: usize) -> &[(usize, i32)] {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `J_ij`, zero when the pair is not coupled.
    pub fn coupling(&self, i: usize, j: usize) -> i32 {
        let row = &self.adjacency[i];
        match row.binary_search_by_key(&j, |&(k, _)| k) {
            Ok(pos) => row[pos].1,
            Err(_) => 0,
        }
    }

    /// Local field `h_i + Σ_j J_ij σ_j`.
    pub fn local_field(&self, i: usize, spins: &[i8]) -> i64 {
        self.adjacency[i]
            .iter()
            .fold(self.h[i] as i64, |acc, &(j, w)| {
                acc + w as i64 * spins[j] as i64
            })
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: len,
            });
        }
        Ok(())
    }
}

/// A configuration of ±1 spins.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct SpinState(Vec<i8>);

impl SpinState {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if let Some(bad) = spins.iter().find(|&&s| s != 1 && s != -1) {
            return Err(Error::InvalidModel(format!("spin value {bad} is not ±1")));
        }
        Ok(Self(spins))
    }

    pub fn all_up(n: usize) -> Self {
        Self(vec![1; n])
    }

    /// Bit `i` of `bits` set means spin `i` is `-1`. Only the low `n` bits are used.
    pub fn from_bits(bits: u64, n: usize) -> Self {
        assert!(n <= 64);
        Self(
            (0..n)
                .map(|i| if bits >> i & 1 == 1 { -1 } else { 1 })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|&s| -s).collect())
    }
}

impl TryFrom<Vec<i8>> for SpinState {
    type Error = Error;

    fn try_from(v: Vec<i8>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<SpinState> for Vec<i8> {
    fn from(s: SpinState) -> Self {
        s.0
    }
}

impl AsRef<[i8]> for SpinState {
    fn as_ref(&self) -> &[i8] {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: i64,
}

/// Undirected weighted graph with `u < v` on every edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedGraph {
    n_nodes: usize,
    edges: Vec<Edge>,
}

impl WeightedGraph {
    /// Edges keep their input order; endpoints are normalized to `u < v`.
    pub fn new(
        n_nodes: usize,
        edges: impl IntoIterator<Item = (usize, usize, i64)>,
    ) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut list = Vec::new();
        for (a, b, w) in edges {
            if a == b {
                return Err(Error::InvalidModel(format!("self-loop on node {a}")));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if v >= n_nodes {
                return Err(Error::InvalidModel(format!(
                    "edge ({a}, {b}) out of range for {n_nodes} nodes"
                )));
            }
            if !seen.insert((u, v)) {
                return Err(Error::InvalidModel(format!("duplicate edge ({u}, {v})")));
            }
            list.push(Edge { u, v, w });
        }
        Ok(Self {
            n_nodes,
            edges: list,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn total_weight(&self) -> i64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n_nodes];
        for e in &self.edges {
            deg[e.u] += 1;
            deg[e.v] += 1;
        }
        deg
    }
}

/// `H(σ) = -Σ h_i σ_i - Σ_{i<j} J_ij σ_i σ_j`.
pub fn energy(model: &IsingModel, state: &SpinState) -> Result<i64> {
    model.check_len(state.len())?;
    Ok(energy_unchecked(model, state.as_slice()))
}

pub(crate) fn energy_unchecked(model: &IsingModel, s: &[i8]) -> i64 {
    let bias: i64 = model
        .h
        .iter()
        .zip(s)
        .map(|(&h, &x)| h as i64 * x as i64)
        .sum();
    let pair: i64 = model
        .couplings
        .iter()
        .map(|c| c.weight as i64 * s[c.i] as i64 * s[c.j] as i64)
        .sum();
    -bias - pair
}

/// Total weight of edges whose endpoints disagree.
pub fn cut_value(graph: &WeightedGraph, state: &SpinState) -> Result<i64> {
    if state.len() != graph.n_nodes {
        return Err(Error::Dimension {
            expected: graph.n_nodes,
            got: state.len(),
        });
    }
    Ok(cut_unchecked(graph, state.as_slice()))
}

pub(crate) fn cut_unchecked(graph: &WeightedGraph, s: &[i8]) -> i64 {
    graph
        .edges
        .iter()
        .filter(|e| s[e.u] != s[e.v])
        .map(|e| e.w)
        .sum()
}

/// MAX-CUT to Ising with the default weight width.
pub fn maxcut_to_ising(graph: &WeightedGraph) -> Result<IsingModel> {
    maxcut_to_ising_with_bits(graph, DEFAULT_WEIGHT_BITS)
}

pub fn maxcut_to_ising_with_bits(graph: &WeightedGraph, weight_bits: u8) -> Result<IsingModel> {
    let mut couplings = Vec::with_capacity(graph.edges.len());
    for e in &graph.edges {
        let j = -e.w;
        if !(2..=32).contains(&weight_bits) || !fits_signed(j, weight_bits) {
            return Err(Error::Range {
                value: j,
                bits: weight_bits,
            });
        }
        couplings.push((e.u, e.v, j as i32));
    }
    IsingModel::new(vec![0; graph.n_nodes], couplings, weight_bits)
}

/// How the replica chain closes: `σ_{i,R}` couples back to `σ_{i,0}`, or not at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReplicaBoundary {
    #[default]
    Periodic,
    Open,
}

impl ReplicaBoundary {
    /// Index of the upper neighbor of replica `k` in a chain of `r`, if any.
    pub fn upper(self, k: usize, r: usize) -> Option<usize> {
        match self {
            ReplicaBoundary::Periodic => Some((k + 1) % r),
            ReplicaBoundary::Open => (k + 1 < r).then_some(k + 1),
        }
    }
}

/// `Σ_k ( H_p(σ_k) - Q Σ_i σ_{i,k} σ_{i,k+1} )`.
pub fn pseudo_quantum_energy(
    model: &IsingModel,
    replicas: &[SpinState],
    q: f64,
    boundary: ReplicaBoundary,
) -> Result<f64> {
    let r = replicas.len();
    if r == 0 {
        return Err(Error::Dimension {
            expected: 1,
            got: 0,
        });
    }
    for s in replicas {
        model.check_len(s.len())?;
    }
    let mut total = 0.0;
    for (k, s) in replicas.iter().enumerate() {
        total += energy_unchecked(model, s.as_slice()) as f64;
        if let Some(up) = boundary.upper(k, r) {
            let overlap: i64 = s
                .as_slice()
                .iter()
                .zip(replicas[up].as_slice())
                .map(|(&a, &b)| a as i64 * b as i64)
                .sum();
            total -= q * overlap as f64;
        }
    }
    Ok(total)
}
