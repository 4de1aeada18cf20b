// SPDX-License-Identifier: Apache-2.0
//! Independent oracles and fixtures shared by the integration tests.
#![allow(dead_code)]

use proptest::prelude::*;
use ssqa_core::ising::{IsingModel, WeightedGraph};

/// Exhaustive MAX-CUT; node 0 is pinned to one side.
pub fn brute_maxcut(g: &WeightedGraph) -> i64 {
    let n = g.n_nodes();
    assert!(n <= 24);
    (0u32..1 << (n - 1))
        .map(|mask| {
            let side = |v: usize| v > 0 && mask >> (v - 1) & 1 == 1;
            g.edges()
                .iter()
                .filter(|e| side(e.u) != side(e.v))
                .map(|e| e.w)
                .sum()
        })
        .max()
        .unwrap()
}

/// `H = -Σ h_i s_i - Σ_{i<j} J_ij s_i s_j` by a dense double loop.
pub fn brute_energy(model: &IsingModel, s: &[i8]) -> i64 {
    let n = model.n();
    let mut e = 0i64;
    for i in 0..n {
        e -= model.h()[i] as i64 * s[i] as i64;
        for j in i + 1..n {
            e -= model.coupling(i, j) as i64 * s[i] as i64 * s[j] as i64;
        }
    }
    e
}

/// All `2^n` spin configurations.
pub fn all_states(n: usize) -> impl Iterator<Item = Vec<i8>> {
    (0u32..1 << n).map(move |m| {
        (0..n)
            .map(|i| if m >> i & 1 == 1 { -1 } else { 1 })
            .collect()
    })
}

/// Connected graph on `4..=max_n` nodes with ±1 weights: a random spanning
/// tree plus random extra edges.
pub fn connected_graph(max_n: usize) -> impl Strategy<Value = WeightedGraph> {
    (4..=max_n)
        .prop_flat_map(|n| {
            let parents: Vec<_> = (1..n).map(|v| 0..v).collect();
            let extra = proptest::collection::vec((0..n, 0..n), 0..2 * n);
            let signs = proptest::collection::vec(any::<bool>(), n * (n - 1) / 2);
            (Just(n), parents, extra, signs)
        })
        .prop_map(|(n, parents, extra, signs)| {
            let mut pairs: Vec<(usize, usize)> = parents
                .iter()
                .enumerate()
                .map(|(v, &p)| (p, v + 1))
                .collect();
            for (a, b) in extra {
                let (u, v) = (a.min(b), a.max(b));
                if u != v && !pairs.contains(&(u, v)) {
                    pairs.push((u, v));
                }
            }
            let edges = pairs
                .iter()
                .zip(&signs)
                .map(|(&(u, v), &s)| (u, v, if s { 1 } else { -1 }));
            WeightedGraph::new(n, edges).unwrap()
        })
}

/// Ising model with `n` spins, random biases and couplings within 4 bits.
pub fn random_model(max_n: usize) -> impl Strategy<Value = IsingModel> {
    (2..=max_n)
        .prop_flat_map(|n| {
            let h = proptest::collection::vec(-3i32..=3, n);
            let j = proptest::collection::vec((0..n, 0..n, -7i32..=7), 0..4 * n);
            (h, j)
        })
        .prop_map(|(h, j)| {
            let mut seen = std::collections::HashSet::new();
            let cs: Vec<_> = j
                .into_iter()
                .filter(|&(a, b, _)| a != b && seen.insert((a.min(b), a.max(b))))
                .collect();
            IsingModel::new(h, cs, 4).unwrap()
        })
}

/// The 7-edge hexagon-with-chord graph used by several golden tests.
pub fn hexagon() -> WeightedGraph {
    WeightedGraph::new(
        6,
        [
            (0, 1, 1),
            (1, 2, 1),
            (2, 3, -1),
            (3, 4, 1),
            (4, 5, 1),
            (5, 0, 1),
            (0, 3, 1),
        ],
    )
    .unwrap()
}

/// The 15-edge, 10-node fixture also used by the CLI tests (0-based).
pub fn ten_node() -> WeightedGraph {
    let e = [
        (1, 2, 1),
        (2, 3, 1),
        (3, 4, -1),
        (4, 5, 1),
        (5, 1, 1),
        (1, 6, 1),
        (2, 7, -1),
        (3, 8, 1),
        (4, 9, 1),
        (5, 10, -1),
        (6, 8, 1),
        (8, 10, 1),
        (10, 7, 1),
        (7, 9, -1),
        (9, 6, 1),
    ];
    WeightedGraph::new(10, e.iter().map(|&(u, v, w)| (u - 1, v - 1, w))).unwrap()
}

/// Planes `cur` = σ(t) and `old` = σ(t-1) / σ(t+1); writes land at the end
/// of the cycle and the planes swap roles every step.
pub struct NaiveDelay {
    cur: Vec<i8>,
    old: Vec<i8>,
    staged: Vec<(usize, i8)>,
}

impl NaiveDelay {
    pub fn new(depth: usize) -> Self {
        Self {
            cur: vec![0; depth],
            old: vec![0; depth],
            staged: Vec::new(),
        }
    }
    pub fn read_t(&self, a: usize) -> i8 {
        self.cur[a]
    }
    pub fn read_tminus1(&self, a: usize) -> i8 {
        self.old[a]
    }
    pub fn write(&mut self, a: usize, v: i8) {
        self.staged.push((a, v));
    }
    pub fn clock(&mut self) {
        for (a, v) in self.staged.drain(..) {
            self.old[a] = v;
        }
    }
    pub fn end_step(&mut self) {
        self.clock();
        std::mem::swap(&mut self.cur, &mut self.old);
    }
}
