// SPDX-License-Identifier: Apache-2.0
//! Reference annealing engines.
//!
//! SSQA evolves `R` replicas of the spin network. Spin `i` of replica `k`
//! integrates
//!
//! ```text
//! I = h_i + Σ_j J_ij σ_{j,k}(t) + n_rnd(t)·r + Q(t)·σ_{i,k+1}(t-1)
//! ```
//!
//! into a saturating accumulator bounded by `[-I0(t), I0(t) - α]` and outputs
//! the sign of the accumulator. All reads come from the previous-step
//! planes, so a step is order-independent and replicas can run in parallel.
//! SSA is the `R = 1`, `Q ≡ 0` special case. pSA is the floating-point
//! p-bit sampler `σ = sgn(r + tanh(I0·(h_i + Σ_j J_ij σ_j)))`.

use std::fmt::Debug;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixed::FixedPointConfig;
use crate::ising::{cut_unchecked, energy_unchecked, IsingModel, SpinState, WeightedGraph};
use crate::rng::BitStream;
use crate::schedule::{AnnealParams, Arithmetic, QSchedule};

/// Scalar type of the saturating accumulator.
pub trait Accumulator: Copy + PartialOrd + Debug + Send + Sync + 'static {
    const ZERO: Self;

    fn from_i64(v: i64) -> Self;

    fn add(self, other: Self) -> Self;

    fn mul(self, other: Self) -> Self;

    fn mul_spin(self, s: i8) -> Self;

    /// Random signal `r` for one update.
    fn noise(bits: &mut BitStream) -> Self;

    /// `(Q, I0, n_rnd, α)` at step `t`.
    fn controls(params: &AnnealParams, t: u64) -> Controls<Self>;

    fn check(self, fx: &FixedPointConfig) -> Result<Self>;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Controls<A> {
    pub q: A,
    pub i0: A,
    pub n_rnd: A,
    pub alpha: A,
}

impl Accumulator for i64 {
    const ZERO: Self = 0;

    #[inline]
    fn from_i64(v: i64) -> Self {
        v
    }

    #[inline]
    fn add(self, other: Self) -> Self {
        self + other
    }

    #[inline]
    fn mul(self, other: Self) -> Self {
        self * other
    }

    #[inline]
    fn mul_spin(self, s: i8) -> Self {
        self * s as i64
    }

    #[inline]
    fn noise(bits: &mut BitStream) -> Self {
        bits.next_sign() as i64
    }

    fn controls(params: &AnnealParams, t: u64) -> Controls<Self> {
        Controls {
            q: params.q_at(t),
            i0: params.i0_at(t),
            n_rnd: params.n_rnd_at(t),
            alpha: params.alpha,
        }
    }

    #[inline]
    fn check(self, fx: &FixedPointConfig) -> Result<Self> {
        fx.check(self)
    }
}

impl Accumulator for f64 {
    const ZERO: Self = 0.0;

    #[inline]
    fn from_i64(v: i64) -> Self {
        v as f64
    }

    #[inline]
    fn add(self, other: Self) -> Self {
        self + other
    }

    #[inline]
    fn mul(self, other: Self) -> Self {
        self * other
    }

    #[inline]
    fn mul_spin(self, s: i8) -> Self {
        self * s as f64
    }

    #[inline]
    fn noise(bits: &mut BitStream) -> Self {
        bits.next_symmetric_unit()
    }

    fn controls(params: &AnnealParams, t: u64) -> Controls<Self> {
        Controls {
            q: params.q_at(t) as f64,
            i0: params.i0_at_f64(t),
            n_rnd: params.n_rnd_at_f64(t),
            alpha: params.alpha as f64,
        }
    }

    #[inline]
    fn check(self, _fx: &FixedPointConfig) -> Result<Self> {
        Ok(self)
    }
}

/// Three-branch saturating update; returns the new accumulator value.
#[inline]
pub fn saturate<A: Accumulator>(sum: A, i0: A, alpha: A) -> A {
    let neg_i0 = i0.mul_spin(-1);
    if sum >= i0 {
        i0.add(alpha.mul_spin(-1))
    } else if sum < neg_i0 {
        neg_i0
    } else {
        sum
    }
}

/// Output spin for an accumulator value; zero maps to `+1`.
#[inline]
pub fn spin_of<A: Accumulator>(is: A) -> i8 {
    if is >= A::ZERO {
        1
    } else {
        -1
    }
}

/// Full dynamical state of an SSQA run. Planes are replica-major
/// (`index = k·N + i`).
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicaSet<A> {
    n: usize,
    r: usize,
    sigma_t: Vec<i8>,
    sigma_tm1: Vec<i8>,
    is_acc: Vec<A>,
    t: u64,
}

impl<A: Accumulator> ReplicaSet<A> {
    /// Starts from `initial` with `σ(t-1) = σ(t)` and zero accumulators.
    pub fn new(n: usize, r: usize, initial: Vec<i8>) -> Result<Self> {
        if initial.len() != n * r {
            return Err(Error::Dimension {
                expected: n * r,
                got: initial.len(),
            });
        }
        Ok(Self {
            n,
            r,
            sigma_tm1: initial.clone(),
            sigma_t: initial,
            is_acc: vec![A::ZERO; n * r],
            t: 0,
        })
    }

    pub fn from_planes(
        n: usize,
        r: usize,
        sigma_t: Vec<i8>,
        sigma_tm1: Vec<i8>,
        is_acc: Vec<A>,
        t: u64,
    ) -> Result<Self> {
        for len in [sigma_t.len(), sigma_tm1.len(), is_acc.len()] {
            if len != n * r {
                return Err(Error::Dimension {
                    expected: n * r,
                    got: len,
                });
            }
        }
        Ok(Self {
            n,
            r,
            sigma_t,
            sigma_tm1,
            is_acc,
            t,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn replicas(&self) -> usize {
        self.r
    }

    /// Number of completed steps.
    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn sigma(&self) -> &[i8] {
        &self.sigma_t
    }

    pub fn sigma_prev(&self) -> &[i8] {
        &self.sigma_tm1
    }

    pub fn is_acc(&self) -> &[A] {
        &self.is_acc
    }

    pub fn replica(&self, k: usize) -> &[i8] {
        &self.sigma_t[k * self.n..(k + 1) * self.n]
    }

    pub fn replica_states(&self) -> Vec<SpinState> {
        self.sigma_t
            .chunks(self.n)
            .map(|c| SpinState::new(c.to_vec()).expect("spins are ±1"))
            .collect()
    }
}

/// Per-replica streams and the random initial planes they produce. Replica
/// `k` uses stream `k`; its first `N` bits set the initial spins.
pub fn seeded_streams(n: usize, r: usize, seed: u64) -> (Vec<i8>, Vec<BitStream>) {
    let mut streams: Vec<_> = (0..r)
        .map(|k| BitStream::for_stream(seed, k as u64))
        .collect();
    let mut init = Vec::with_capacity(n * r);
    for s in &mut streams {
        init.extend((0..n).map(|_| s.next_sign()));
    }
    (init, streams)
}

#[allow(clippy::too_many_arguments)]
fn update_replica<A: Accumulator>(
    model: &IsingModel,
    ctl: &Controls<A>,
    fx: &FixedPointConfig,
    sigma_t: &[i8],
    upper_tm1: Option<&[i8]>,
    is_acc: &mut [A],
    out: &mut [i8],
    stream: &mut BitStream,
) -> Result<()> {
    for i in 0..model.n() {
        let field = fx.check(model.local_field(i, sigma_t))?;
        let mut input = A::from_i64(field).add(ctl.n_rnd.mul(A::noise(stream)));
        if let Some(up) = upper_tm1 {
            input = input.add(ctl.q.mul_spin(up[i]));
        }
        let input = input.check(fx)?;
        let sum = is_acc[i].add(input).check(fx)?;
        let next = saturate(sum, ctl.i0, ctl.alpha);
        is_acc[i] = next;
        out[i] = spin_of(next);
    }
    Ok(())
}

/// One replica's output plane, accumulators and stream.
type ReplicaWork<'a, A> = (usize, ((&'a mut [i8], &'a mut [A]), &'a mut BitStream));

/// Advances every replica by one step. Replica `k` consumes one bit (or one
/// word in float mode) of `streams[k]` per spin, in spin order.
pub fn ssqa_step<A: Accumulator>(
    model: &IsingModel,
    params: &AnnealParams,
    fx: &FixedPointConfig,
    state: &mut ReplicaSet<A>,
    streams: &mut [BitStream],
) -> Result<()> {
    let (n, r) = (state.n, state.r);
    model.check_len(n)?;
    if streams.len() != r {
        return Err(Error::Dimension {
            expected: r,
            got: streams.len(),
        });
    }
    let ctl = A::controls(params, state.t);
    let boundary = params.boundary;
    let sigma_t = &state.sigma_t;
    let sigma_tm1 = &state.sigma_tm1;
    let mut next = vec![0i8; n * r];

    let work = |(k, ((out, acc), stream)): ReplicaWork<'_, A>| {
        let upper = boundary.upper(k, r).map(|u| &sigma_tm1[u * n..(u + 1) * n]);
        update_replica(
            model,
            &ctl,
            fx,
            &sigma_t[k * n..(k + 1) * n],
            upper,
            acc,
            out,
            stream,
        )
    };
    let chunks = next
        .chunks_mut(n)
        .zip(state.is_acc.chunks_mut(n))
        .zip(streams.iter_mut());
    if params.parallel_replicas {
        chunks
            .enumerate()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(work)
            .collect::<Result<Vec<()>>>()?;
    } else {
        chunks.enumerate().map(work).collect::<Result<Vec<()>>>()?;
    }

    state.sigma_tm1 = std::mem::replace(&mut state.sigma_t, next);
    state.t += 1;
    Ok(())
}

/// How final replicas are scored.
#[derive(Debug, Clone, Copy)]
pub enum Objective<'a> {
    /// Score is `-H(σ)`.
    Energy,
    /// Score is the cut value on the graph.
    MaxCut(&'a WeightedGraph),
}

impl Objective<'_> {
    fn score(&self, model: &IsingModel, spins: &[i8]) -> i64 {
        match self {
            Objective::Energy => -energy_unchecked(model, spins),
            Objective::MaxCut(g) => cut_unchecked(g, spins),
        }
    }

    fn check(&self, model: &IsingModel) -> Result<()> {
        if let Objective::MaxCut(g) = self {
            model.check_len(g.n_nodes())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub best_state: SpinState,
    pub best_replica: usize,
    /// Cut value for [`Objective::MaxCut`], negated energy for [`Objective::Energy`].
    pub best_value: i64,
    pub per_replica_final_values: Vec<i64>,
    pub per_replica_final_energies: Vec<i64>,
    pub steps_executed: u64,
    pub seed: u64,
    /// Minimum replica energy after each step, when requested.
    pub trajectory: Option<Vec<i64>>,
}

/// Index and value of the highest score; ties go to the lowest index.
pub fn select_best_replica(values: &[i64]) -> Option<(usize, i64)> {
    let mut best: Option<(usize, i64)> = None;
    for (k, &v) in values.iter().enumerate() {
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((k, v));
        }
    }
    best
}

pub(crate) fn finish(
    model: &IsingModel,
    params: &AnnealParams,
    objective: Objective<'_>,
    finals: &[i8],
    steps_executed: u64,
    trajectory: Option<Vec<i64>>,
) -> RunResult {
    let n = model.n();
    let values: Vec<i64> = finals
        .chunks(n)
        .map(|c| objective.score(model, c))
        .collect();
    let energies: Vec<i64> = finals
        .chunks(n)
        .map(|c| energy_unchecked(model, c))
        .collect();
    let (best_replica, best_value) = select_best_replica(&values).expect("at least one replica");
    RunResult {
        best_state: SpinState::new(finals[best_replica * n..(best_replica + 1) * n].to_vec())
            .expect("spins are ±1"),
        best_replica,
        best_value,
        per_replica_final_values: values,
        per_replica_final_energies: energies,
        steps_executed,
        seed: params.seed,
        trajectory,
    }
}

fn min_energy(model: &IsingModel, plane: &[i8]) -> i64 {
    plane
        .chunks(model.n())
        .map(|c| energy_unchecked(model, c))
        .min()
        .unwrap_or(0)
}

/// SSQA with the accumulator type chosen by `params.arithmetic`.
pub fn run_ssqa(
    model: &IsingModel,
    params: &AnnealParams,
    objective: Objective<'_>,
) -> Result<RunResult> {
    match params.arithmetic {
        Arithmetic::Integer => run_ssqa_observed::<i64>(model, params, objective, |_| {}),
        Arithmetic::Float => run_ssqa_observed::<f64>(model, params, objective, |_| {}),
    }
}

/// SSQA with accumulator type `A` (ignoring `params.arithmetic`). `observe`
/// sees the initial state and the state after every step.
pub fn run_ssqa_observed<A: Accumulator>(
    model: &IsingModel,
    params: &AnnealParams,
    objective: Objective<'_>,
    mut observe: impl FnMut(&ReplicaSet<A>),
) -> Result<RunResult> {
    params.validate()?;
    objective.check(model)?;
    let (n, r) = (model.n(), params.replicas);
    let fx = FixedPointConfig::for_run(model, params);
    let (init, mut streams) = seeded_streams(n, r, params.seed);
    let mut state = ReplicaSet::<A>::new(n, r, init)?;
    let mut trajectory = params.record_trajectory.then(Vec::new);
    observe(&state);
    for _ in 0..params.steps {
        ssqa_step(model, params, &fx, &mut state, &mut streams)?;
        if let Some(tr) = trajectory.as_mut() {
            tr.push(min_energy(model, &state.sigma_t));
        }
        observe(&state);
    }
    Ok(finish(
        model,
        params,
        objective,
        &state.sigma_t,
        params.steps,
        trajectory,
    ))
}

/// The single-replica, uncoupled configuration used for SSA.
pub fn ssa_params(params: &AnnealParams) -> AnnealParams {
    AnnealParams {
        replicas: 1,
        q: QSchedule::ZERO,
        ..params.clone()
    }
}

/// SSA: SSQA with one replica and no replica coupling.
pub fn run_ssa(
    model: &IsingModel,
    params: &AnnealParams,
    objective: Objective<'_>,
) -> Result<RunResult> {
    run_ssqa(model, &ssa_params(params), objective)
}

/// p-bit simulated annealing. Runs `params.replicas` independent chains;
/// `Q`, `n_rnd` and `α` are not used. Each chain draws `r` uniform on
/// `[-1, 1)` per spin per step from its own stream.
pub fn run_psa(
    model: &IsingModel,
    params: &AnnealParams,
    objective: Objective<'_>,
) -> Result<RunResult> {
    run_psa_observed(model, params, objective, |_, _| {})
}

/// pSA with an observer called with `(t, spins)` after every step.
pub fn run_psa_observed(
    model: &IsingModel,
    params: &AnnealParams,
    objective: Objective<'_>,
    mut observe: impl FnMut(u64, &[i8]),
) -> Result<RunResult> {
    params.validate()?;
    objective.check(model)?;
    let (n, r) = (model.n(), params.replicas);
    let (mut cur, mut streams) = seeded_streams(n, r, params.seed);
    let mut next = vec![0i8; n * r];
    let mut trajectory = params.record_trajectory.then(Vec::new);
    for t in 0..params.steps {
        let i0 = params.i0_at_f64(t);
        for (k, stream) in streams.iter_mut().enumerate() {
            let src = &cur[k * n..(k + 1) * n];
            let dst = &mut next[k * n..(k + 1) * n];
            for (i, d) in dst.iter_mut().enumerate() {
                let input = i0 * model.local_field(i, src) as f64;
                let r = stream.next_symmetric_unit();
                *d = if r + input.tanh() >= 0.0 { 1 } else { -1 };
            }
        }
        std::mem::swap(&mut cur, &mut next);
        if let Some(tr) = trajectory.as_mut() {
            tr.push(min_energy(model, &cur));
        }
        observe(t, &cur);
    }
    Ok(finish(
        model,
        params,
        objective,
        &cur,
        params.steps,
        trajectory,
    ))
}
