// SPDX-License-Identifier: Apache-2.0
//! Cycle-by-cycle execution of the spin-serial, replica-parallel schedule.
//!
//! For spin `i` the scheduler issues one MAC cycle per fetched weight
//! (`k_i` nonzero weights with sparse bypass, all `N` row entries without)
//! followed by one finalize cycle. All `R` gates consume the same `(j, J_ij)`
//! fetch in lockstep. In the finalize cycle each gate reads its own `Is(t)`,
//! the upper replica's `σ_i(t-1)` and one random bit, then writes `σ_i(t+1)`
//! and `Is(t+1)` back to its delay lines.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixed::FixedPointConfig;
use crate::hw::delay::{DelayLine, DualBramDelay, ShiftRegDelay};
use crate::hw::report::{
    estimate_report, CycleReport, DelayKind, REFERENCE_F_CLK_HZ, REFERENCE_POWER_W,
    REFERENCE_UTILIZATION,
};
use crate::ising::IsingModel;
use crate::rng::BitStream;
use crate::schedule::{AnnealParams, Arithmetic};
use crate::solver::{finish, seeded_streams, Objective, RunResult};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HwOptions {
    pub delay: DelayKind,
    /// Skip zero-weight entries of the weight row.
    pub sparse_bypass: bool,
    pub f_clk_hz: f64,
    pub power_w: f64,
    pub utilization: f64,
}

impl Default for HwOptions {
    fn default() -> Self {
        Self {
            delay: DelayKind::DualBram,
            sparse_bypass: true,
            f_clk_hz: REFERENCE_F_CLK_HZ,
            power_w: REFERENCE_POWER_W,
            utilization: REFERENCE_UTILIZATION,
        }
    }
}

/// Analytic cycles per step: `Σ_i (k_i + 1)` with bypass, `N·(N+1)` without.
pub fn schedule_cycles_per_step(model: &IsingModel, sparse_bypass: bool) -> u64 {
    let n = model.n() as u64;
    if sparse_bypass {
        (0..model.n()).map(|i| model.degree(i) as u64 + 1).sum()
    } else {
        n * (n + 1)
    }
}

/// Datapath registers of one spin gate.
#[derive(Debug, Clone, Copy)]
pub struct SpinGateState {
    acc: i64,
    fx: FixedPointConfig,
}

impl SpinGateState {
    pub fn new(fx: FixedPointConfig) -> Self {
        Self { acc: 0, fx }
    }

    pub fn accumulator(&self) -> i64 {
        self.acc
    }

    /// Loads the bias at the start of a spin.
    pub fn begin(&mut self, h: i32) -> Result<()> {
        self.acc = self.fx.check(h as i64)?;
        Ok(())
    }

    pub fn mac(&mut self, weight: i32, spin: i8) -> Result<()> {
        self.acc = self.fx.check(self.acc + weight as i64 * spin as i64)?;
        Ok(())
    }

    /// Adds noise and coupling terms, updates the saturating accumulator and
    /// returns `(Is(t+1), σ(t+1))`.
    pub fn finalize(
        &mut self,
        is_old: i64,
        noise: i64,
        coupling: i64,
        i0: i64,
        alpha: i64,
    ) -> Result<(i64, i8)> {
        let input = self.fx.check(self.acc + noise + coupling)?;
        let sum = self.fx.check(is_old + input)?;
        let is_new = if sum >= i0 {
            i0 - alpha
        } else if sum < -i0 {
            -i0
        } else {
            sum
        };
        Ok((is_new, if is_new >= 0 { 1 } else { -1 }))
    }
}

type SpinDelay = Box<dyn DelayLine<i8> + Send>;
type AccDelay = Box<dyn DelayLine<i64> + Send>;

fn make_delay<T: Copy + Default + Send + 'static>(
    kind: DelayKind,
    n: usize,
) -> Box<dyn DelayLine<T> + Send> {
    match kind {
        DelayKind::DualBram => Box::new(DualBramDelay::<T>::new(n)),
        DelayKind::ShiftRegister => Box::new(ShiftRegDelay::<T>::new(n)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Mac,
    Fin,
}

/// The accelerator: `R` spin gates with their delay lines, the weight
/// memory, per-gate random bit streams and the scheduler counters.
pub struct HwSim<'m> {
    model: &'m IsingModel,
    params: AnnealParams,
    opts: HwOptions,
    gates: Vec<SpinGateState>,
    spin_delay: Vec<SpinDelay>,
    is_delay: Vec<AccDelay>,
    streams: Vec<BitStream>,
    /// Weight rows as fetched by the scheduler: `(j, J_ij)`.
    rows: Vec<Vec<(usize, i32)>>,
    cycle: u64,
    step: u64,
}

impl<'m> HwSim<'m> {
    pub fn new(model: &'m IsingModel, params: &AnnealParams, opts: HwOptions) -> Result<Self> {
        params.validate()?;
        if params.arithmetic != Arithmetic::Integer {
            return Err(Error::Config(
                "the hardware model runs in integer mode only".into(),
            ));
        }
        let (n, r) = (model.n(), params.replicas);
        let fx = FixedPointConfig::for_run(model, params);
        let (init, streams) = seeded_streams(n, r, params.seed);
        let mut spin_delay = Vec::with_capacity(r);
        let mut is_delay = Vec::with_capacity(r);
        let zeros = vec![0i64; n];
        for k in 0..r {
            let plane = &init[k * n..(k + 1) * n];
            let mut sd = make_delay::<i8>(opts.delay, n);
            sd.load(plane, plane)?;
            let mut id = make_delay::<i64>(opts.delay, n);
            id.load(&zeros, &zeros)?;
            spin_delay.push(sd);
            is_delay.push(id);
        }
        let rows = (0..n)
            .map(|i| {
                if opts.sparse_bypass {
                    model.neighbors(i).to_vec()
                } else {
                    (0..n).map(|j| (j, model.coupling(i, j))).collect()
                }
            })
            .collect();
        Ok(Self {
            model,
            params: params.clone(),
            opts,
            gates: vec![SpinGateState::new(fx); r],
            spin_delay,
            is_delay,
            streams,
            rows,
            cycle: 0,
            step: 0,
        })
    }

    pub fn cycles(&self) -> u64 {
        self.cycle
    }

    pub fn steps_done(&self) -> u64 {
        self.step
    }

    /// Current `σ(t)` planes, replica-major.
    pub fn sigma_plane(&self) -> Vec<i8> {
        self.spin_delay
            .iter()
            .flat_map(|d| d.snapshot_t())
            .collect()
    }

    /// Current `Is` planes, replica-major.
    pub fn is_plane(&self) -> Vec<i64> {
        self.is_delay.iter().flat_map(|d| d.snapshot_t()).collect()
    }

    fn trace(&self, out: &mut Option<&mut dyn Write>, spin: usize, phase: Phase) -> Result<()> {
        if let Some(w) = out.as_mut() {
            let parity = self.spin_delay[0].parity();
            let tag = match phase {
                Phase::Mac => "MAC",
                Phase::Fin => "FIN",
            };
            for k in 0..self.gates.len() {
                writeln!(
                    w,
                    "{},{},{},{},{},{}",
                    self.cycle, self.step, spin, k, tag, parity
                )?;
            }
        }
        Ok(())
    }

    fn clock(&mut self) {
        for d in &mut self.spin_delay {
            d.clock();
        }
        for d in &mut self.is_delay {
            d.clock();
        }
        self.cycle += 1;
    }

    /// Runs one annealing step, optionally writing one trace line per gate per cycle.
    pub fn run_step(&mut self, mut trace: Option<&mut dyn Write>) -> Result<()> {
        let t = self.step;
        let r = self.gates.len();
        let q = self.params.q_at(t);
        let i0 = self.params.i0_at(t);
        let n_rnd = self.params.n_rnd_at(t);
        let alpha = self.params.alpha;
        let boundary = self.params.boundary;
        let mut upper_sigma = vec![0i8; r];
        let mut is_old = vec![0i64; r];

        for i in 0..self.model.n() {
            let h = self.model.h()[i];
            for g in &mut self.gates {
                g.begin(h)?;
            }
            for idx in 0..self.rows[i].len() {
                let (j, w) = self.rows[i][idx];
                self.trace(&mut trace, i, Phase::Mac)?;
                for k in 0..r {
                    let s = self.spin_delay[k].read_t(j)?;
                    self.gates[k].mac(w, s)?;
                }
                self.clock();
            }

            self.trace(&mut trace, i, Phase::Fin)?;
            // read phase
            for k in 0..r {
                upper_sigma[k] = match boundary.upper(k, r) {
                    Some(u) => self.spin_delay[u].read_tminus1(i)?,
                    None => 0,
                };
                is_old[k] = self.is_delay[k].read_t(i)?;
            }
            // compute and write phase
            for k in 0..r {
                let noise = n_rnd * self.streams[k].next_sign() as i64;
                let coupling = q * upper_sigma[k] as i64;
                let (is_new, s_new) =
                    self.gates[k].finalize(is_old[k], noise, coupling, i0, alpha)?;
                self.spin_delay[k].write(i, s_new)?;
                self.is_delay[k].write(i, is_new)?;
            }
            self.clock();
        }

        for d in &mut self.spin_delay {
            d.end_step()?;
        }
        for d in &mut self.is_delay {
            d.end_step()?;
        }
        self.step += 1;
        Ok(())
    }

    pub fn report(&self) -> Result<CycleReport> {
        let mut rep = estimate_report(
            self.cycle,
            self.opts.f_clk_hz,
            self.opts.power_w,
            self.opts.utilization,
        )?;
        rep.cycles_per_step = schedule_cycles_per_step(self.model, self.opts.sparse_bypass);
        Ok(rep)
    }
}

/// Per-step snapshot handed to observers.
pub struct HwStepView<'a> {
    pub step: u64,
    pub cycles: u64,
    pub sigma: &'a [i8],
    pub is_acc: &'a [i64],
}

pub fn run_hw(
    model: &IsingModel,
    params: &AnnealParams,
    opts: HwOptions,
    objective: Objective<'_>,
) -> Result<(RunResult, CycleReport)> {
    run_hw_observed(model, params, opts, objective, None, |_| {})
}

/// Runs the full schedule. `observe` sees the initial planes and the planes
/// after each step; `trace` receives the per-cycle dump.
pub fn run_hw_observed(
    model: &IsingModel,
    params: &AnnealParams,
    opts: HwOptions,
    objective: Objective<'_>,
    mut trace: Option<&mut dyn Write>,
    mut observe: impl FnMut(&HwStepView<'_>),
) -> Result<(RunResult, CycleReport)> {
    let mut sim = HwSim::new(model, params, opts)?;
    if let Objective::MaxCut(g) = objective {
        if g.n_nodes() != model.n() {
            return Err(Error::Dimension {
                expected: model.n(),
                got: g.n_nodes(),
            });
        }
    }
    let mut trajectory = params.record_trajectory.then(Vec::new);
    let emit = |sim: &HwSim<'_>, observe: &mut dyn FnMut(&HwStepView<'_>)| {
        let sigma = sim.sigma_plane();
        let is_acc = sim.is_plane();
        observe(&HwStepView {
            step: sim.step,
            cycles: sim.cycle,
            sigma: &sigma,
            is_acc: &is_acc,
        });
        sigma
    };
    emit(&sim, &mut observe);
    for _ in 0..params.steps {
        match trace.as_mut() {
            Some(w) => sim.run_step(Some(&mut **w))?,
            None => sim.run_step(None)?,
        }
        let sigma = emit(&sim, &mut observe);
        if let Some(tr) = trajectory.as_mut() {
            tr.push(
                sigma
                    .chunks(model.n())
                    .map(|c| crate::ising::energy_unchecked(model, c))
                    .min()
                    .unwrap_or(0),
            );
        }
    }
    let expected = schedule_cycles_per_step(model, opts.sparse_bypass) * params.steps;
    if sim.cycles() != expected {
        return Err(Error::Integrity(format!(
            "cycle count {} differs from schedule model {expected}",
            sim.cycles()
        )));
    }
    let finals = sim.sigma_plane();
    let result = finish(model, params, objective, &finals, params.steps, trajectory);
    Ok((result, sim.report()?))
}
