// SPDX-License-Identifier: Apache-2.0
//! Multi-trial experiment harness shared by the CLI and the acceptance suite.
//!
//! Trial `i` of a run uses seed `seed + i`. Trials may execute concurrently
//! but results are always reported in trial order.

use std::fmt::Write as _;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gset::{GsetRecord, Instance};
use crate::hw::report::{
    estimate_report, REFERENCE_F_CLK_HZ, REFERENCE_POWER_W, REFERENCE_UTILIZATION,
};
use crate::hw::{
    final_replica_memory_bits, run_hw, schedule_cycles_per_step, DelayKind, HwOptions,
};
use crate::ising::{maxcut_to_ising, IsingModel, ReplicaBoundary, WeightedGraph};
use crate::schedule::{
    AnnealParams, Arithmetic, QSchedule, Ramp, DEFAULT_I0, DEFAULT_N_RND, DEFAULT_Q,
};
use crate::solver::{run_psa, run_ssa, run_ssqa, Objective, RunResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    SsqaRef,
    SsqaHw,
    Ssa,
    Psa,
}

impl Engine {
    pub fn as_str(self) -> &'static str {
        match self {
            Engine::SsqaRef => "ssqa_ref",
            Engine::SsqaHw => "ssqa_hw",
            Engine::Ssa => "ssa",
            Engine::Psa => "psa",
        }
    }
}

impl std::fmt::Display for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "ssqa_ref" | "ssqa" => Ok(Engine::SsqaRef),
            "ssqa_hw" | "hw" => Ok(Engine::SsqaHw),
            "ssa" => Ok(Engine::Ssa),
            "psa" => Ok(Engine::Psa),
            other => Err(Error::Config(format!("unknown engine `{other}`"))),
        }
    }
}

/// Complete description of an experiment. Missing JSON fields take defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    /// G-set file path or registry name.
    pub instance: String,
    pub engine: Engine,
    pub delay: DelayKind,
    pub sparse_bypass: bool,
    pub replicas: usize,
    pub steps: u64,
    pub trials: usize,
    pub seed: u64,
    pub q: QSchedule,
    pub i0: Ramp,
    pub n_rnd: Ramp,
    pub alpha: i64,
    pub boundary: ReplicaBoundary,
    pub arithmetic: Arithmetic,
    pub f_clk_hz: f64,
    pub power_w: f64,
    pub utilization: f64,
    /// Upper bound on concurrently running trials; `None` uses all cores.
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            instance: String::new(),
            engine: Engine::SsqaRef,
            delay: DelayKind::DualBram,
            sparse_bypass: true,
            replicas: 20,
            steps: 500,
            trials: 1,
            seed: 1,
            q: DEFAULT_Q,
            i0: DEFAULT_I0,
            n_rnd: DEFAULT_N_RND,
            alpha: 1,
            boundary: ReplicaBoundary::Periodic,
            arithmetic: Arithmetic::Integer,
            f_clk_hz: REFERENCE_F_CLK_HZ,
            power_w: REFERENCE_POWER_W,
            utilization: REFERENCE_UTILIZATION,
            workers: None,
            out: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.workers == Some(0) {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        if self.f_clk_hz.is_nan() || self.f_clk_hz <= 0.0 {
            return Err(Error::Config("clock frequency must be positive".into()));
        }
        self.anneal_params(self.seed).validate()
    }

    pub fn anneal_params(&self, seed: u64) -> AnnealParams {
        AnnealParams {
            steps: self.steps,
            replicas: self.replicas,
            q: self.q,
            i0: self.i0,
            n_rnd: self.n_rnd,
            alpha: self.alpha,
            delay: 1,
            seed,
            boundary: self.boundary,
            arithmetic: self.arithmetic,
            record_trajectory: false,
            parallel_replicas: false,
        }
    }

    pub fn hw_options(&self) -> HwOptions {
        HwOptions {
            delay: self.delay,
            sparse_bypass: self.sparse_bypass,
            f_clk_hz: self.f_clk_hz,
            power_w: self.power_w,
            utilization: self.utilization,
        }
    }

    pub fn trial_seed(&self, trial: usize) -> u64 {
        self.seed.wrapping_add(trial as u64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub best_cut: i64,
    /// Hardware cycles: measured for `ssqa_hw`, from the schedule model for
    /// `ssqa_ref`/`ssa`, absent for `psa`.
    pub cycles: Option<u64>,
    pub latency_s: Option<f64>,
    pub energy_j: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub cuts: Vec<i64>,
    pub mean: f64,
    /// Sample standard deviation (zero for a single trial).
    pub std: f64,
    pub max: i64,
    pub min: i64,
    pub best_known: Option<i64>,
    pub normalized_mean: Option<f64>,
    pub mean_cycles: Option<f64>,
    pub mean_latency_s: Option<f64>,
    pub mean_energy_j: Option<f64>,
}

fn mean_of(xs: impl Iterator<Item = f64>) -> Option<f64> {
    let (mut s, mut c) = (0.0, 0usize);
    for x in xs {
        s += x;
        c += 1;
    }
    (c > 0).then(|| s / c as f64)
}

impl TrialSummary {
    pub fn from_trials(trials: &[TrialRecord], best_known: Option<i64>) -> Self {
        let cuts: Vec<i64> = trials.iter().map(|t| t.best_cut).collect();
        let n = cuts.len().max(1) as f64;
        let mean = cuts.iter().sum::<i64>() as f64 / n;
        let std = if cuts.len() > 1 {
            (cuts.iter().map(|&c| (c as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        let all = |f: fn(&TrialRecord) -> Option<f64>| {
            let v: Option<Vec<f64>> = trials.iter().map(f).collect();
            v.and_then(|v| mean_of(v.into_iter()))
        };
        Self {
            max: cuts.iter().copied().max().unwrap_or(0),
            min: cuts.iter().copied().min().unwrap_or(0),
            mean,
            std,
            best_known,
            normalized_mean: best_known.map(|b| mean / b as f64),
            mean_cycles: all(|t| t.cycles.map(|c| c as f64)),
            mean_latency_s: all(|t| t.latency_s),
            mean_energy_j: all(|t| t.energy_j),
            cuts,
        }
    }
}

/// A graph ready to anneal.
#[derive(Debug, Clone)]
pub struct Problem {
    pub name: String,
    pub graph: WeightedGraph,
    pub model: IsingModel,
    pub record: Option<GsetRecord>,
}

impl Problem {
    pub fn new(
        name: impl Into<String>,
        graph: WeightedGraph,
        record: Option<GsetRecord>,
    ) -> Result<Self> {
        let model = maxcut_to_ising(&graph)?;
        Ok(Self {
            name: name.into(),
            graph,
            model,
            record,
        })
    }

    pub fn from_instance(inst: Instance) -> Result<Self> {
        Self::new(inst.name, inst.graph, inst.record)
    }

    pub fn best_known(&self) -> Option<i64> {
        self.record.as_ref().map(|r| r.best_known_cut)
    }
}

/// One trial of `config` on `problem` with the given seed.
pub fn run_trial(
    config: &RunConfig,
    problem: &Problem,
    trial: usize,
) -> Result<(TrialRecord, RunResult)> {
    let seed = config.trial_seed(trial);
    let params = config.anneal_params(seed);
    let objective = Objective::MaxCut(&problem.graph);
    let analytic = |params: &AnnealParams| -> Result<(u64, f64, f64)> {
        let cycles = schedule_cycles_per_step(&problem.model, config.sparse_bypass) * params.steps;
        let rep = estimate_report(cycles, config.f_clk_hz, config.power_w, config.utilization)?;
        Ok((cycles, rep.latency_s, rep.energy_j))
    };
    let (result, cost) = match config.engine {
        Engine::SsqaRef => (
            run_ssqa(&problem.model, &params, objective)?,
            Some(analytic(&params)?),
        ),
        Engine::Ssa => (
            run_ssa(&problem.model, &params, objective)?,
            Some(analytic(&params)?),
        ),
        Engine::Psa => (run_psa(&problem.model, &params, objective)?, None),
        Engine::SsqaHw => {
            let (res, rep) = run_hw(&problem.model, &params, config.hw_options(), objective)?;
            (res, Some((rep.total_cycles, rep.latency_s, rep.energy_j)))
        }
    };
    if let Some(best) = problem.best_known() {
        if result.best_value > best {
            return Err(Error::Integrity(format!(
                "{}: reported cut {} exceeds best known {best}",
                problem.name, result.best_value
            )));
        }
    }
    let record = TrialRecord {
        trial,
        seed,
        best_cut: result.best_value,
        cycles: cost.map(|c| c.0),
        latency_s: cost.map(|c| c.1),
        energy_j: cost.map(|c| c.2),
    };
    Ok((record, result))
}

fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Runs all trials of `config`; output is ordered by trial index.
pub fn run_trials(
    config: &RunConfig,
    problem: &Problem,
) -> Result<(Vec<TrialRecord>, TrialSummary)> {
    config.validate()?;
    let records = with_workers(config.workers, || {
        (0..config.trials)
            .into_par_iter()
            .map(|t| run_trial(config, problem, t).map(|(rec, _)| rec))
            .collect::<Result<Vec<_>>>()
    })??;
    let summary = TrialSummary::from_trials(&records, problem.best_known());
    Ok((records, summary))
}

pub const TRIAL_CSV_HEADER: &str = "trial,seed,best_cut,cycles,latency_s,energy_j";

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn trials_csv(records: &[TrialRecord]) -> String {
    let mut s = String::new();
    writeln!(s, "{TRIAL_CSV_HEADER}").unwrap();
    for r in records {
        writeln!(
            s,
            "{},{},{},{},{},{}",
            r.trial,
            r.seed,
            r.best_cut,
            opt(r.cycles),
            opt(r.latency_s),
            opt(r.energy_j)
        )
        .unwrap();
    }
    s
}

/// `{instance, engine, params, trials: [...], summary: {...}}`.
pub fn run_json(
    config: &RunConfig,
    problem: &Problem,
    records: &[TrialRecord],
    summary: &TrialSummary,
) -> serde_json::Value {
    serde_json::json!({
        "instance": problem.name,
        "engine": config.engine,
        "params": {
            "replicas": config.replicas,
            "steps": config.steps,
            "trials": config.trials,
            "seed": config.seed,
            "q": config.q,
            "i0": config.i0,
            "n_rnd": config.n_rnd,
            "alpha": config.alpha,
            "boundary": config.boundary,
            "arithmetic": config.arithmetic,
            "delay": config.delay,
            "sparse_bypass": config.sparse_bypass,
            "f_clk_hz": config.f_clk_hz,
            "power_w": config.power_w,
            "utilization": config.utilization,
        },
        "trials": records.iter().map(|r| serde_json::json!({
            "seed": r.seed,
            "best_cut": r.best_cut,
            "cycles": r.cycles,
            "latency_s": r.latency_s,
            "energy_j": r.energy_j,
        })).collect::<Vec<_>>(),
        "summary": {
            "mean": summary.mean,
            "std": summary.std,
            "max": summary.max,
            "normalized_mean": summary.normalized_mean,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub replicas: usize,
    pub steps: u64,
    pub trial: usize,
    pub seed: u64,
    pub best_cut: i64,
    pub normalized: Option<f64>,
}

pub const SWEEP_CSV_HEADER: &str = "replicas,steps,trial,seed,best_cut,normalized";

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = String::new();
    writeln!(s, "{SWEEP_CSV_HEADER}").unwrap();
    for r in rows {
        writeln!(
            s,
            "{},{},{},{},{},{}",
            r.replicas,
            r.steps,
            r.trial,
            r.seed,
            r.best_cut,
            opt(r.normalized)
        )
        .unwrap();
    }
    s
}

/// Mean cut of every `(replicas, steps)` point of a sweep, in first-seen order.
pub fn sweep_means(rows: &[SweepRow]) -> Vec<(usize, u64, f64)> {
    let mut keys: Vec<(usize, u64)> = Vec::new();
    for r in rows {
        if !keys.contains(&(r.replicas, r.steps)) {
            keys.push((r.replicas, r.steps));
        }
    }
    keys.into_iter()
        .map(|(rep, st)| {
            let m = mean_of(
                rows.iter()
                    .filter(|r| r.replicas == rep && r.steps == st)
                    .map(|r| r.best_cut as f64),
            );
            (rep, st, m.unwrap_or(0.0))
        })
        .collect()
}

/// One row per `(point, trial)` over the grid `replicas × steps`.
pub fn sweep(
    config: &RunConfig,
    problem: &Problem,
    replicas: &[usize],
    steps: &[u64],
) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for &r in replicas {
        for &s in steps {
            let point = RunConfig {
                replicas: r,
                steps: s,
                ..config.clone()
            };
            let (records, _) = run_trials(&point, problem)?;
            rows.extend(records.into_iter().map(|rec| SweepRow {
                replicas: r,
                steps: s,
                trial: rec.trial,
                seed: rec.seed,
                best_cut: rec.best_cut,
                normalized: problem.best_known().map(|b| rec.best_cut as f64 / b as f64),
            }));
        }
    }
    Ok(rows)
}

pub fn sweep_replicas(
    config: &RunConfig,
    problem: &Problem,
    replicas: &[usize],
) -> Result<Vec<SweepRow>> {
    sweep(config, problem, replicas, &[config.steps])
}

pub fn sweep_steps(config: &RunConfig, problem: &Problem, steps: &[u64]) -> Result<Vec<SweepRow>> {
    sweep(config, problem, &[config.replicas], steps)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareSide {
    pub engine: Engine,
    pub replicas: usize,
    pub steps: u64,
    pub summary: TrialSummary,
    /// Bits needed to store the final replica states.
    pub final_state_bits: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub instance: String,
    pub a: CompareSide,
    pub b: CompareSide,
    /// `b.mean - a.mean`.
    pub mean_delta: f64,
}

pub fn compare(a: &RunConfig, b: &RunConfig, problem: &Problem) -> Result<Comparison> {
    let side = |c: &RunConfig| -> Result<CompareSide> {
        let (_, summary) = run_trials(c, problem)?;
        let replicas = if c.engine == Engine::Ssa {
            1
        } else {
            c.replicas
        };
        Ok(CompareSide {
            engine: c.engine,
            replicas,
            steps: c.steps,
            summary,
            final_state_bits: final_replica_memory_bits(
                problem.graph.n_nodes() as u64,
                replicas as u64,
            ),
        })
    };
    let sa = side(a)?;
    let sb = side(b)?;
    Ok(Comparison {
        instance: problem.name.clone(),
        mean_delta: sb.summary.mean - sa.summary.mean,
        a: sa,
        b: sb,
    })
}

pub const COMPARE_CSV_HEADER: &str =
    "side,engine,replicas,steps,trials,mean,std,max,normalized_mean,mean_cycles,mean_latency_s,mean_energy_j,final_state_bits";

pub fn compare_csv(c: &Comparison) -> String {
    let mut s = String::new();
    writeln!(s, "{COMPARE_CSV_HEADER}").unwrap();
    for (name, side) in [("a", &c.a), ("b", &c.b)] {
        let m = &side.summary;
        writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            name,
            side.engine,
            side.replicas,
            side.steps,
            m.cuts.len(),
            m.mean,
            m.std,
            m.max,
            opt(m.normalized_mean),
            opt(m.mean_cycles),
            opt(m.mean_latency_s),
            opt(m.mean_energy_j),
            side.final_state_bits
        )
        .unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_problem() -> Problem {
        let g = WeightedGraph::new(
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
        .unwrap();
        Problem::new("hex", g, None).unwrap()
    }

    #[test]
    fn engine_names() {
        for e in [Engine::SsqaRef, Engine::SsqaHw, Engine::Ssa, Engine::Psa] {
            assert_eq!(e.as_str().parse::<Engine>().unwrap(), e);
            assert_eq!(serde_json::to_value(e).unwrap(), e.as_str());
        }
        assert!("foo".parse::<Engine>().is_err());
    }

    #[test]
    fn summary_statistics() {
        let rec = |c| TrialRecord {
            trial: 0,
            seed: 0,
            best_cut: c,
            cycles: Some(10),
            latency_s: None,
            energy_j: None,
        };
        let s = TrialSummary::from_trials(&[rec(2), rec(4), rec(6)], Some(8));
        assert_eq!(s.mean, 4.0);
        assert_eq!(s.std, 2.0);
        assert_eq!(s.max, 6);
        assert_eq!(s.normalized_mean, Some(0.5));
        assert_eq!(s.mean_cycles, Some(10.0));
        assert_eq!(s.mean_latency_s, None);
    }

    #[test]
    fn trials_are_ordered_and_seeded() {
        let p = small_problem();
        let cfg = RunConfig {
            trials: 8,
            seed: 100,
            steps: 50,
            replicas: 4,
            ..RunConfig::default()
        };
        let (recs, summary) = run_trials(&cfg, &p).unwrap();
        assert_eq!(
            recs.iter().map(|r| r.trial).collect::<Vec<_>>(),
            (0..8).collect::<Vec<_>>()
        );
        assert_eq!(
            recs.iter().map(|r| r.seed).collect::<Vec<_>>(),
            (100..108).collect::<Vec<_>>()
        );
        assert_eq!(summary.cuts.len(), 8);
        let single = RunConfig {
            workers: Some(1),
            ..cfg.clone()
        };
        assert_eq!(run_trials(&single, &p).unwrap().0, recs);
    }

    #[test]
    fn engines_agree_on_cycles() {
        let p = small_problem();
        let base = RunConfig {
            trials: 2,
            steps: 20,
            replicas: 3,
            ..RunConfig::default()
        };
        let (r, _) = run_trials(&base, &p).unwrap();
        let (h, _) = run_trials(
            &RunConfig {
                engine: Engine::SsqaHw,
                ..base.clone()
            },
            &p,
        )
        .unwrap();
        assert_eq!(r, h);
        let (ps, _) = run_trials(
            &RunConfig {
                engine: Engine::Psa,
                ..base.clone()
            },
            &p,
        )
        .unwrap();
        assert!(ps.iter().all(|t| t.cycles.is_none()));
    }

    #[test]
    fn integrity_violation_detected() {
        let mut p = small_problem();
        p.record = Some(GsetRecord {
            name: "hex".into(),
            n_nodes: 6,
            n_edges: 7,
            structure: crate::gset::Structure::Other,
            weights: crate::gset::WeightDomain::PlusMinusOne,
            best_known_cut: 1,
        });
        let cfg = RunConfig {
            steps: 50,
            replicas: 4,
            ..RunConfig::default()
        };
        assert!(matches!(run_trials(&cfg, &p), Err(Error::Integrity(_))));
    }

    #[test]
    fn config_validation() {
        assert!(RunConfig {
            trials: 0,
            ..RunConfig::default()
        }
        .validate()
        .is_err());
        assert!(RunConfig {
            workers: Some(0),
            ..RunConfig::default()
        }
        .validate()
        .is_err());
        assert!(RunConfig {
            replicas: 0,
            ..RunConfig::default()
        }
        .validate()
        .is_err());
        let partial: RunConfig =
            serde_json::from_str(r#"{"instance": "G11", "trials": 3}"#).unwrap();
        assert_eq!(partial.trials, 3);
        assert_eq!(partial.replicas, 20);
    }

    #[test]
    fn csv_layouts() {
        let p = small_problem();
        let cfg = RunConfig {
            trials: 2,
            steps: 10,
            replicas: 2,
            ..RunConfig::default()
        };
        let (recs, summary) = run_trials(&cfg, &p).unwrap();
        let csv = trials_csv(&recs);
        assert!(csv.starts_with(TRIAL_CSV_HEADER));
        assert_eq!(csv.lines().count(), 3);
        let json = run_json(&cfg, &p, &recs, &summary);
        assert_eq!(json["trials"].as_array().unwrap().len(), 2);
        assert!(json["summary"]["normalized_mean"].is_null());
        let rows = sweep_replicas(&cfg, &p, &[1, 3]).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(sweep_means(&rows).len(), 2);
        assert!(sweep_csv(&rows).starts_with(SWEEP_CSV_HEADER));
    }

    #[test]
    fn identical_sides_compare_equal() {
        let p = small_problem();
        let cfg = RunConfig {
            trials: 3,
            steps: 30,
            replicas: 3,
            ..RunConfig::default()
        };
        let c = compare(&cfg, &cfg, &p).unwrap();
        assert_eq!(c.a, c.b);
        assert_eq!(c.mean_delta, 0.0);
        assert_eq!(compare_csv(&c).lines().count(), 3);
    }
}
