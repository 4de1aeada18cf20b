// SPDX-License-Identifier: Apache-2.0
//! `ssqa-bench`: multi-trial MAX-CUT experiments on G-set instances.
//!
//! Exit codes: 0 success, 2 configuration error, 3 I/O error,
//! 4 data-integrity error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ssqa_core::bench::{
    compare, compare_csv, run_json, run_trials, sweep_csv, sweep_means, sweep_replicas,
    sweep_steps, trials_csv, Engine, Problem, RunConfig,
};
use ssqa_core::gset::{load_instance, registry_json};
use ssqa_core::hw::{resource_scaling_model, DelayKind};
use ssqa_core::schedule::Ramp;
use ssqa_core::Error;

#[derive(Parser)]
#[command(
    name = "ssqa-bench",
    version,
    about = "Stochastic simulated quantum annealing benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run independent trials and write per-trial CSV plus a JSON summary.
    Run(Common),
    /// Sweep the number of replicas.
    SweepReplicas {
        #[command(flatten)]
        common: Common,
        /// Comma-separated replica counts.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<usize>,
    },
    /// Sweep the number of annealing steps.
    SweepSteps {
        #[command(flatten)]
        common: Common,
        /// Comma-separated step counts.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<u64>,
    },
    /// Compare the base configuration (side a) against an override (side b).
    Compare {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        b_engine: Option<String>,
        #[arg(long)]
        b_steps: Option<u64>,
        #[arg(long)]
        b_replicas: Option<usize>,
    },
    /// Print the instance registry, or one instance's statistics.
    Info {
        #[arg(long)]
        instance: Option<String>,
    },
}

#[derive(Args, Clone, Default)]
struct Common {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// G-set file path or registry name (G11..G15).
    #[arg(long)]
    instance: Option<String>,
    /// ssqa_ref | ssqa_hw | ssa | psa
    #[arg(long)]
    engine: Option<String>,
    /// dual_bram | shift_register
    #[arg(long)]
    delay: Option<String>,
    #[arg(long)]
    replicas: Option<usize>,
    #[arg(long)]
    steps: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    q_min: Option<i64>,
    #[arg(long)]
    q_max: Option<i64>,
    #[arg(long)]
    q_tau: Option<u64>,
    #[arg(long)]
    q_beta: Option<i64>,
    /// Constant `V` or linear ramp `START:END`.
    #[arg(long)]
    i0: Option<String>,
    /// Constant `V` or linear ramp `START:END`.
    #[arg(long)]
    n_rnd: Option<String>,
    #[arg(long)]
    alpha: Option<i64>,
    /// Clock frequency in Hz.
    #[arg(long)]
    fclk: Option<f64>,
    /// Power in W.
    #[arg(long)]
    power: Option<f64>,
    /// Resource utilization fraction.
    #[arg(long)]
    utilization: Option<f64>,
    /// Maximum concurrently running trials.
    #[arg(long)]
    workers: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_ramp(s: &str) -> Result<Ramp, Error> {
    let num = |v: &str| {
        v.trim()
            .parse::<i64>()
            .map_err(|_| Error::Config(format!("bad ramp value `{s}`")))
    };
    match s.split_once(':') {
        Some((a, b)) => Ok(Ramp::linear(num(a)?, num(b)?)),
        None => Ok(Ramp::constant(num(s)?)),
    }
}

impl Common {
    fn resolve(&self) -> Result<RunConfig, Error> {
        let mut c = match &self.config {
            Some(p) => {
                let text = fs::read_to_string(p)
                    .map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
                serde_json::from_str(&text)
                    .map_err(|e| Error::Config(format!("{}: {e}", p.display())))?
            }
            None => RunConfig::default(),
        };
        if let Some(v) = &self.instance {
            c.instance = v.clone();
        }
        if let Some(v) = &self.engine {
            c.engine = v.parse()?;
        }
        if let Some(v) = &self.delay {
            c.delay = v.parse::<DelayKind>()?;
        }
        macro_rules! set {
            ($($field:ident => $($dst:ident).+),*) => {$(
                if let Some(v) = self.$field.clone() {
                    c.$($dst).+ = v;
                }
            )*};
        }
        set!(replicas => replicas, steps => steps, trials => trials, seed => seed, q_min => q.q_min,
             q_max => q.q_max, q_tau => q.tau, q_beta => q.beta, alpha => alpha, fclk => f_clk_hz,
             power => power_w, utilization => utilization);
        if let Some(v) = &self.i0 {
            c.i0 = parse_ramp(v)?;
        }
        if let Some(v) = &self.n_rnd {
            c.n_rnd = parse_ramp(v)?;
        }
        if self.workers.is_some() {
            c.workers = self.workers;
        }
        if self.out.is_some() {
            c.out = self.out.clone();
        }
        if c.instance.is_empty() {
            return Err(Error::Config("no instance given (use --instance)".into()));
        }
        c.validate()?;
        Ok(c)
    }
}

fn problem(config: &RunConfig) -> Result<Problem, Error> {
    Problem::from_instance(load_instance(&config.instance)?)
}

fn write_out(dir: &Path, name: &str, contents: &str) -> Result<(), Error> {
    fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn emit(config: &RunConfig, name: &str, contents: &str) -> Result<(), Error> {
    match &config.out {
        Some(dir) => write_out(dir, name, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn cmd_run(config: &RunConfig) -> Result<(), Error> {
    let p = problem(config)?;
    let (records, summary) = run_trials(config, &p)?;
    if let Some(dir) = &config.out {
        write_out(dir, "trials.csv", &trials_csv(&records))?;
        write_out(
            dir,
            "summary.json",
            &pretty(&run_json(config, &p, &records, &summary)),
        )?;
    }
    let norm = summary
        .normalized_mean
        .map(|v| format!(" normalized={v:.4}"))
        .unwrap_or_default();
    let lat = summary
        .mean_latency_s
        .map(|v| format!(" latency={:.3}ms", v * 1e3))
        .unwrap_or_default();
    println!(
        "{} {} R={} steps={} trials={}: mean={:.2} std={:.2} max={}{norm}{lat}",
        p.name,
        config.engine,
        config.replicas,
        config.steps,
        config.trials,
        summary.mean,
        summary.std,
        summary.max
    );
    Ok(())
}

fn cmd_sweep(
    config: &RunConfig,
    replicas: Option<&[usize]>,
    steps: Option<&[u64]>,
) -> Result<(), Error> {
    let p = problem(config)?;
    let rows = match (replicas, steps) {
        (Some(r), _) => sweep_replicas(config, &p, r)?,
        (_, Some(s)) => sweep_steps(config, &p, s)?,
        _ => unreachable!(),
    };
    emit(config, "sweep.csv", &sweep_csv(&rows))?;
    for (r, s, m) in sweep_means(&rows) {
        let norm = p
            .best_known()
            .map(|b| format!(" normalized={:.4}", m / b as f64))
            .unwrap_or_default();
        eprintln!("R={r} steps={s}: mean={m:.2}{norm}");
    }
    Ok(())
}

fn cmd_compare(
    a: &RunConfig,
    engine: Option<&str>,
    steps: Option<u64>,
    replicas: Option<usize>,
) -> Result<(), Error> {
    let mut b = a.clone();
    if let Some(e) = engine {
        b.engine = e.parse::<Engine>()?;
    }
    b.steps = steps.unwrap_or(b.steps);
    b.replicas = replicas.unwrap_or(b.replicas);
    b.validate()?;
    let p = problem(a)?;
    let c = compare(a, &b, &p)?;
    let csv = compare_csv(&c);
    if let Some(dir) = &a.out {
        let json = serde_json::to_value(&c).expect("serializable");
        write_out(dir, "compare.json", &pretty(&json))?;
        write_out(dir, "compare.csv", &csv)?;
    }
    print!("{csv}");
    Ok(())
}

fn cmd_info(instance: Option<&str>) -> Result<(), Error> {
    let Some(source) = instance else {
        print!("{}", pretty(&registry_json()));
        return Ok(());
    };
    let inst = load_instance(source)?;
    let p = Problem::from_instance(inst)?;
    let resources = |kind| {
        let r = resource_scaling_model(p.model.n() as u64, kind, p.model.weight_bits());
        serde_json::to_value(r).expect("serializable")
    };
    let info = serde_json::json!({
        "name": p.name,
        "nodes": p.graph.n_nodes(),
        "edges": p.graph.edges().len(),
        "total_weight": p.graph.total_weight(),
        "max_degree": p.model.max_degree(),
        "best_known": p.best_known(),
        "resources": {
            "dual_bram": resources(DelayKind::DualBram),
            "shift_register": resources(DelayKind::ShiftRegister),
        },
    });
    print!("{}", pretty(&info));
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) | Error::Parse { .. } | Error::Lookup(_) => 3,
        Error::Integrity(_) => 4,
        _ => 2,
    }
}

fn dispatch(cli: Cli) -> Result<(), Error> {
    match cli.cmd {
        Command::Run(c) => cmd_run(&c.resolve()?),
        Command::SweepReplicas { common, values } => {
            cmd_sweep(&common.resolve()?, Some(&values), None)
        }
        Command::SweepSteps { common, values } => {
            cmd_sweep(&common.resolve()?, None, Some(&values))
        }
        Command::Compare {
            common,
            b_engine,
            b_steps,
            b_replicas,
        } => cmd_compare(&common.resolve()?, b_engine.as_deref(), b_steps, b_replicas),
        Command::Info { instance } => cmd_info(instance.as_deref()),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
