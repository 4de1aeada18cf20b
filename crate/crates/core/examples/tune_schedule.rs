// SPDX-License-Identifier: Apache-2.0
//! Grid search for the default annealing schedule on G11-like tori.
//!
//! Usage: `cargo run --release -p ssqa-core --example tune_schedule [trials]`
//! Prints one CSV row per grid point, best first.

use rayon::prelude::*;
use ssqa_core::bench::{run_trials, Problem, RunConfig};
use ssqa_core::gset::toroidal_grid;
use ssqa_core::schedule::{QSchedule, Ramp};

fn main() {
    let trials: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(4);
    let problems: Vec<Problem> = [11, 12, 13]
        .iter()
        .map(|&s| {
            Problem::new(format!("torus{s}"), toroidal_grid(50, 16, s).unwrap(), None).unwrap()
        })
        .collect();
    let i0s = [
        Ramp::linear(1, 4),
        Ramp::linear(1, 6),
        Ramp::linear(1, 8),
        Ramp::linear(1, 12),
        Ramp::linear(2, 16),
        Ramp::linear(4, 16),
    ];
    let noises = [
        Ramp::constant(1),
        Ramp::constant(2),
        Ramp::constant(3),
        Ramp::linear(3, 1),
    ];
    let mut grid = Vec::new();
    for q_max in 0..=8 {
        for tau in [1, 5, 10, 25] {
            for i0 in i0s {
                for n_rnd in noises {
                    grid.push((
                        QSchedule {
                            q_min: 0,
                            q_max,
                            tau,
                            beta: 1,
                        },
                        i0,
                        n_rnd,
                    ));
                }
            }
        }
    }
    let mut rows: Vec<(f64, String)> = grid
        .par_iter()
        .map(|&(q, i0, n_rnd)| {
            let cfg = RunConfig {
                q,
                i0,
                n_rnd,
                trials,
                workers: Some(1),
                ..RunConfig::default()
            };
            let mean = problems
                .iter()
                .map(|p| run_trials(&cfg, p).unwrap().1.mean)
                .sum::<f64>()
                / problems.len() as f64;
            let row = format!(
                "{},{},{},{},{mean:.2}",
                q.q_max,
                q.tau,
                ser(&i0),
                ser(&n_rnd)
            );
            (mean, row)
        })
        .collect();
    rows.sort_by(|a, b| b.0.total_cmp(&a.0));
    println!("q_max,tau,i0,n_rnd,mean_cut");
    for (_, r) in rows {
        println!("{r}");
    }
}

fn ser(r: &Ramp) -> String {
    match r {
        Ramp::Constant { value } => value.to_string(),
        Ramp::Linear { start, end } => format!("{start}:{end}"),
    }
}
