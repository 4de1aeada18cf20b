// SPDX-License-Identifier: Apache-2.0
//! Annealing control signals: replica coupling `Q(t)`, pseudo inverse
//! temperature `I0(t)` and noise magnitude `n_rnd(t)`.
//!
//! All schedule values are integers so that the integer engines and the
//! hardware model see exactly the same controls; floating-point engines use
//! the unrounded interpolation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ising::ReplicaBoundary;

/// Staircase coupling schedule: `Q(t) = min(q_min + ⌊t/τ⌋·β, q_max)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QSchedule {
    pub q_min: i64,
    pub q_max: i64,
    pub tau: u64,
    pub beta: i64,
}

impl QSchedule {
    /// `Q ≡ 0`.
    pub const ZERO: QSchedule = QSchedule {
        q_min: 0,
        q_max: 0,
        tau: 1,
        beta: 0,
    };

    pub fn validate(&self) -> Result<()> {
        if self.q_min > self.q_max {
            return Err(Error::Config(format!(
                "q_min ({}) exceeds q_max ({})",
                self.q_min, self.q_max
            )));
        }
        if self.tau == 0 {
            return Err(Error::Config("tau must be at least 1".into()));
        }
        if self.beta < 0 {
            return Err(Error::Config("beta must be non-negative".into()));
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.q_min == 0 && self.q_max == 0
    }
}

pub fn q_at(schedule: &QSchedule, t: u64) -> i64 {
    let plateaus = (t / schedule.tau) as i128;
    let q = schedule.q_min as i128 + plateaus * schedule.beta as i128;
    q.min(schedule.q_max as i128) as i64
}

/// A control signal that is either constant or ramps linearly over the run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Ramp {
    Constant { value: i64 },
    Linear { start: i64, end: i64 },
}

impl Ramp {
    pub const fn constant(value: i64) -> Self {
        Ramp::Constant { value }
    }

    pub const fn linear(start: i64, end: i64) -> Self {
        Ramp::Linear { start, end }
    }

    /// Integer value at step `t` of `steps`: `start + ⌊(end - start)·t / steps⌋`.
    pub fn at(&self, t: u64, steps: u64) -> i64 {
        match *self {
            Ramp::Constant { value } => value,
            Ramp::Linear { start, end } => {
                if steps == 0 {
                    return start;
                }
                let span = (end - start) as i128 * t.min(steps) as i128;
                start + span.div_euclid(steps as i128) as i64
            }
        }
    }

    /// Unrounded value at step `t` of `steps`.
    pub fn at_f64(&self, t: u64, steps: u64) -> f64 {
        match *self {
            Ramp::Constant { value } => value as f64,
            Ramp::Linear { start, end } => {
                if steps == 0 {
                    return start as f64;
                }
                let frac = t.min(steps) as f64 / steps as f64;
                start as f64 + (end - start) as f64 * frac
            }
        }
    }

    pub fn min_value(&self) -> i64 {
        match *self {
            Ramp::Constant { value } => value,
            Ramp::Linear { start, end } => start.min(end),
        }
    }

    pub fn max_value(&self) -> i64 {
        match *self {
            Ramp::Constant { value } => value,
            Ramp::Linear { start, end } => start.max(end),
        }
    }
}

/// Arithmetic used by the SSQA reference engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Arithmetic {
    /// Fixed-point integers with one random bit (`r = ±1`) per update.
    #[default]
    Integer,
    /// `f64` accumulators with `r` uniform on `[-1, 1)`.
    Float,
}

/// Everything an annealing run needs besides the model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnealParams {
    pub steps: u64,
    pub replicas: usize,
    pub q: QSchedule,
    pub i0: Ramp,
    pub n_rnd: Ramp,
    /// Saturation offset.
    pub alpha: i64,
    /// Replica-coupling delay in steps. Only 1 is supported.
    pub delay: u32,
    pub seed: u64,
    #[serde(default)]
    pub boundary: ReplicaBoundary,
    #[serde(default)]
    pub arithmetic: Arithmetic,
    /// Record the per-step minimum replica energy.
    #[serde(default)]
    pub record_trajectory: bool,
    /// Process replicas of a step on the rayon pool.
    #[serde(default)]
    pub parallel_replicas: bool,
}

/// Defaults chosen by the G11-structure tuning sweep documented in the README.
pub const DEFAULT_Q: QSchedule = QSchedule {
    q_min: 0,
    q_max: 1,
    tau: 5,
    beta: 1,
};
pub const DEFAULT_I0: Ramp = Ramp::Linear { start: 1, end: 6 };
pub const DEFAULT_N_RND: Ramp = Ramp::Constant { value: 2 };

impl Default for AnnealParams {
    fn default() -> Self {
        Self {
            steps: 500,
            replicas: 20,
            q: DEFAULT_Q,
            i0: DEFAULT_I0,
            n_rnd: DEFAULT_N_RND,
            alpha: 1,
            delay: 1,
            seed: 1,
            boundary: ReplicaBoundary::Periodic,
            arithmetic: Arithmetic::Integer,
            record_trajectory: false,
            parallel_replicas: false,
        }
    }
}

impl AnnealParams {
    pub fn validate(&self) -> Result<()> {
        self.q.validate()?;
        if self.replicas == 0 {
            return Err(Error::Config("replica count must be at least 1".into()));
        }
        if self.delay != 1 {
            return Err(Error::Config(format!(
                "replica-coupling delay {} unsupported; only 1 is implemented",
                self.delay
            )));
        }
        if self.i0.min_value() < 1 {
            return Err(Error::Config("I0 must stay at least 1".into()));
        }
        if self.alpha < 0 || self.alpha > self.i0.min_value() {
            return Err(Error::Config(format!(
                "alpha {} must lie in 0..=min I0 ({})",
                self.alpha,
                self.i0.min_value()
            )));
        }
        if self.n_rnd.min_value() < 0 {
            return Err(Error::Config("noise magnitude must be non-negative".into()));
        }
        Ok(())
    }

    pub fn q_at(&self, t: u64) -> i64 {
        q_at(&self.q, t)
    }

    pub fn i0_at(&self, t: u64) -> i64 {
        self.i0.at(t, self.steps)
    }

    pub fn n_rnd_at(&self, t: u64) -> i64 {
        self.n_rnd.at(t, self.steps)
    }

    pub fn i0_at_f64(&self, t: u64) -> f64 {
        self.i0.at_f64(t, self.steps)
    }

    pub fn n_rnd_at_f64(&self, t: u64) -> f64 {
        self.n_rnd.at_f64(t, self.steps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const S: QSchedule = QSchedule {
        q_min: 1,
        q_max: 7,
        tau: 10,
        beta: 2,
    };

    #[test]
    fn staircase_examples() {
        assert_eq!(q_at(&S, 0), 1);
        assert_eq!(q_at(&S, 9), 1);
        assert_eq!(q_at(&S, 10), 3);
        assert_eq!(q_at(&S, 20), 5);
        assert_eq!(q_at(&S, 30), 7);
        assert_eq!(q_at(&S, 40), 7);
        assert_eq!(q_at(&S, u64::MAX), 7);
    }

    #[test]
    fn zero_schedule() {
        assert!(QSchedule::ZERO.is_zero());
        assert_eq!(q_at(&QSchedule::ZERO, 1234), 0);
    }

    #[test]
    fn schedule_validation() {
        assert!(QSchedule {
            q_min: 2,
            q_max: 1,
            tau: 1,
            beta: 0
        }
        .validate()
        .is_err());
        assert!(QSchedule {
            q_min: 0,
            q_max: 1,
            tau: 0,
            beta: 0
        }
        .validate()
        .is_err());
        assert!(QSchedule {
            q_min: 0,
            q_max: 1,
            tau: 1,
            beta: -1
        }
        .validate()
        .is_err());
        assert!(S.validate().is_ok());
    }

    #[test]
    fn ramps() {
        let c = Ramp::constant(64);
        assert_eq!(c.at(0, 500), 64);
        assert_eq!(c.at(499, 500), 64);
        let l = Ramp::linear(8, 64);
        assert_eq!(l.at(0, 500), 8);
        assert_eq!(l.at(250, 500), 36);
        assert_eq!(l.at_f64(250, 500), 36.0);
        assert_eq!(l.at(499, 500), 63);
        let down = Ramp::linear(10, 2);
        assert_eq!(down.at(1, 3), 7);
        assert!((down.at_f64(1, 3) - 7.333_333).abs() < 1e-5);
    }

    #[test]
    fn params_validation() {
        let ok = AnnealParams::default();
        assert!(ok.validate().is_ok());
        assert!(AnnealParams {
            replicas: 0,
            ..ok.clone()
        }
        .validate()
        .is_err());
        assert!(AnnealParams {
            delay: 2,
            ..ok.clone()
        }
        .validate()
        .is_err());
        assert!(AnnealParams {
            i0: Ramp::constant(0),
            ..ok.clone()
        }
        .validate()
        .is_err());
        assert!(AnnealParams {
            alpha: 5,
            ..ok.clone()
        }
        .validate()
        .is_err());
        assert!(AnnealParams {
            n_rnd: Ramp::constant(-1),
            ..ok.clone()
        }
        .validate()
        .is_err());
    }

    #[test]
    fn params_json_round_trip() {
        let p = AnnealParams::default();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<AnnealParams>(&s).unwrap(), p);
    }

    proptest! {
        #[test]
        fn staircase_is_monotone_and_bounded(
            q_min in -20i64..20, extra in 0i64..40, tau in 1u64..50, beta in 0i64..5, t in 0u64..5000,
        ) {
            let s = QSchedule { q_min, q_max: q_min + extra, tau, beta };
            let a = q_at(&s, t);
            let b = q_at(&s, t + 1);
            prop_assert!(a <= b);
            prop_assert!(a >= s.q_min && a <= s.q_max);
            // constant on each plateau
            let start = (t / tau) * tau;
            prop_assert_eq!(q_at(&s, start), a);
            prop_assert_eq!(q_at(&s, start + tau - 1), a);
        }
    }
}
