// SPDX-License-Identifier: Apache-2.0
//! Timing, energy and resource accounting for the spin-serial schedule.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Clock frequency of the reference ZC706 build (imported constant).
pub const REFERENCE_F_CLK_HZ: f64 = 166e6;
/// Measured power of the reference dual-BRAM build (imported constant).
pub const REFERENCE_POWER_W: f64 = 0.091;
/// `max{LUT%, FF%, BRAM%}` of the reference dual-BRAM build (imported constant).
pub const REFERENCE_UTILIZATION: f64 = 0.199;

/// Cycles in one step when every spin has `k` nonzero couplings: `N·(k+1)`.
pub fn cycles_per_step(n: u64, k: u64) -> u64 {
    n * (k + 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleReport {
    pub total_cycles: u64,
    pub cycles_per_step: u64,
    pub f_clk_hz: f64,
    pub latency_s: f64,
    pub power_w: f64,
    pub energy_j: f64,
    pub utilization: f64,
    /// Area-delay product, `utilization × latency`, in seconds.
    pub adp_s: f64,
}

pub fn estimate_report(
    total_cycles: u64,
    f_clk_hz: f64,
    power_w: f64,
    utilization: f64,
) -> Result<CycleReport> {
    if !f_clk_hz.is_finite() || f_clk_hz <= 0.0 {
        return Err(Error::Config(format!(
            "clock frequency must be positive, got {f_clk_hz}"
        )));
    }
    let latency_s = total_cycles as f64 / f_clk_hz;
    Ok(CycleReport {
        total_cycles,
        cycles_per_step: 0,
        f_clk_hz,
        latency_s,
        power_w,
        energy_j: power_w * latency_s,
        utilization,
        adp_s: utilization * latency_s,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DelayKind {
    DualBram,
    ShiftRegister,
}

impl std::str::FromStr for DelayKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dual_bram" | "dual-bram" => Ok(DelayKind::DualBram),
            "shift_register" | "shift-register" => Ok(DelayKind::ShiftRegister),
            other => Err(Error::Config(format!("unknown delay kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FanoutClass {
    Constant,
    LinearInN,
}

/// Parametric resource estimate for one replica's spin-state delay line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceEstimate {
    pub delay_registers: u64,
    /// Delay-line storage in block RAM (two banks of `N` one-bit words).
    pub delay_bram_bits: u64,
    /// Weight-matrix storage, `N² × weight_bits`.
    pub j_storage_bits: u64,
    pub fanout: FanoutClass,
}

/// Registers of the dual-BRAM delay control (bank parity, output latches);
/// independent of `N`.
pub const DUAL_BRAM_DELAY_REGISTERS: u64 = 4;

pub fn resource_scaling_model(n: u64, kind: DelayKind, weight_bits: u8) -> ResourceEstimate {
    let j_storage_bits = n * n * weight_bits as u64;
    match kind {
        DelayKind::ShiftRegister => ResourceEstimate {
            delay_registers: 3 * n,
            delay_bram_bits: 0,
            j_storage_bits,
            fanout: FanoutClass::LinearInN,
        },
        DelayKind::DualBram => ResourceEstimate {
            delay_registers: DUAL_BRAM_DELAY_REGISTERS,
            delay_bram_bits: 2 * n,
            j_storage_bits,
            fanout: FanoutClass::Constant,
        },
    }
}

/// Bits needed to keep only the final replicas, one bit per spin.
pub fn final_replica_memory_bits(n: u64, replicas: u64) -> u64 {
    n * replicas
}
