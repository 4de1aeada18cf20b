// SPDX-License-Identifier: Apache-2.0
//! Cycle-accurate model of the spin-serial, replica-parallel SSQA
//! accelerator: spin gates, delay lines, scheduler and cost accounting.

pub mod delay;
pub mod report;
pub mod sim;

pub use delay::{DelayLine, DualBramDelay, ShiftRegDelay};
pub use report::{
    cycles_per_step, estimate_report, final_replica_memory_bits, resource_scaling_model,
    CycleReport, DelayKind, FanoutClass, ResourceEstimate,
};
pub use sim::{
    run_hw, run_hw_observed, schedule_cycles_per_step, HwOptions, HwSim, HwStepView, SpinGateState,
};
