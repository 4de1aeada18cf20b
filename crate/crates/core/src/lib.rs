// SPDX-License-Identifier: Apache-2.0
//! p-bit based stochastic simulated quantum annealing (SSQA) for Ising
//! models, with a cycle-accurate model of a spin-serial, replica-parallel
//! accelerator and a G-set MAX-CUT benchmark harness.

pub mod bench;
pub mod error;
pub mod fixed;
pub mod gset;
pub mod hw;
pub mod ising;
pub mod rng;
pub mod schedule;
pub mod solver;

pub use error::{Error, Result};
