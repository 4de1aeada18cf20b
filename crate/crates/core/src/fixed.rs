// SPDX-License-Identifier: Apache-2.0
//! Fixed-point widths for the integer spin-gate datapath.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ising::IsingModel;
use crate::schedule::AnnealParams;

fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

/// Bits needed for a signed value of magnitude at most `bound`.
fn signed_bits(bound: u64) -> u32 {
    ceil_log2(bound.saturating_add(1)) + 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPointConfig {
    pub weight_bits: u8,
    /// Signed width of the interaction accumulator and of `Is + I`.
    pub acc_bits: u32,
}

impl FixedPointConfig {
    /// Width `weight_bits + ⌈log2(N+1)⌉ + margin`, where the margin covers
    /// the largest noise, coupling and saturation-bound magnitudes of the
    /// run, so the update sum cannot overflow for a valid model.
    pub fn for_run(model: &IsingModel, params: &AnnealParams) -> Self {
        let margin_bound = params.n_rnd.max_value().unsigned_abs()
            + params
                .q
                .q_min
                .unsigned_abs()
                .max(params.q.q_max.unsigned_abs())
            + params.i0.max_value().unsigned_abs();
        let acc_bits = model.weight_bits() as u32
            + ceil_log2(model.n() as u64 + 1)
            + signed_bits(margin_bound);
        Self {
            weight_bits: model.weight_bits(),
            acc_bits: acc_bits.min(63),
        }
    }

    pub fn max(&self) -> i64 {
        (1i64 << (self.acc_bits - 1)) - 1
    }

    pub fn min(&self) -> i64 {
        -(1i64 << (self.acc_bits - 1))
    }

    #[inline]
    pub fn check(&self, value: i64) -> Result<i64> {
        if value < self.min() || value > self.max() {
            return Err(Error::Overflow {
                value,
                bits: self.acc_bits,
            });
        }
        Ok(value)
    }
}
