// SPDX-License-Identifier: Apache-2.0
//! 64-bit xorshift generator and per-replica stream derivation.
//!
//! The generator uses Marsaglia's `(13, 7, 17)` shift triple (left, right,
//! left). Every engine in this crate draws from the same streams, so the
//! reference solver and the hardware model consume identical bits for a
//! given seed.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct XorShift64 {
    state: u64,
}

impl XorShift64 {
    pub fn new(seed: u64) -> Result<Self> {
        if seed == 0 {
            return Err(Error::ZeroState);
        }
        Ok(Self { state: seed })
    }

    pub fn state(&self) -> u64 {
        self.state
    }

    /// Advances the state and returns it as the output word.
    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.state = x;
        x
    }
}

/// Functional form of one generator step.
pub fn xorshift_next(state: u64) -> Result<(u64, u64)> {
    let mut g = XorShift64::new(state)?;
    let out = g.next_u64();
    Ok((g.state, out))
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const ZERO_REPLACEMENT: u64 = 0x2545_F491_4F6C_DD1D;

fn splitmix64_finalize(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for stream `index` of a run: the splitmix64 finalizer applied to
/// `seed + (index + 1)·γ`. The finalizer is a bijection, so distinct indices
/// give distinct states; the single preimage of zero is remapped to a fixed
/// nonzero constant.
pub fn stream_seed(seed: u64, index: u64) -> u64 {
    let z =
        splitmix64_finalize(seed.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)));
    if z == 0 {
        ZERO_REPLACEMENT
    } else {
        z
    }
}

/// Bit-serial view of a xorshift stream: bits are consumed LSB-first from
/// successive 64-bit output words.
#[derive(Debug, Clone)]
pub struct BitStream {
    gen: XorShift64,
    word: u64,
    left: u32,
}

impl BitStream {
    pub fn new(gen: XorShift64) -> Self {
        Self {
            gen,
            word: 0,
            left: 0,
        }
    }

    /// Stream `index` of the run seeded with `seed`.
    pub fn for_stream(seed: u64, index: u64) -> Self {
        // stream_seed never returns zero
        Self::new(XorShift64 {
            state: stream_seed(seed, index),
        })
    }

    #[inline]
    pub fn next_bit(&mut self) -> bool {
        if self.left == 0 {
            self.word = self.gen.next_u64();
            self.left = 64;
        }
        let b = self.word & 1 == 1;
        self.word >>= 1;
        self.left -= 1;
        b
    }

    /// `+1` for a set bit, `-1` otherwise.
    #[inline]
    pub fn next_sign(&mut self) -> i8 {
        if self.next_bit() {
            1
        } else {
            -1
        }
    }

    /// Uniform on `[-1, 1)` from the top 53 bits of a fresh output word.
    /// Pending bits of the current word are left untouched.
    #[inline]
    pub fn next_symmetric_unit(&mut self) -> f64 {
        let u = (self.gen.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        2.0 * u - 1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Straight-line reference for the (13, 7, 17) triple.
    fn reference_step(x: u64) -> u64 {
        let a = x ^ (x << 13);
        let b = a ^ (a >> 7);
        b ^ (b << 17)
    }

    #[test]
    fn golden_outputs_from_seed_one() {
        // Computed once with an independent script and frozen.
        const GOLDEN: [u64; 5] = [
            0x0000_0000_4082_2041,
            0x1000_4106_0C01_1441,
            0x9B1E_842F_6E86_2629,
            0xF554_F503_555D_8025,
            0x860C_1FB0_9059_9265,
        ];
        let mut x = 1u64;
        for &g in &GOLDEN {
            x = reference_step(x);
            assert_eq!(x, g);
        }
        let mut gen = XorShift64::new(1).unwrap();
        for &g in &GOLDEN {
            assert_eq!(gen.next_u64(), g);
        }
    }

    #[test]
    fn zero_seed_rejected() {
        assert_eq!(XorShift64::new(0), Err(Error::ZeroState));
        assert_eq!(xorshift_next(0), Err(Error::ZeroState));
    }

    #[test]
    fn functional_step_is_deterministic() {
        let a = xorshift_next(0xDEAD_BEEF).unwrap();
        let b = xorshift_next(0xDEAD_BEEF).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.0, a.1);
        let c = xorshift_next(a.0).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn never_reaches_zero() {
        let mut gen = XorShift64::new(1).unwrap();
        for _ in 0..1_000_000 {
            assert_ne!(gen.next_u64(), 0);
        }
    }

    #[test]
    fn streams_distinct_and_nonzero() {
        for seed in [0u64, 1, 42, u64::MAX] {
            let seeds: Vec<_> = (0..256).map(|k| stream_seed(seed, k)).collect();
            let uniq: std::collections::HashSet<_> = seeds.iter().collect();
            assert_eq!(uniq.len(), seeds.len());
            assert!(seeds.iter().all(|&s| s != 0));
        }
    }

    #[test]
    fn bits_are_lsb_first() {
        let mut gen = XorShift64::new(7).unwrap();
        let w = gen.next_u64();
        let mut bs = BitStream::new(XorShift64::new(7).unwrap());
        for i in 0..64 {
            assert_eq!(bs.next_bit(), w >> i & 1 == 1);
        }
        assert_eq!(bs.next_bit(), gen.next_u64() & 1 == 1);
    }

    #[test]
    fn symmetric_unit_range() {
        let mut bs = BitStream::for_stream(3, 0);
        let mut sum = 0.0;
        for _ in 0..100_000 {
            let u = bs.next_symmetric_unit();
            assert!((-1.0..1.0).contains(&u));
            sum += u;
        }
        assert!((sum / 100_000.0).abs() < 0.01);
    }
}
