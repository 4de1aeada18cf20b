// SPDX-License-Identifier: Apache-2.0
//! Delay lines holding the `t` and `t-1` planes of one spin gate.
//!
//! Both implementations follow the same cycle protocol: reads issued during
//! a cycle observe the memory as it was at the start of the cycle, writes
//! are committed by [`DelayLine::clock`], and [`DelayLine::end_step`] makes
//! the plane written during the step the new `t` plane.

use std::collections::VecDeque;

use crate::error::{Error, Result};

pub trait DelayLine<T: Copy> {
    fn depth(&self) -> usize;

    /// Initial contents before the first step.
    fn load(&mut self, plane_t: &[T], plane_tm1: &[T]) -> Result<()>;

    /// `σ(t)` at `addr`, for the interaction fetch.
    fn read_t(&mut self, addr: usize) -> Result<T>;

    /// `σ(t-1)` at `addr`, for the replica-coupling term.
    fn read_tminus1(&mut self, addr: usize) -> Result<T>;

    /// Stages `σ(t+1)` at `addr`; visible after the step boundary.
    fn write(&mut self, addr: usize, value: T) -> Result<()>;

    /// Ends a clock cycle, committing staged writes.
    fn clock(&mut self);

    /// Annealing-step boundary.
    fn end_step(&mut self) -> Result<()>;

    /// Debug view of the current `t` plane; consumes no cycles.
    fn snapshot_t(&self) -> Vec<T>;

    /// Which bank (or stage set) currently holds the `t` plane.
    fn parity(&self) -> u8;
}

fn check_addr(addr: usize, depth: usize) -> Result<()> {
    if addr >= depth {
        return Err(Error::Address { addr, depth });
    }
    Ok(())
}

fn check_plane(len: usize, depth: usize) -> Result<()> {
    if len != depth {
        return Err(Error::Dimension {
            expected: depth,
            got: len,
        });
    }
    Ok(())
}

/// Two alternating memory banks.
///
/// With `p` the parity, bank `p` holds `σ(t)` and is read at the interaction
/// index (`countbit`); bank `1-p` holds `σ(t-1)`, is read at the spin index
/// (`countspin`) and receives `σ(t+1)` at the same address on the update
/// cycle. Reads happen before writes, so the `t-1` value of a spin is still
/// observable in the cycle that overwrites it. Parity flips every step.
#[derive(Debug, Clone)]
pub struct DualBramDelay<T> {
    banks: [Vec<T>; 2],
    parity: u8,
    pending: Vec<(usize, T)>,
}

impl<T: Copy + Default> DualBramDelay<T> {
    pub fn new(depth: usize) -> Self {
        Self {
            banks: [vec![T::default(); depth], vec![T::default(); depth]],
            parity: 0,
            pending: Vec::new(),
        }
    }

    fn t_bank(&self) -> usize {
        self.parity as usize
    }

    fn tm1_bank(&self) -> usize {
        1 - self.parity as usize
    }
}

impl<T: Copy + Default> DelayLine<T> for DualBramDelay<T> {
    fn depth(&self) -> usize {
        self.banks[0].len()
    }

    fn load(&mut self, plane_t: &[T], plane_tm1: &[T]) -> Result<()> {
        check_plane(plane_t.len(), self.depth())?;
        check_plane(plane_tm1.len(), self.depth())?;
        let (t, tm1) = (self.t_bank(), self.tm1_bank());
        self.banks[t].copy_from_slice(plane_t);
        self.banks[tm1].copy_from_slice(plane_tm1);
        self.pending.clear();
        Ok(())
    }

    fn read_t(&mut self, addr: usize) -> Result<T> {
        check_addr(addr, self.depth())?;
        Ok(self.banks[self.t_bank()][addr])
    }

    fn read_tminus1(&mut self, addr: usize) -> Result<T> {
        check_addr(addr, self.depth())?;
        Ok(self.banks[self.tm1_bank()][addr])
    }

    fn write(&mut self, addr: usize, value: T) -> Result<()> {
        check_addr(addr, self.depth())?;
        self.pending.push((addr, value));
        Ok(())
    }

    fn clock(&mut self) {
        let bank = self.tm1_bank();
        for (addr, v) in self.pending.drain(..) {
            self.banks[bank][addr] = v;
        }
    }

    fn end_step(&mut self) -> Result<()> {
        self.clock();
        self.parity ^= 1;
        Ok(())
    }

    fn snapshot_t(&self) -> Vec<T> {
        self.banks[self.t_bank()].clone()
    }

    fn parity(&self) -> u8 {
        self.parity
    }
}

/// Three register blocks of depth `N` holding `σ(t+1)`, `σ(t)` and `σ(t-1)`.
///
/// The first block shifts in new states serially (`en_1`); the second and
/// third blocks rotate to bring the addressed register to their tap (`en_2`).
/// At the step boundary the second block is loaded into the third and the
/// first into the second.
#[derive(Debug, Clone)]
pub struct ShiftRegDelay<T> {
    stage_next: VecDeque<T>,
    stage_t: VecDeque<T>,
    stage_tm1: VecDeque<T>,
    /// Logical index currently at the tap of `stage_t` / `stage_tm1`.
    tap_t: usize,
    tap_tm1: usize,
    written: usize,
    pending: Option<(usize, T)>,
    shifts: u64,
    step_parity: u8,
}

impl<T: Copy + Default> ShiftRegDelay<T> {
    pub fn new(depth: usize) -> Self {
        let z = || VecDeque::from(vec![T::default(); depth]);
        Self {
            stage_next: z(),
            stage_t: z(),
            stage_tm1: z(),
            tap_t: 0,
            tap_tm1: 0,
            written: 0,
            pending: None,
            shifts: 0,
            step_parity: 0,
        }
    }

    /// Register shift operations performed so far (all blocks).
    pub fn shift_count(&self) -> u64 {
        self.shifts
    }

    fn rotate_to(block: &mut VecDeque<T>, tap: &mut usize, addr: usize, shifts: &mut u64) {
        let n = block.len();
        let dist = (addr + n - *tap) % n;
        block.rotate_left(dist);
        *shifts += dist as u64;
        *tap = addr;
    }

    fn aligned(block: &VecDeque<T>, tap: usize) -> VecDeque<T> {
        let mut b = block.clone();
        b.rotate_right(tap);
        b
    }
}

impl<T: Copy + Default> DelayLine<T> for ShiftRegDelay<T> {
    fn depth(&self) -> usize {
        self.stage_t.len()
    }

    fn load(&mut self, plane_t: &[T], plane_tm1: &[T]) -> Result<()> {
        check_plane(plane_t.len(), self.depth())?;
        check_plane(plane_tm1.len(), self.depth())?;
        self.stage_t = plane_t.iter().copied().collect();
        self.stage_tm1 = plane_tm1.iter().copied().collect();
        self.tap_t = 0;
        self.tap_tm1 = 0;
        self.written = 0;
        self.pending = None;
        Ok(())
    }

    fn read_t(&mut self, addr: usize) -> Result<T> {
        check_addr(addr, self.depth())?;
        Self::rotate_to(&mut self.stage_t, &mut self.tap_t, addr, &mut self.shifts);
        Ok(self.stage_t[0])
    }

    fn read_tminus1(&mut self, addr: usize) -> Result<T> {
        check_addr(addr, self.depth())?;
        Self::rotate_to(
            &mut self.stage_tm1,
            &mut self.tap_tm1,
            addr,
            &mut self.shifts,
        );
        Ok(self.stage_tm1[0])
    }

    fn write(&mut self, addr: usize, value: T) -> Result<()> {
        check_addr(addr, self.depth())?;
        if addr != self.written || self.pending.is_some() {
            return Err(Error::Config(format!(
                "shift-register delay accepts serial writes only: expected address {}, got {addr}",
                self.written
            )));
        }
        self.pending = Some((addr, value));
        Ok(())
    }

    fn clock(&mut self) {
        if let Some((_, v)) = self.pending.take() {
            self.stage_next.pop_front();
            self.stage_next.push_back(v);
            self.written += 1;
            self.shifts += 1;
        }
    }

    fn end_step(&mut self) -> Result<()> {
        self.clock();
        if self.written != self.depth() {
            return Err(Error::Config(format!(
                "step ended after {} of {} serial writes",
                self.written,
                self.depth()
            )));
        }
        self.stage_tm1 = Self::aligned(&self.stage_t, self.tap_t);
        self.stage_t = self.stage_next.clone();
        self.tap_t = 0;
        self.tap_tm1 = 0;
        self.written = 0;
        self.step_parity ^= 1;
        Ok(())
    }

    fn snapshot_t(&self) -> Vec<T> {
        Self::aligned(&self.stage_t, self.tap_t)
            .into_iter()
            .collect()
    }

    fn parity(&self) -> u8 {
        self.step_parity
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn read_before_write_same_address() {
        let mut d = DualBramDelay::<i8>::new(4);
        d.load(&[1, 1, 1, 1], &[-1, -1, -1, -1]).unwrap();
        assert_eq!(d.read_tminus1(2).unwrap(), -1);
        d.write(2, 1).unwrap();
        // same cycle: still the old value
        assert_eq!(d.read_tminus1(2).unwrap(), -1);
        d.clock();
        assert_eq!(d.read_tminus1(2).unwrap(), 1);
        assert_eq!(d.read_t(2).unwrap(), 1);
    }

    #[test]
    fn parity_flip_exposes_written_bank() {
        let mut d = DualBramDelay::<i8>::new(3);
        d.load(&[1, 1, 1], &[1, 1, 1]).unwrap();
        for (a, v) in [(0, -1), (1, 1), (2, -1)] {
            d.write(a, v).unwrap();
            d.clock();
        }
        assert_eq!(d.parity(), 0);
        d.end_step().unwrap();
        assert_eq!(d.parity(), 1);
        assert_eq!(d.snapshot_t(), vec![-1, 1, -1]);
        assert_eq!(d.read_tminus1(0).unwrap(), 1);
    }

    #[test]
    fn address_errors() {
        let mut d = DualBramDelay::<i8>::new(2);
        assert_eq!(d.read_t(2), Err(Error::Address { addr: 2, depth: 2 }));
        assert!(d.write(5, 1).is_err());
        assert!(d.load(&[1], &[1, 1]).is_err());
        let mut s = ShiftRegDelay::<i8>::new(2);
        assert!(s.read_tminus1(2).is_err());
    }

    #[test]
    fn shift_register_shifts_one_plane_per_step() {
        let mut s = ShiftRegDelay::<i8>::new(3);
        s.load(&[1, -1, 1], &[-1, -1, -1]).unwrap();
        assert_eq!(s.read_t(1).unwrap(), -1);
        assert_eq!(s.read_tminus1(2).unwrap(), -1);
        for (a, v) in [(0, 1), (1, 1), (2, -1)] {
            s.write(a, v).unwrap();
            s.clock();
        }
        s.end_step().unwrap();
        assert_eq!(s.snapshot_t(), vec![1, 1, -1]);
        for a in 0..3 {
            assert_eq!(s.read_tminus1(a).unwrap(), [1, -1, 1][a]);
        }
    }

    #[test]
    fn shift_register_rejects_out_of_order_writes() {
        let mut s = ShiftRegDelay::<i8>::new(3);
        assert!(s.write(1, 1).is_err());
        s.write(0, 1).unwrap();
        s.clock();
        assert!(s.end_step().is_err());
    }
}
