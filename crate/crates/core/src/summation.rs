//! Pairwise (cascade) summation with O(log n) state.
//!
//! Partial sums are combined like a binary counter, so the rounding error of
//! the total grows as O(log n) instead of O(n) for naive accumulation.

use crate::Real;

const BLOCK: usize = 8;
const LEVELS: usize = 64;

#[derive(Debug, Clone)]
pub struct PairwiseSum<T> {
    block: T,
    block_len: usize,
    // levels[i] holds the sum of 2^i blocks when occupied[i] is set
    levels: [T; LEVELS],
    occupied: u64,
}

impl<T: Real> Default for PairwiseSum<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> PairwiseSum<T> {
    pub fn new() -> Self {
        Self {
            block: T::zero(),
            block_len: 0,
            levels: [T::zero(); LEVELS],
            occupied: 0,
        }
    }

    pub fn add(&mut self, v: T) {
        self.block = self.block + v;
        self.block_len += 1;
        if self.block_len == BLOCK {
            let mut carry = self.block;
            self.block = T::zero();
            self.block_len = 0;
            let mut level = 0;
            while self.occupied & (1 << level) != 0 {
                carry = self.levels[level] + carry;
                self.occupied &= !(1 << level);
                level += 1;
            }
            self.levels[level] = carry;
            self.occupied |= 1 << level;
        }
    }

    pub fn total(&self) -> T {
        let mut acc = self.block;
        for level in 0..LEVELS {
            if self.occupied & (1 << level) != 0 {
                acc = acc + self.levels[level];
            }
        }
        acc
    }
}

impl<T: Real> Extend<T> for PairwiseSum<T> {
    fn extend<I: IntoIterator<Item = T>>(&mut self, iter: I) {
        for v in iter {
            self.add(v);
        }
    }
}

pub fn pairwise_sum<T: Real, I: IntoIterator<Item = T>>(values: I) -> T {
    let mut acc = PairwiseSum::new();
    acc.extend(values);
    acc.total()
}
