//! Prefix sums over a sequence of nonnegative integers.
//!
//! The inclusive prefix sums `P[k]` are turned into the strictly increasing
//! positions `P[k] + k` of a length `s + t` bit vector, so `P[k]` is one
//! select away.

use super::sparse::SparseBitVector;
use crate::persist::{Persist, Reader, Writer};
use crate::{Error, Result};

pub const MONOTONE_BITS_CONSTANT: f64 = 10.0;
pub const MONOTONE_OVERHEAD_WORDS: u64 = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneSequence {
    len: usize,
    total: u64,
    marks: SparseBitVector,
}

impl MonotoneSequence {
    pub fn new(values: &[u64]) -> Self {
        let total: u64 = values.iter().sum();
        let mut positions = Vec::with_capacity(values.len());
        let mut acc = 0u64;
        for (k, &v) in values.iter().enumerate() {
            acc += v;
            positions.push(acc as usize + k);
        }
        let universe = values.len() + total as usize;
        Self {
            len: values.len(),
            total,
            marks: SparseBitVector::from_positions(universe, &positions),
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Sum of the first `i` values, `0 <= i <= len`.
    pub fn prefix(&self, i: usize) -> Result<u64> {
        if i > self.len {
            return Err(Error::Range(format!(
                "prefix({i}) on sequence of length {}",
                self.len
            )));
        }
        Ok(self.prefix_unchecked(i))
    }

    /// Value at 0-based index `i`.
    pub fn lookup(&self, i: usize) -> Result<u64> {
        if i >= self.len {
            return Err(Error::Range(format!(
                "lookup({i}) on sequence of length {}",
                self.len
            )));
        }
        Ok(self.prefix_unchecked(i + 1) - self.prefix_unchecked(i))
    }

    #[inline]
    pub(crate) fn prefix_unchecked(&self, i: usize) -> u64 {
        debug_assert!(i <= self.len);
        if i == 0 {
            0
        } else {
            (self.marks.select(i - 1) - (i - 1)) as u64
        }
    }

    /// Sum of values in the half-open index range `[a, b)`.
    #[inline]
    pub(crate) fn range_sum(&self, a: usize, b: usize) -> u64 {
        debug_assert!(a <= b);
        self.prefix_unchecked(b) - self.prefix_unchecked(a)
    }

    pub fn size_bits(&self) -> u64 {
        self.marks.size_bits() + 2 * 64
    }

    /// Budget `c * s * lg(2 + t/s) + O(1)` words, as a bit count.
    pub fn bit_budget(len: usize, total: u64) -> f64 {
        let overhead =
            ((MONOTONE_OVERHEAD_WORDS + super::sparse::SPARSE_OVERHEAD_WORDS) * 64) as f64;
        if len == 0 {
            return overhead;
        }
        let s = len as f64;
        MONOTONE_BITS_CONSTANT * s * (2.0 + total as f64 / s).log2() + overhead
    }
}

impl Persist for MonotoneSequence {
    fn write(&self, w: &mut Writer) {
        w.put_u64(self.len as u64);
        w.put_u64(self.total);
        self.marks.write(w);
    }

    fn read(r: &mut Reader) -> Result<Self> {
        let len = r.get_u64()? as usize;
        let total = r.get_u64()?;
        let marks = SparseBitVector::read(r)?;
        if marks.count_ones() != len || marks.len() as u64 != len as u64 + total {
            return Err(r.corrupt("monotone sequence"));
        }
        Ok(Self { len, total, marks })
    }
}
