//! Rank/select over a zero-one vector in `O(t (1 + lg(s/t)))` bits.
//!
//! Vectors with at most one one per four positions store the one-positions
//! with a high/low split (Elias–Fano): the low `l = floor(lg(s/t))` bits of
//! every position are packed verbatim and the high parts are written in
//! unary into a [`RankSelectBits`]. Denser vectors keep the plain bits with
//! a rank directory, which is within a constant factor of the same bound.
//!
//! Positions are 0-based: `rank1(i)` counts the ones among the first `i`
//! positions and `select1(k)` returns the position of the `(k+1)`-th one.

use super::bits::{BitBuf, PackedInts};
use super::rank_select::RankSelectBits;
use crate::persist::{Persist, Reader, Writer};
use crate::{Error, Result};

/// Multiplier `c` in the budget `c * t * (1 + lg(s/t)) + SPARSE_OVERHEAD_WORDS * 64`.
pub const SPARSE_BITS_CONSTANT: f64 = 5.0;
/// Constant word overhead allowed on top of the per-one budget.
pub const SPARSE_OVERHEAD_WORDS: u64 = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    Empty,
    Dense(RankSelectBits),
    Split {
        low_width: u32,
        low: PackedInts,
        high: RankSelectBits,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseBitVector {
    len: usize,
    ones: usize,
    repr: Repr,
}

impl SparseBitVector {
    /// Builds from explicit bits.
    pub fn from_bools(bits: &[bool]) -> Self {
        let positions: Vec<usize> = bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect();
        Self::from_positions(bits.len(), &positions)
    }

    /// Builds a vector of length `len` whose ones sit at the strictly
    /// increasing `positions`.
    pub fn from_positions(len: usize, positions: &[usize]) -> Self {
        debug_assert!(positions.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(positions.last().is_none_or(|&p| p < len));
        let ones = positions.len();
        let repr = if ones == 0 {
            Repr::Empty
        } else if ones * 4 > len {
            let mut bits = BitBuf::zeros(len);
            for &p in positions {
                bits.set(p);
            }
            Repr::Dense(RankSelectBits::build(bits, false))
        } else {
            let low_width = (len / ones).ilog2();
            let mut low = PackedInts::with_width(low_width);
            let high_len = ones + (len >> low_width) + 1;
            let mut high = BitBuf::zeros(high_len);
            let mask = (1u64 << low_width) - 1;
            for (k, &p) in positions.iter().enumerate() {
                low.push(p as u64 & mask);
                high.set((p >> low_width) + k);
            }
            Repr::Split {
                low_width,
                low,
                high: RankSelectBits::new(high),
            }
        };
        Self { len, ones, repr }
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
    pub fn count_ones(&self) -> usize {
        self.ones
    }

    /// Ones among the first `i` positions, `0 <= i <= len`.
    pub fn rank1(&self, i: usize) -> Result<usize> {
        if i > self.len {
            return Err(Error::Range(format!(
                "rank1({i}) on vector of length {}",
                self.len
            )));
        }
        Ok(self.rank(i))
    }

    /// Position of the `(k+1)`-th one, `0 <= k < count_ones()`.
    pub fn select1(&self, k: usize) -> Result<usize> {
        if k >= self.ones {
            return Err(Error::Range(format!(
                "select1({k}) on vector with {} ones",
                self.ones
            )));
        }
        Ok(self.select(k))
    }

    pub fn get(&self, i: usize) -> bool {
        self.rank(i + 1) > self.rank(i)
    }

    #[inline]
    pub(crate) fn rank(&self, i: usize) -> usize {
        debug_assert!(i <= self.len);
        match &self.repr {
            Repr::Empty => 0,
            Repr::Dense(bits) => bits.rank1(i),
            Repr::Split {
                low_width,
                low,
                high,
            } => {
                if i >= self.len {
                    return self.ones;
                }
                let h = i >> low_width;
                let start = if h == 0 {
                    0
                } else {
                    high.select0(h - 1) - (h - 1)
                };
                let end = high.select0(h) - h;
                let target = i as u64 & ((1u64 << low_width) - 1);
                // first k in [start, end) whose low part is >= target
                let (mut lo, mut hi) = (start, end);
                while lo < hi {
                    let mid = (lo + hi) / 2;
                    if low.get(mid) < target {
                        lo = mid + 1;
                    } else {
                        hi = mid;
                    }
                }
                lo
            }
        }
    }

    #[inline]
    pub(crate) fn select(&self, k: usize) -> usize {
        debug_assert!(k < self.ones);
        match &self.repr {
            Repr::Empty => unreachable!("select on empty vector"),
            Repr::Dense(bits) => bits.select1(k),
            Repr::Split {
                low_width,
                low,
                high,
            } => ((high.select1(k) - k) << low_width) | low.get(k) as usize,
        }
    }

    pub fn is_split_encoded(&self) -> bool {
        matches!(self.repr, Repr::Split { .. })
    }

    pub fn size_bits(&self) -> u64 {
        let payload = match &self.repr {
            Repr::Empty => 0,
            Repr::Dense(b) => b.size_bits(),
            Repr::Split { low, high, .. } => 32 + low.size_bits() + high.size_bits(),
        };
        // len + ones + tag
        payload + 2 * 64 + 8
    }

    /// Budget `c * t * (1 + lg(s/t)) + O(1)` words, as a bit count.
    pub fn bit_budget(len: usize, ones: usize) -> f64 {
        let overhead = (SPARSE_OVERHEAD_WORDS * 64) as f64;
        if ones == 0 {
            return overhead;
        }
        let t = ones as f64;
        let s = len as f64;
        SPARSE_BITS_CONSTANT * t * (1.0 + (s / t).log2()) + overhead
    }
}

impl Persist for SparseBitVector {
    fn write(&self, w: &mut Writer) {
        w.put_u64(self.len as u64);
        w.put_u64(self.ones as u64);
        match &self.repr {
            Repr::Empty => w.put_u8(0),
            Repr::Dense(b) => {
                w.put_u8(1);
                b.bits().write(w);
            }
            Repr::Split {
                low_width,
                low,
                high,
            } => {
                w.put_u8(2);
                w.put_u32(*low_width);
                low.write(w);
                high.bits().write(w);
            }
        }
    }

    fn read(r: &mut Reader) -> Result<Self> {
        let len = r.get_u64()? as usize;
        let ones = r.get_u64()? as usize;
        let repr = match r.get_u8()? {
            0 => Repr::Empty,
            1 => Repr::Dense(RankSelectBits::build(BitBuf::read(r)?, false)),
            2 => {
                let low_width = r.get_u32()?;
                let low = PackedInts::read(r)?;
                let high = RankSelectBits::new(BitBuf::read(r)?);
                if low_width >= 64 || low.len() != ones || high.count_ones() != ones {
                    return Err(r.corrupt("sparse bit vector"));
                }
                Repr::Split {
                    low_width,
                    low,
                    high,
                }
            }
            _ => return Err(r.corrupt("sparse bit vector tag")),
        };
        let v = Self { len, ones, repr };
        if let Repr::Dense(b) = &v.repr {
            if b.len() != len || b.count_ones() != ones {
                return Err(r.corrupt("dense bit vector"));
            }
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive_rank(bits: &[bool], i: usize) -> usize {
        bits[..i].iter().filter(|&&b| b).count()
    }

    fn check_against_scan(bits: &[bool]) {
        let v = SparseBitVector::from_bools(bits);
        assert_eq!(v.len(), bits.len());
        let mut k = 0;
        for i in 0..=bits.len() {
            assert_eq!(v.rank1(i).unwrap(), naive_rank(bits, i), "rank1({i})");
            if i < bits.len() && bits[i] {
                assert_eq!(v.select1(k).unwrap(), i, "select1({k})");
                k += 1;
            }
        }
        assert_eq!(v.count_ones(), k);
        assert!(v.select1(k).is_err());
        assert!(v.rank1(bits.len() + 1).is_err());
    }

    #[test]
    fn small_fixture() {
        let x = [true, false, true, true, false];
        let v = SparseBitVector::from_bools(&x);
        assert_eq!((v.len(), v.count_ones()), (5, 3));
        // ones among positions 1..=4 (1-based) is 3
        assert_eq!(v.rank1(4).unwrap(), 3);
        assert_eq!(v.rank1(1).unwrap(), 1);
        // second one sits at 1-based position 3
        assert_eq!(v.select1(1).unwrap() + 1, 3);
        let single = SparseBitVector::from_bools(&[true]);
        assert_eq!(single.select1(0).unwrap(), 0);
        let zeros = SparseBitVector::from_bools(&[false; 5]);
        assert_eq!(zeros.rank1(5).unwrap(), 0);
    }

    #[test]
    fn empty_vector() {
        let v = SparseBitVector::from_bools(&[]);
        assert_eq!((v.len(), v.count_ones()), (0, 0));
        assert_eq!(v.rank1(0).unwrap(), 0);
        assert!(v.select1(0).is_err());
    }

    #[test]
    fn exhaustive_up_to_twelve_bits() {
        for len in 0..=12usize {
            for mask in 0u32..(1 << len) {
                let bits: Vec<bool> = (0..len).map(|i| mask >> i & 1 == 1).collect();
                check_against_scan(&bits);
            }
        }
    }

    #[test]
    fn random_ten_thousand_bits_both_regimes() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for &p in &[0.001, 0.02, 0.2, 0.26, 0.6] {
            let bits: Vec<bool> = (0..10_000).map(|_| rng.gen_bool(p)).collect();
            check_against_scan(&bits);
        }
    }

    #[test]
    fn size_within_budget() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &s in &[1usize << 10, 1 << 14, 1 << 18] {
            for &density in &[0.001, 0.01, 0.1, 0.25, 0.5, 0.9] {
                let bits: Vec<bool> = (0..s).map(|_| rng.gen_bool(density)).collect();
                let v = SparseBitVector::from_bools(&bits);
                let budget = SparseBitVector::bit_budget(s, v.count_ones());
                assert!(
                    (v.size_bits() as f64) <= budget,
                    "s={s} t={} size={} budget={budget}",
                    v.count_ones(),
                    v.size_bits()
                );
            }
        }
    }

    proptest! {
        #[test]
        fn select_inverts_rank(bits in proptest::collection::vec(any::<bool>(), 0..600)) {
            let v = SparseBitVector::from_bools(&bits);
            for k in 0..v.count_ones() {
                let p = v.select1(k).unwrap();
                prop_assert!(bits[p]);
                prop_assert_eq!(v.rank1(p + 1).unwrap(), k + 1);
                if k > 0 {
                    prop_assert!(v.select1(k - 1).unwrap() < p);
                }
            }
        }
    }
}
