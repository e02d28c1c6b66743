//! Range-maximum queries in `O(s)` bits without keeping the source array.
//!
//! Insert the values left to right into a stack, popping every entry that is
//! strictly smaller than the incoming value. Writing the number of pops of
//! each position in unary gives a `<= 2s`-bit code from which the stack depth
//! `d[k]` after inserting position `k` is recovered with one select. The
//! leftmost maximum of `X[i..=j]` is the rightmost position of minimum depth
//! in `[i, j]`, so all comparisons run on depths.
//!
//! Inside a block of `b` positions the same code, with pops capped at the
//! block-local stack size, is the Cartesian tree shape of the block; replaying
//! it answers in-block queries. Whole blocks are combined with a sparse table
//! per superblock (offsets in `lg lg s` bits) and one sparse table over
//! superblocks.

use super::bits::{bits_for, BitBuf, PackedInts};
use super::rank_select::RankSelectBits;
use crate::persist::{Persist, Reader, Writer};
use crate::{Error, Result};

pub const RMQ_BITS_CONSTANT: f64 = 16.0;
pub const RMQ_OVERHEAD_WORDS: u64 = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RangeMaxStructure {
    len: usize,
    block: usize,
    blocks_per_super: usize,
    shapes: BitBuf,
    depth_code: RankSelectBits,
    // inner[(g * (inner_levels)) + (lvl - 1)] for lvl in 1..=inner_levels
    inner_levels: usize,
    inner: PackedInts,
    // top[lvl * supers + s]
    top_levels: usize,
    top: PackedInts,
}

/// Block size used for an array of length `s`.
pub fn rmq_block_size(s: usize) -> usize {
    let lg = if s <= 1 {
        0
    } else {
        (s as u64 - 1).ilog2() as usize + 1
    };
    4.max(lg.div_ceil(4))
}

impl RangeMaxStructure {
    pub fn new<T: Ord>(values: &[T]) -> Self {
        let s = values.len();
        let block = rmq_block_size(s);
        let lg = if s <= 1 {
            1
        } else {
            (s as u64 - 1).ilog2() as usize + 1
        };
        let blocks_per_super = lg.max(1);
        let nblocks = s.div_ceil(block);

        // global pops and unary depth code
        let mut code = BitBuf::new();
        let mut stack: Vec<usize> = Vec::new();
        for (k, v) in values.iter().enumerate() {
            let mut pops = 0;
            while let Some(&top) = stack.last() {
                if values[top] < *v {
                    stack.pop();
                    pops += 1;
                } else {
                    break;
                }
            }
            for _ in 0..pops {
                code.push(false);
            }
            code.push(true);
            stack.push(k);
        }
        let depth_code = RankSelectBits::build(code, false);

        // per-block shapes with capped pops
        let mut shapes = BitBuf::new();
        for g in 0..nblocks {
            let lo = g * block;
            let hi = (lo + block).min(s);
            let start = shapes.len();
            stack.clear();
            for k in lo..hi {
                let mut pops = 0;
                while let Some(&top) = stack.last() {
                    if values[top] < values[k] {
                        stack.pop();
                        pops += 1;
                    } else {
                        break;
                    }
                }
                for _ in 0..pops {
                    shapes.push(false);
                }
                shapes.push(true);
                stack.push(k);
            }
            let used = shapes.len() - start;
            for _ in used..2 * block {
                shapes.push(false);
            }
        }

        let mut me = Self {
            len: s,
            block,
            blocks_per_super,
            shapes,
            depth_code,
            inner_levels: 0,
            inner: PackedInts::with_width(0),
            top_levels: 0,
            top: PackedInts::with_width(0),
        };
        if nblocks <= 1 {
            return me;
        }

        let block_best: Vec<usize> = (0..nblocks)
            .map(|g| me.in_block(g, 0, me.block_len(g) - 1))
            .collect();
        let better = |me: &Self, a: usize, b: usize| -> usize {
            // a, b are block indices
            if me.beats(block_best[b], block_best[a]) {
                b
            } else {
                a
            }
        };

        // inner sparse tables, one per superblock, storing offsets
        let w = blocks_per_super;
        let inner_levels = if w <= 1 { 0 } else { w.ilog2() as usize };
        let mut inner = PackedInts::with_width(bits_for(w as u64));
        if inner_levels > 0 {
            let mut prev: Vec<usize> = (0..nblocks).collect();
            let mut tables: Vec<Vec<usize>> = Vec::with_capacity(inner_levels);
            for lvl in 1..=inner_levels {
                let half = 1 << (lvl - 1);
                let cur: Vec<usize> = (0..nblocks)
                    .map(|g| {
                        let sb_end = ((g / w) + 1) * w;
                        if g + (1 << lvl) <= sb_end.min(nblocks) {
                            better(&me, prev[g], prev[g + half])
                        } else {
                            g
                        }
                    })
                    .collect();
                tables.push(cur.clone());
                prev = cur;
            }
            for g in 0..nblocks {
                let base = (g / w) * w;
                for t in &tables {
                    inner.push((t[g] - base) as u64);
                }
            }
        }

        // top sparse table over superblocks, storing block indices
        let supers = nblocks.div_ceil(w);
        let top_levels = supers.ilog2() as usize + 1;
        let mut top = PackedInts::with_width(bits_for(nblocks as u64));
        let mut level: Vec<usize> = (0..supers)
            .map(|sb| {
                let lo = sb * w;
                let hi = (lo + w).min(nblocks);
                (lo + 1..hi).fold(lo, |acc, g| better(&me, acc, g))
            })
            .collect();
        for lvl in 0..top_levels {
            for &g in &level {
                top.push(g as u64);
            }
            let half = 1 << lvl;
            level = (0..supers)
                .map(|sb| {
                    if sb + 2 * half <= supers {
                        better(&me, level[sb], level[sb + half])
                    } else {
                        level[sb]
                    }
                })
                .collect();
        }

        me.inner_levels = inner_levels;
        me.inner = inner;
        me.top_levels = top_levels;
        me.top = top;
        me
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn block_size(&self) -> usize {
        self.block
    }

    /// Smallest index of a maximum of `X[i..=j]`.
    pub fn range_max_index(&self, i: usize, j: usize) -> Result<usize> {
        if i > j || j >= self.len {
            return Err(Error::Range(format!(
                "range_max_index({i}, {j}) on length {}",
                self.len
            )));
        }
        Ok(self.argmax(i, j))
    }

    #[inline]
    fn block_len(&self, g: usize) -> usize {
        (self.len - g * self.block).min(self.block)
    }

    // stack depth after inserting position k
    #[inline]
    fn depth(&self, k: usize) -> usize {
        2 * k + 1 - self.depth_code.select1(k)
    }

    // does position a win against position b?
    #[inline]
    fn beats(&self, a: usize, b: usize) -> bool {
        let (da, db) = (self.depth(a), self.depth(b));
        da < db || (da == db && a > b)
    }

    fn in_block(&self, g: usize, a: usize, c: usize) -> usize {
        let width = 2 * self.block as u32;
        let mut code = self.shapes.get_bits(g * 2 * self.block, width);
        let mut size = 0usize;
        let mut bottom = a;
        for k in 0..=c {
            let pops = code.trailing_zeros() as usize;
            code >>= pops + 1;
            if k < a {
                continue;
            }
            size -= pops.min(size);
            if size == 0 {
                bottom = k;
            }
            size += 1;
        }
        g * self.block + bottom
    }

    fn best_of(&self, a: usize, b: usize) -> usize {
        if self.beats(b, a) {
            b
        } else {
            a
        }
    }

    fn block_best(&self, g: usize) -> usize {
        self.in_block(g, 0, self.block_len(g) - 1)
    }

    // best block among [g1, g2] within one superblock
    fn inner_query(&self, g1: usize, g2: usize) -> usize {
        let span = g2 - g1 + 1;
        if span == 1 {
            return g1;
        }
        let lvl = span.ilog2() as usize;
        let base = (g1 / self.blocks_per_super) * self.blocks_per_super;
        let at = |g: usize| base + self.inner.get(g * self.inner_levels + lvl - 1) as usize;
        let (x, y) = (at(g1), at(g2 + 1 - (1 << lvl)));
        self.best_block(x, y)
    }

    fn best_block(&self, x: usize, y: usize) -> usize {
        if x == y {
            return x;
        }
        if self.beats(self.block_best(y), self.block_best(x)) {
            y
        } else {
            x
        }
    }

    fn top_query(&self, s1: usize, s2: usize) -> usize {
        let supers = self
            .len
            .div_ceil(self.block)
            .div_ceil(self.blocks_per_super);
        let lvl = (s2 - s1 + 1).ilog2() as usize;
        let x = self.top.get(lvl * supers + s1) as usize;
        let y = self.top.get(lvl * supers + s2 + 1 - (1 << lvl)) as usize;
        self.best_block(x, y)
    }

    fn middle_best_block(&self, g1: usize, g2: usize) -> usize {
        let w = self.blocks_per_super;
        let (s1, s2) = (g1 / w, g2 / w);
        if s1 == s2 {
            return self.inner_query(g1, g2);
        }
        let mut best = self.inner_query(g1, (s1 + 1) * w - 1);
        if s1 + 1 < s2 {
            best = self.best_block(best, self.top_query(s1 + 1, s2 - 1));
        }
        self.best_block(best, self.inner_query(s2 * w, g2))
    }

    #[inline]
    pub(crate) fn argmax(&self, i: usize, j: usize) -> usize {
        debug_assert!(i <= j && j < self.len);
        let (gi, gj) = (i / self.block, j / self.block);
        if gi == gj {
            return self.in_block(gi, i % self.block, j % self.block);
        }
        let mut best = self.in_block(gi, i % self.block, self.block - 1);
        if gi + 1 < gj {
            let g = self.middle_best_block(gi + 1, gj - 1);
            best = self.best_of(best, self.block_best(g));
        }
        self.best_of(best, self.in_block(gj, 0, j % self.block))
    }

    pub fn size_bits(&self) -> u64 {
        if self.len == 0 {
            return 64;
        }
        self.shapes.size_bits()
            + self.depth_code.size_bits()
            + self.inner.size_bits()
            + self.top.size_bits()
            + 3 * 64
    }

    pub fn bit_budget(len: usize) -> f64 {
        RMQ_BITS_CONSTANT * len as f64 + (RMQ_OVERHEAD_WORDS * 64) as f64
    }
}

impl Persist for RangeMaxStructure {
    fn write(&self, w: &mut Writer) {
        w.put_u64(self.len as u64);
        w.put_u64(self.block as u64);
        w.put_u64(self.blocks_per_super as u64);
        self.shapes.write(w);
        self.depth_code.bits().write(w);
        w.put_u64(self.inner_levels as u64);
        self.inner.write(w);
        w.put_u64(self.top_levels as u64);
        self.top.write(w);
    }

    fn read(r: &mut Reader) -> Result<Self> {
        let len = r.get_u64()? as usize;
        let block = r.get_u64()? as usize;
        let blocks_per_super = r.get_u64()? as usize;
        let shapes = BitBuf::read(r)?;
        let depth_code = RankSelectBits::build(BitBuf::read(r)?, false);
        let inner_levels = r.get_u64()? as usize;
        let inner = PackedInts::read(r)?;
        let top_levels = r.get_u64()? as usize;
        let top = PackedInts::read(r)?;
        let nblocks = len.div_ceil(block.max(1));
        if block != rmq_block_size(len)
            || depth_code.count_ones() != len
            || shapes.len() != nblocks * 2 * block
            || blocks_per_super == 0
        {
            return Err(r.corrupt("range max structure"));
        }
        Ok(Self {
            len,
            block,
            blocks_per_super,
            shapes,
            depth_code,
            inner_levels,
            inner,
            top_levels,
            top,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive(x: &[i64], i: usize, j: usize) -> usize {
        let mut best = i;
        for k in i..=j {
            if x[k] > x[best] {
                best = k;
            }
        }
        best
    }

    fn check_all_pairs(x: &[i64]) {
        let r = RangeMaxStructure::new(x);
        for i in 0..x.len() {
            for j in i..x.len() {
                assert_eq!(
                    r.range_max_index(i, j).unwrap(),
                    naive(x, i, j),
                    "{x:?} ({i},{j})"
                );
            }
        }
    }

    #[test]
    fn fixtures() {
        let r = RangeMaxStructure::new(&[5, 1, 5, 2]);
        assert_eq!(r.range_max_index(0, 3).unwrap(), 0);
        let r = RangeMaxStructure::new(&[1, 9, 3]);
        assert_eq!(r.range_max_index(1, 1).unwrap(), 1);
        assert!(r.range_max_index(2, 1).is_err());
        assert!(r.range_max_index(0, 3).is_err());
        let e = RangeMaxStructure::new::<i64>(&[]);
        assert!(e.range_max_index(0, 0).is_err());
    }

    #[test]
    fn exhaustive_small_alphabet() {
        // every array of length <= 7 over {0,1,2}
        for len in 1..=7u32 {
            for code in 0..3u32.pow(len) {
                let x: Vec<i64> = (0..len).map(|k| (code / 3u32.pow(k) % 3) as i64).collect();
                check_all_pairs(&x);
            }
        }
    }

    #[test]
    fn random_arrays_all_pairs_up_to_64() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..10_000 {
            let len = rng.gen_range(1..=64);
            let hi = *[2i64, 8, 1000].get(rng.gen_range(0..3)).unwrap();
            let x: Vec<i64> = (0..len).map(|_| rng.gen_range(0..hi)).collect();
            check_all_pairs(&x);
        }
    }

    #[test]
    fn sampled_long_arrays() {
        let mut rng = ChaCha8Rng::seed_from_u64(1234);
        for &len in &[100usize, 1000, 5000, 70_000] {
            for &hi in &[3i64, 1 << 40] {
                let x: Vec<i64> = (0..len).map(|_| rng.gen_range(0..hi)).collect();
                let r = RangeMaxStructure::new(&x);
                for _ in 0..3000 {
                    let i = rng.gen_range(0..len);
                    let j = rng.gen_range(i..len);
                    assert_eq!(r.range_max_index(i, j).unwrap(), naive(&x, i, j));
                }
            }
        }
    }

    #[test]
    fn monotone_inputs() {
        let inc: Vec<i64> = (0..3000).collect();
        let dec: Vec<i64> = (0..3000).rev().collect();
        let ri = RangeMaxStructure::new(&inc);
        let rd = RangeMaxStructure::new(&dec);
        for (i, j) in [(0, 2999), (17, 1800), (511, 512), (1000, 1000)] {
            assert_eq!(ri.range_max_index(i, j).unwrap(), j);
            assert_eq!(rd.range_max_index(i, j).unwrap(), i);
        }
    }

    #[test]
    fn size_within_budget() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for &s in &[1usize << 10, 1 << 14, 1 << 18] {
            let x: Vec<u32> = (0..s).map(|_| rng.gen()).collect();
            let r = RangeMaxStructure::new(&x);
            assert!(
                (r.size_bits() as f64) <= RangeMaxStructure::bit_budget(s),
                "s={s} bits={}",
                r.size_bits()
            );
        }
    }

    proptest! {
        #[test]
        fn answer_is_smallest_maximal_index(x in proptest::collection::vec(0i64..6, 1..200), a in 0usize..200, b in 0usize..200) {
            let (i, j) = (a.min(b) % x.len(), a.max(b) % x.len());
            let (i, j) = (i.min(j), i.max(j));
            let r = RangeMaxStructure::new(&x);
            let k = r.range_max_index(i, j).unwrap();
            prop_assert!(i <= k && k <= j);
            prop_assert!(x[i..=j].iter().all(|&v| v <= x[k]));
            prop_assert!(x[i..k].iter().all(|&v| v < x[k]));
        }
    }
}
