//! Uncompressed bit vector with a rank directory and sampled select.
//!
//! Positions are 0-based. `rank1(i)` counts ones in `[0, i)`.

use super::bits::BitBuf;
use crate::persist::{Persist, Reader, Writer};
use crate::Result;

const SB_WORDS: usize = 8;
const SB_BITS: usize = SB_WORDS * 64;
const SAMPLE: usize = 256;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RankSelectBits {
    bits: BitBuf,
    ones: usize,
    // cumulative ones before each superblock; empty for a single superblock
    sb: Vec<u64>,
    sel1: Vec<u64>,
    sel0: Vec<u64>,
}

#[inline]
fn select_in_word(w: u64, mut r: u32) -> u32 {
    debug_assert!(r < w.count_ones());
    let mut base = 0;
    let mut w = w;
    loop {
        let c = (w & 0xff).count_ones();
        if r < c {
            break;
        }
        r -= c;
        w >>= 8;
        base += 8;
    }
    for _ in 0..r {
        w &= w - 1;
    }
    base + w.trailing_zeros()
}

impl RankSelectBits {
    pub fn new(bits: BitBuf) -> Self {
        Self::build(bits, true)
    }

    /// Builds the directory; `with_select0` controls the zero samples.
    pub fn build(bits: BitBuf, with_select0: bool) -> Self {
        let words = bits.words();
        let ones = bits.count_ones();
        let mut sb = Vec::new();
        let mut sel1 = Vec::new();
        let mut sel0 = Vec::new();
        if words.len() > SB_WORDS {
            let nsb = words.len().div_ceil(SB_WORDS);
            let mut acc = 0u64;
            let mut next1 = 0usize;
            let mut next0 = 0usize;
            for s in 0..nsb {
                sb.push(acc);
                let lo = s * SB_WORDS;
                let hi = (lo + SB_WORDS).min(words.len());
                let c: u64 = words[lo..hi].iter().map(|w| w.count_ones() as u64).sum();
                let zeros_before = (s * SB_BITS) as u64 - acc;
                let span_bits = ((hi * 64).min(bits.len()) - lo * 64) as u64;
                let zeros_here = span_bits - c;
                while (next1 as u64) < acc + c {
                    sel1.push(s as u64);
                    next1 += SAMPLE;
                }
                if with_select0 {
                    while (next0 as u64) < zeros_before + zeros_here {
                        sel0.push(s as u64);
                        next0 += SAMPLE;
                    }
                }
                acc += c;
            }
        }
        Self {
            bits,
            ones,
            sb,
            sel1,
            sel0,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    #[inline]
    pub fn count_ones(&self) -> usize {
        self.ones
    }

    #[inline]
    pub fn count_zeros(&self) -> usize {
        self.len() - self.ones
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.bits.get(i)
    }

    pub fn bits(&self) -> &BitBuf {
        &self.bits
    }

    /// Ones in `[0, i)`.
    pub fn rank1(&self, i: usize) -> usize {
        debug_assert!(i <= self.len());
        if i == self.len() {
            return self.ones;
        }
        let words = self.bits.words();
        let w = i >> 6;
        let (start, mut acc) = if self.sb.is_empty() {
            (0, 0)
        } else {
            let s = w / SB_WORDS;
            (s * SB_WORDS, self.sb[s] as usize)
        };
        for word in &words[start..w] {
            acc += word.count_ones() as usize;
        }
        let o = i & 63;
        if o != 0 {
            acc += (words[w] & ((1u64 << o) - 1)).count_ones() as usize;
        }
        acc
    }

    #[inline]
    pub fn rank0(&self, i: usize) -> usize {
        i - self.rank1(i)
    }

    /// Position of the `k`-th one (0-based).
    pub fn select1(&self, k: usize) -> usize {
        assert!(k < self.ones, "select1 out of range");
        let words = self.bits.words();
        let (mut w, mut rem) = if self.sb.is_empty() {
            (0, k)
        } else {
            let s = self.locate_sb(k, &self.sel1, |x| self.sb[x] as usize);
            (s * SB_WORDS, k - self.sb[s] as usize)
        };
        loop {
            let c = words[w].count_ones() as usize;
            if rem < c {
                return w * 64 + select_in_word(words[w], rem as u32) as usize;
            }
            rem -= c;
            w += 1;
        }
    }

    /// Position of the `k`-th zero (0-based).
    pub fn select0(&self, k: usize) -> usize {
        assert!(k < self.count_zeros(), "select0 out of range");
        let words = self.bits.words();
        let zeros_before = |x: usize| x * SB_BITS - self.sb[x] as usize;
        let (mut w, mut rem) = if self.sb.is_empty() {
            (0, k)
        } else {
            assert!(!self.sel0.is_empty(), "select0 support not built");
            let s = self.locate_sb(k, &self.sel0, zeros_before);
            (s * SB_WORDS, k - zeros_before(s))
        };
        loop {
            let inv = !words[w];
            let c = inv.count_ones() as usize;
            if rem < c {
                return w * 64 + select_in_word(inv, rem as u32) as usize;
            }
            rem -= c;
            w += 1;
        }
    }

    // last superblock whose cumulative count is <= k
    fn locate_sb(&self, k: usize, samples: &[u64], before: impl Fn(usize) -> usize) -> usize {
        let si = k / SAMPLE;
        let mut lo = samples[si] as usize;
        let mut hi = samples
            .get(si + 1)
            .map_or(self.sb.len() - 1, |&s| s as usize);
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if before(mid) <= k {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        lo
    }

    pub fn size_bits(&self) -> u64 {
        self.bits.size_bits()
            + 64 * (self.sb.len() + self.sel1.len() + self.sel0.len()) as u64
            + 2 * 64
    }
}

impl Persist for RankSelectBits {
    fn write(&self, w: &mut Writer) {
        self.bits.write(w);
        w.put_u8(u8::from(!self.sel0.is_empty() || self.sb.is_empty()));
    }

    fn read(r: &mut Reader) -> Result<Self> {
        let bits = BitBuf::read(r)?;
        let with0 = r.get_u8()? != 0;
        Ok(Self::build(bits, with0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn check(bools: &[bool]) {
        let rs = RankSelectBits::new(BitBuf::from_bools(bools));
        let mut ones = 0;
        let mut k1 = 0;
        let mut k0 = 0;
        for (i, &b) in bools.iter().enumerate() {
            assert_eq!(rs.rank1(i), ones, "rank1({i})");
            if b {
                assert_eq!(rs.select1(k1), i);
                k1 += 1;
                ones += 1;
            } else {
                assert_eq!(rs.select0(k0), i);
                k0 += 1;
            }
        }
        assert_eq!(rs.rank1(bools.len()), ones);
        assert_eq!(rs.count_ones(), ones);
    }

    #[test]
    fn matches_naive_scan_over_densities() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &len in &[
            0usize, 1, 63, 64, 65, 511, 512, 513, 1024, 3000, 4096, 20000,
        ] {
            for &p in &[0.0, 0.01, 0.3, 0.5, 0.97, 1.0] {
                let v: Vec<bool> = (0..len).map(|_| rng.gen_bool(p)).collect();
                check(&v);
            }
        }
    }

    #[test]
    fn clustered_ones() {
        let mut v = vec![false; 40_000];
        for b in v.iter_mut().skip(30_000).take(700) {
            *b = true;
        }
        v[5] = true;
        check(&v);
    }
}
