//! Plain bit storage and fixed-width integer packing.

use crate::persist::{Persist, Reader, Writer};
use crate::Result;

/// Number of bits needed to store values in `0..n` (at least one bit).
#[inline]
pub fn bits_for(n: u64) -> u32 {
    if n <= 2 {
        1
    } else {
        64 - (n - 1).leading_zeros()
    }
}

/// `ceil(log2(x))` for `x >= 1`.
#[inline]
pub fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

/// Growable little-endian bit sequence backed by 64-bit words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BitBuf {
    words: Vec<u64>,
    len: usize,
}

impl BitBuf {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut buf = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                buf.set(i);
            }
        }
        buf
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
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i >> 6] |= 1 << (i & 63);
    }

    pub fn push(&mut self, bit: bool) {
        if self.len % 64 == 0 {
            self.words.push(0);
        }
        if bit {
            self.words[self.len >> 6] |= 1 << (self.len & 63);
        }
        self.len += 1;
    }

    /// Appends the low `width` bits of `value`.
    pub fn push_bits(&mut self, value: u64, width: u32) {
        debug_assert!(width <= 64);
        if width == 0 {
            return;
        }
        debug_assert!(width == 64 || value >> width == 0);
        let pos = self.len;
        let new_len = pos + width as usize;
        self.words.resize(new_len.div_ceil(64), 0);
        let (w, o) = (pos >> 6, (pos & 63) as u32);
        self.words[w] |= value << o;
        if o + width > 64 {
            self.words[w + 1] |= value >> (64 - o);
        }
        self.len = new_len;
    }

    /// Reads `width` bits starting at bit `pos`.
    #[inline]
    pub fn get_bits(&self, pos: usize, width: u32) -> u64 {
        debug_assert!(width <= 64);
        if width == 0 {
            return 0;
        }
        debug_assert!(pos + width as usize <= self.len);
        let (w, o) = (pos >> 6, (pos & 63) as u32);
        let mask = if width == 64 {
            u64::MAX
        } else {
            (1 << width) - 1
        };
        let mut v = self.words[w] >> o;
        if o + width > 64 {
            v |= self.words[w + 1] << (64 - o);
        }
        v & mask
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn size_bits(&self) -> u64 {
        self.words.len() as u64 * 64
    }
}

impl Persist for BitBuf {
    fn write(&self, w: &mut Writer) {
        w.put_u64(self.len as u64);
        w.put_words(&self.words);
    }

    fn read(r: &mut Reader) -> Result<Self> {
        let len = r.get_u64()? as usize;
        let words = r.get_words()?;
        if words.len() != len.div_ceil(64) {
            return Err(r.corrupt("bit buffer length"));
        }
        Ok(Self { words, len })
    }
}

/// Array of unsigned integers each stored in a fixed number of bits.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PackedInts {
    bits: BitBuf,
    width: u32,
    len: usize,
}

impl PackedInts {
    pub fn with_width(width: u32) -> Self {
        Self {
            bits: BitBuf::new(),
            width,
            len: 0,
        }
    }

    /// Packs `values` using the smallest width that holds `max_value`.
    pub fn from_values(values: &[u64], max_value: u64) -> Self {
        let mut p = Self::with_width(bits_for(max_value + 1));
        for &v in values {
            p.push(v);
        }
        p
    }

    pub fn push(&mut self, v: u64) {
        self.bits.push_bits(v, self.width);
        self.len += 1;
    }

    #[inline]
    pub fn get(&self, i: usize) -> u64 {
        debug_assert!(i < self.len);
        self.bits.get_bits(i * self.width as usize, self.width)
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
    pub fn width(&self) -> u32 {
        self.width
    }

    /// Exact payload bits (`len * width`), excluding word padding.
    pub fn payload_bits(&self) -> u64 {
        self.len as u64 * self.width as u64
    }

    pub fn size_bits(&self) -> u64 {
        self.bits.size_bits()
    }
}

impl Persist for PackedInts {
    fn write(&self, w: &mut Writer) {
        w.put_u32(self.width);
        w.put_u64(self.len as u64);
        self.bits.write(w);
    }

    fn read(r: &mut Reader) -> Result<Self> {
        let width = r.get_u32()?;
        let len = r.get_u64()? as usize;
        let bits = BitBuf::read(r)?;
        if width > 64 || bits.len() != len * width as usize {
            return Err(r.corrupt("packed int array"));
        }
        Ok(Self { bits, width, len })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_and_read_bits_across_words() {
        let mut b = BitBuf::new();
        let vals = [
            (5u64, 3u32),
            (0x3ff, 10),
            (1, 1),
            (u64::MAX, 64),
            (0xabc, 12),
        ];
        for &(v, w) in &vals {
            b.push_bits(v, w);
        }
        let mut pos = 0;
        for &(v, w) in &vals {
            assert_eq!(b.get_bits(pos, w), v);
            pos += w as usize;
        }
        assert_eq!(b.len(), pos);
    }

    #[test]
    fn packed_ints_roundtrip() {
        let values: Vec<u64> = (0..200).map(|i| (i * 37) % 11).collect();
        let p = PackedInts::from_values(&values, 10);
        assert_eq!(p.width(), 4);
        for (i, &v) in values.iter().enumerate() {
            assert_eq!(p.get(i), v);
        }
    }

    #[test]
    fn log_helpers() {
        assert_eq!(bits_for(1), 1);
        assert_eq!(bits_for(2), 1);
        assert_eq!(bits_for(3), 2);
        assert_eq!(bits_for(4), 2);
        assert_eq!(bits_for(5), 3);
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(4), 2);
        assert_eq!(ceil_log2(5), 3);
    }
}
