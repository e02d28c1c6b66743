//! Block signatures and the block-local queries they answer.
//!
//! A block is a run of up to `Δ²` consecutive entries of a node list. Its
//! signature lists, bottom to top, the child slab of every entry and the
//! entry's x-rank among the block entries of that slab. Slabs are x-ordered,
//! so `(slab, rank)` compared lexicographically is the x-order of the block.
//!
//! All indices are 0-based; ranges `[b, t]` are inclusive.

use crate::succinct::bits::{bits_for, BitBuf};
use std::collections::HashMap;
use std::sync::Mutex;

/// Read access to one block signature.
pub trait Signature {
    fn len(&self) -> usize;

    /// `(slab, rank)` of entry `l`.
    fn pair(&self, l: usize) -> (usize, usize);

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    fn slab(&self, l: usize) -> usize {
        self.pair(l).0
    }

    /// Sort key realizing the x-order of entries.
    #[inline]
    fn key(&self, l: usize) -> u64 {
        let (s, r) = self.pair(l);
        ((s as u64) << 32) | r as u64
    }
}

/// Bit layout of signatures for a given degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SigFormat {
    pub slab_bits: u32,
    pub rank_bits: u32,
    pub block: usize,
}

impl SigFormat {
    pub fn for_degree(delta: usize) -> Self {
        let block = delta * delta;
        Self {
            slab_bits: bits_for(delta as u64),
            rank_bits: bits_for(block as u64),
            block,
        }
    }

    #[inline]
    pub fn entry_bits(&self) -> u32 {
        self.slab_bits + self.rank_bits
    }

    /// Bits reserved per block.
    #[inline]
    pub fn stride(&self) -> usize {
        self.block * self.entry_bits() as usize
    }
}

/// An owned signature.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BlockSignature {
    pub pairs: Vec<(usize, usize)>,
}

impl BlockSignature {
    pub fn new(pairs: Vec<(usize, usize)>) -> Self {
        Self { pairs }
    }

    /// Signature of a block given each entry's slab and x-coordinate.
    pub fn from_entries(entries: &[(usize, usize)]) -> Self {
        let pairs = entries
            .iter()
            .map(|&(slab, x)| {
                let r = entries
                    .iter()
                    .filter(|&&(s, x2)| s == slab && x2 < x)
                    .count();
                (slab, r)
            })
            .collect();
        Self { pairs }
    }

    /// Appends the encoding to `out`, padded to the block stride.
    pub fn encode_into(&self, fmt: SigFormat, out: &mut BitBuf) {
        debug_assert!(self.pairs.len() <= fmt.block);
        for &(s, r) in &self.pairs {
            out.push_bits(((s as u64) << fmt.rank_bits) | r as u64, fmt.entry_bits());
        }
        for _ in self.pairs.len()..fmt.block {
            out.push_bits(0, fmt.entry_bits());
        }
    }
}

impl Signature for BlockSignature {
    fn len(&self) -> usize {
        self.pairs.len()
    }

    fn pair(&self, l: usize) -> (usize, usize) {
        self.pairs[l]
    }
}

/// A signature stored inside a node's packed signature array.
#[derive(Clone, Copy, Debug)]
pub struct SigRef<'a> {
    pub(crate) bits: &'a BitBuf,
    pub(crate) start: usize,
    pub(crate) len: usize,
    pub(crate) fmt: SigFormat,
}

impl SigRef<'_> {
    pub fn to_owned(&self) -> BlockSignature {
        BlockSignature::new((0..self.len).map(|l| self.pair(l)).collect())
    }

    /// The encoded words, used as a cache key.
    fn raw_words(&self) -> Vec<u64> {
        let eb = self.fmt.entry_bits();
        let per = (64 / eb) as usize;
        let mut out = Vec::with_capacity(self.len.div_ceil(per) + 1);
        let mut l = 0;
        while l < self.len {
            let take = per.min(self.len - l);
            out.push(
                self.bits
                    .get_bits(self.start + l * eb as usize, take as u32 * eb),
            );
            l += take;
        }
        out.push(self.len as u64);
        out
    }
}

impl Signature for SigRef<'_> {
    #[inline]
    fn len(&self) -> usize {
        self.len
    }

    #[inline]
    fn pair(&self, l: usize) -> (usize, usize) {
        let v = self.key_bits(l);
        (
            (v >> self.fmt.rank_bits) as usize,
            (v & ((1 << self.fmt.rank_bits) - 1)) as usize,
        )
    }

    #[inline]
    fn key(&self, l: usize) -> u64 {
        self.key_bits(l)
    }

    #[inline]
    fn slab(&self, l: usize) -> usize {
        (self.key_bits(l) >> self.fmt.rank_bits) as usize
    }
}

impl SigRef<'_> {
    // slab in the high bits, so the raw field already orders by (slab, rank)
    #[inline]
    fn key_bits(&self, l: usize) -> u64 {
        debug_assert!(l < self.len);
        let eb = self.fmt.entry_bits();
        self.bits.get_bits(self.start + l * eb as usize, eb)
    }
}

/// Entries among the first `t` with slab `i`.
pub fn block_below<S: Signature + ?Sized>(sig: &S, t: usize, i: usize) -> usize {
    (0..t).filter(|&l| sig.slab(l) == i).count()
}

/// Entry of maximum x among `[b, t]` restricted to slabs `[i, j]`.
pub fn block_rightmost<S: Signature + ?Sized>(
    sig: &S,
    b: usize,
    t: usize,
    i: usize,
    j: usize,
) -> Option<usize> {
    let mut best: Option<(u64, usize)> = None;
    for l in b..=t {
        let s = sig.slab(l);
        if s < i || s > j {
            continue;
        }
        let k = sig.key(l);
        if best.is_none_or(|(bk, _)| k > bk) {
            best = Some((k, l));
        }
    }
    best.map(|(_, l)| l)
}

/// Highest entry of `[b, t]` restricted to slabs `[i, j]`.
pub fn block_topmost<S: Signature + ?Sized>(
    sig: &S,
    b: usize,
    t: usize,
    i: usize,
    j: usize,
) -> Option<usize> {
    (b..=t).rev().find(|&l| (i..=j).contains(&sig.slab(l)))
}

/// Skyline size of the entries of `[b, t]` restricted to slabs `[i, j]`.
pub fn block_skycount<S: Signature + ?Sized>(
    sig: &S,
    b: usize,
    t: usize,
    i: usize,
    j: usize,
) -> usize {
    let mut count = 0;
    let mut best: Option<u64> = None;
    for l in (b..=t).rev() {
        let s = sig.slab(l);
        if s < i || s > j {
            continue;
        }
        let k = sig.key(l);
        if best.is_none_or(|bk| k > bk) {
            best = Some(k);
            count += 1;
        }
    }
    count
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Op {
    Below,
    Rightmost,
    Topmost,
    SkyCount,
}

const NONE: u32 = u32::MAX;

/// Bounded memo table for block queries keyed by signature bits and
/// arguments. Safe to share between threads.
#[derive(Debug)]
pub struct BlockMemo {
    capacity: usize,
    map: Mutex<HashMap<(Vec<u64>, Op, [u32; 4]), u32>>,
}

impl BlockMemo {
    pub fn new(capacity: usize) -> Self {
        Self {
            capacity,
            map: Mutex::new(HashMap::new()),
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.map.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn lookup(&self, sig: &SigRef, op: Op, args: [usize; 4], f: impl FnOnce() -> u32) -> u32 {
        let key = (sig.raw_words(), op, args.map(|a| a as u32));
        if let Some(&v) = self.map.lock().unwrap().get(&key) {
            return v;
        }
        let v = f();
        let mut map = self.map.lock().unwrap();
        if map.len() < self.capacity {
            map.insert(key, v);
        }
        v
    }
}

/// Block query evaluator, routing through the memo table when one is set.
#[derive(Clone, Copy)]
pub struct BlockEval<'a> {
    pub memo: Option<&'a BlockMemo>,
}

fn pack(v: Option<usize>) -> u32 {
    v.map_or(NONE, |l| l as u32)
}

fn unpack(v: u32) -> Option<usize> {
    (v != NONE).then_some(v as usize)
}

impl BlockEval<'_> {
    #[inline]
    pub fn below(&self, sig: &SigRef, t: usize, i: usize) -> usize {
        match self.memo {
            None => block_below(sig, t, i),
            Some(m) => m.lookup(sig, Op::Below, [t, i, 0, 0], || {
                block_below(sig, t, i) as u32
            }) as usize,
        }
    }

    #[inline]
    pub fn rightmost(&self, sig: &SigRef, b: usize, t: usize, i: usize, j: usize) -> Option<usize> {
        match self.memo {
            None => block_rightmost(sig, b, t, i, j),
            Some(m) => unpack(m.lookup(sig, Op::Rightmost, [b, t, i, j], || {
                pack(block_rightmost(sig, b, t, i, j))
            })),
        }
    }

    #[inline]
    pub fn topmost(&self, sig: &SigRef, b: usize, t: usize, i: usize, j: usize) -> Option<usize> {
        match self.memo {
            None => block_topmost(sig, b, t, i, j),
            Some(m) => unpack(m.lookup(sig, Op::Topmost, [b, t, i, j], || {
                pack(block_topmost(sig, b, t, i, j))
            })),
        }
    }

    #[inline]
    pub fn skycount(&self, sig: &SigRef, b: usize, t: usize, i: usize, j: usize) -> usize {
        match self.memo {
            None => block_skycount(sig, b, t, i, j),
            Some(m) => m.lookup(sig, Op::SkyCount, [b, t, i, j], || {
                block_skycount(sig, b, t, i, j) as u32
            }) as usize,
        }
    }
}
