//! Degree-`Δ` base tree over the x-sorted points.
//!
//! Leaves are single points in x-order; level `l` groups `Δ` consecutive
//! nodes of level `l - 1`, the last group possibly smaller. Node `(l, k)`
//! covers leaves `[kΔ^l, (k+1)Δ^l)` and owns the list `L_v` of those points
//! in ascending y-order. Each level stores the lists of all its nodes back to
//! back, so every level holds exactly `n` entries and a node is just an
//! offset into its level. Per level the tree keeps only succinct summaries:
//!
//! * `C_v`, the child slot of every entry;
//! * `π_v`, the positions of the entries inside the parent lists;
//! * block signatures over blocks of `Δ²` entries of each node;
//! * per-child prefix counts over blocks, for moving list positions to a child;
//! * a range-max over x-ranks and the prefix sums of dominated counts, which
//!   give the skyline size of any contiguous run of `L_v`;
//! * for every slab interval `[i, j]`, block-level structures over the
//!   entries restricted to those slabs.
//!
//! On levels whose nodes fit in a single block only the first three are
//! stored; everything is answered from the signature.

mod node;
mod query;
pub mod signature;

pub use query::{MultislabQuery, QueryStats};
pub use signature::{BlockSignature, SigFormat, Signature};

use crate::persist::{Persist, Reader, Writer};
use crate::point::{PointSet, RankSpacePoint};
use crate::succinct::bits::{BitBuf, PackedInts};
use crate::succinct::{MonotoneSequence, RangeMaxStructure, SparseBitVector};
use crate::{Error, Result};
use signature::{BlockEval, BlockMemo, SigRef};

/// `max(2, ceil(lg(n)^(1/4)))`.
pub fn default_delta(n: usize) -> usize {
    if n < 2 {
        return 2;
    }
    let lg = (n as f64).log2();
    2.max(lg.powf(0.25).ceil() as usize)
}

/// Position of a node: level 0 holds the leaves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId {
    pub level: usize,
    pub index: usize,
}

impl NodeId {
    pub const fn new(level: usize, index: usize) -> Self {
        Self { level, index }
    }
}

/// Structures for one slab interval, indexed by block across a level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Multislab {
    // max x per block, -1 when the block has no entry in the slabs
    pub(crate) rightmost: RangeMaxStructure,
    // level block number + 1 when nonempty, else 0
    pub(crate) topmost: RangeMaxStructure,
    // restricted skyline size of each block alone
    pub(crate) own: MonotoneSequence,
    // earlier skyline entries of the same node dominated by each block
    pub(crate) covered: MonotoneSequence,
}

impl Multislab {
    fn size_bits(&self) -> u64 {
        self.rightmost.size_bits()
            + self.topmost.size_bits()
            + self.own.size_bits()
            + self.covered.size_bits()
    }
}

/// Structures of levels whose nodes span several blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Tables {
    // per child slot, entries of that child in each block
    pub(crate) child_counts: Vec<MonotoneSequence>,
    pub(crate) rightmost: RangeMaxStructure,
    // entries popped from the running skyline per entry, reset per node
    pub(crate) dominated: MonotoneSequence,
    pub(crate) multislabs: Vec<Multislab>,
}

/// One level of internal nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Level {
    pub(crate) slots: PackedInts,
    pub(crate) sigs: BitBuf,
    // absent on the root level
    pub(crate) pi: Option<SparseBitVector>,
    pub(crate) tables: Option<Tables>,
}

/// Bits used by one level, split by structure kind.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LevelSpace {
    pub slots: u64,
    pub pi: u64,
    pub signatures: u64,
    pub prefix: u64,
    pub rmq: u64,
    pub multislab: u64,
}

impl LevelSpace {
    pub fn total(&self) -> u64 {
        self.slots + self.pi + self.signatures + self.prefix + self.rmq + self.multislab
    }
}

impl Level {
    fn space(&self) -> LevelSpace {
        let t = self.tables.as_ref();
        LevelSpace {
            slots: self.slots.size_bits(),
            pi: self.pi.as_ref().map_or(0, |p| p.size_bits()),
            signatures: self.sigs.size_bits(),
            prefix: t.map_or(0, |t| {
                t.child_counts.iter().map(|m| m.size_bits()).sum::<u64>() + t.dominated.size_bits()
            }),
            rmq: t.map_or(0, |t| t.rightmost.size_bits()),
            multislab: t.map_or(0, |t| t.multislabs.iter().map(|m| m.size_bits()).sum()),
        }
    }
}

/// Per-block values of a whole level, filled node by node.
struct TableBuilder {
    child_counts: Vec<Vec<u64>>,
    xs: Vec<usize>,
    dominated: Vec<u64>,
    // per slab interval: occupancy, own, covered
    ms: Vec<[Vec<u64>; 3]>,
    max_x: Vec<Vec<i64>>,
}

impl TableBuilder {
    fn new(delta: usize) -> Self {
        let intervals = delta * (delta + 1) / 2;
        Self {
            child_counts: vec![Vec::new(); delta],
            xs: Vec::new(),
            dominated: Vec::new(),
            ms: (0..intervals).map(|_| Default::default()).collect(),
            max_x: vec![Vec::new(); intervals],
        }
    }

    /// Adds one node's list `(x, slot)` in ascending y-order.
    fn push_node(&mut self, entries: &[(usize, usize)], delta: usize, bsz: usize) {
        let first_block = self.child_counts[0].len();
        for (s, cc) in self.child_counts.iter_mut().enumerate() {
            cc.extend(
                entries
                    .chunks(bsz)
                    .map(|b| b.iter().filter(|e| e.1 == s).count() as u64),
            );
        }
        let mut stack: Vec<usize> = Vec::new();
        for &(x, _) in entries {
            let mut pops = 0;
            while stack.last().is_some_and(|&t| t < x) {
                stack.pop();
                pops += 1;
            }
            stack.push(x);
            self.xs.push(x);
            self.dominated.push(pops);
        }
        let mut m = 0;
        for i in 0..delta {
            for j in i..delta {
                self.push_multislab(m, entries, bsz, (i, j), first_block);
                m += 1;
            }
        }
    }

    fn push_multislab(
        &mut self,
        m: usize,
        entries: &[(usize, usize)],
        bsz: usize,
        (i, j): (usize, usize),
        first_block: usize,
    ) {
        let [occ, own, covered] = &mut self.ms[m];
        // (x, block) of the running restricted skyline
        let mut stack: Vec<(usize, usize)> = Vec::new();
        for (g, block) in entries.chunks(bsz).enumerate() {
            let inside: Vec<usize> = block
                .iter()
                .filter(|e| (i..=j).contains(&e.1))
                .map(|e| e.0)
                .collect();
            let mut best: Option<usize> = None;
            let mut own_g = 0;
            for &x in inside.iter().rev() {
                if best.is_none_or(|b| x > b) {
                    best = Some(x);
                    own_g += 1;
                }
            }
            self.max_x[m].push(best.map_or(-1, |b| b as i64));
            occ.push(best.map_or(0, |_| (first_block + g) as u64 + 1));
            own.push(own_g);
            let mut cov = 0;
            for &x in &inside {
                while stack.last().is_some_and(|t| t.0 < x) {
                    if stack.pop().unwrap().1 < g {
                        cov += 1;
                    }
                }
                stack.push((x, g));
            }
            covered.push(cov);
        }
    }

    fn finish(self) -> Tables {
        Tables {
            child_counts: self
                .child_counts
                .iter()
                .map(|c| MonotoneSequence::new(c))
                .collect(),
            rightmost: RangeMaxStructure::new(&self.xs),
            dominated: MonotoneSequence::new(&self.dominated),
            multislabs: self
                .ms
                .iter()
                .zip(&self.max_x)
                .map(|([occ, own, covered], max_x)| Multislab {
                    rightmost: RangeMaxStructure::new(max_x),
                    topmost: RangeMaxStructure::new(occ),
                    own: MonotoneSequence::new(own),
                    covered: MonotoneSequence::new(covered),
                })
                .collect(),
        }
    }
}

/// The base tree with all level structures.
#[derive(Debug)]
pub struct BaseTree {
    n: usize,
    delta: usize,
    height: usize,
    fmt: SigFormat,
    // levels[0] is a placeholder: leaves carry no structures
    levels: Vec<Level>,
    powers: Vec<usize>,
    memo: Option<BlockMemo>,
}

fn powers_of(delta: usize, height: usize) -> Vec<usize> {
    let mut p = vec![1usize];
    for _ in 0..height + 1 {
        p.push(p.last().unwrap().saturating_mul(delta));
    }
    p
}

fn height_for(n: usize, delta: usize) -> usize {
    let mut h = 0;
    let mut count = n;
    while count > 1 {
        count = count.div_ceil(delta);
        h += 1;
    }
    h
}

fn empty_level(fmt: SigFormat) -> Level {
    Level {
        slots: PackedInts::with_width(fmt.slab_bits),
        sigs: BitBuf::new(),
        pi: None,
        tables: None,
    }
}

impl BaseTree {
    /// Builds the tree over `ps` with degree `delta`.
    pub fn build(ps: &PointSet, delta: usize) -> Result<Self> {
        if delta < 2 {
            return Err(Error::Parameter(format!(
                "degree must be at least 2, got {delta}"
            )));
        }
        if delta > 256 {
            return Err(Error::Parameter(format!("degree {delta} exceeds 256")));
        }
        let n = ps.len();
        let height = height_for(n, delta);
        let fmt = SigFormat::for_degree(delta);
        let powers = powers_of(delta, height);
        let ys = ps.y_of_x();
        let mut levels = vec![empty_level(fmt)];
        // lists of the previous level, as x values in ascending y
        let mut lists: Vec<Vec<usize>> = (0..n).map(|x| vec![x]).collect();
        for level in 1..=height {
            let groups = lists.len().div_ceil(delta);
            let mut next_lists = Vec::with_capacity(groups);
            let mut cur = empty_level(fmt);
            let mut tables = (powers[level] > fmt.block).then(|| TableBuilder::new(delta));
            // positions of the previous level's entries in the segmented parent lists
            let mut pi_ones = Vec::with_capacity(n);
            let mut pi_len = 0;
            for k in 0..groups {
                let lo = k * delta;
                let hi = (lo + delta).min(lists.len());
                let mut entries: Vec<(usize, usize)> = Vec::new();
                for (s, list) in lists[lo..hi].iter().enumerate() {
                    entries.extend(list.iter().map(|&x| (x, s)));
                }
                entries.sort_unstable_by_key(|e| ys[e.0]);
                let mut positions = vec![Vec::new(); hi - lo];
                for (p, e) in entries.iter().enumerate() {
                    positions[e.1].push(p);
                }
                for pos in positions {
                    pi_ones.extend(pos.iter().map(|p| pi_len + p));
                    pi_len += entries.len();
                }
                for &(_, s) in &entries {
                    cur.slots.push(s as u64);
                }
                for block in entries.chunks(fmt.block) {
                    let keyed: Vec<(usize, usize)> = block.iter().map(|&(x, s)| (s, x)).collect();
                    BlockSignature::from_entries(&keyed).encode_into(fmt, &mut cur.sigs);
                }
                if let Some(t) = tables.as_mut() {
                    t.push_node(&entries, delta, fmt.block);
                }
                next_lists.push(entries.into_iter().map(|e| e.0).collect());
            }
            if level > 1 {
                levels[level - 1].pi = Some(SparseBitVector::from_positions(pi_len, &pi_ones));
            }
            cur.tables = tables.map(TableBuilder::finish);
            levels.push(cur);
            lists = next_lists;
        }
        Ok(Self {
            n,
            delta,
            height,
            fmt,
            levels,
            powers,
            memo: None,
        })
    }

    /// Enables a bounded memo table for block queries.
    pub fn set_memo_capacity(&mut self, capacity: usize) {
        self.memo = (capacity > 0).then(|| BlockMemo::new(capacity));
    }

    pub fn memo_capacity(&self) -> usize {
        self.memo.as_ref().map_or(0, |m| m.capacity())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    /// Number of grouping rounds; all leaves sit at this depth.
    pub fn height(&self) -> usize {
        self.height
    }

    pub fn signature_format(&self) -> SigFormat {
        self.fmt
    }

    pub fn root(&self) -> NodeId {
        NodeId::new(self.height, 0)
    }

    /// Number of nodes on `level`.
    pub fn level_len(&self, level: usize) -> usize {
        if self.n == 0 {
            return 0;
        }
        self.n.div_ceil(self.powers[level])
    }

    /// Whether `level` keeps the multi-block tables.
    pub fn has_tables(&self, level: usize) -> bool {
        level > 0 && self.levels[level].tables.is_some()
    }

    pub(crate) fn level(&self, level: usize) -> &Level {
        &self.levels[level]
    }

    pub(crate) fn tables(&self, level: usize) -> Option<&Tables> {
        self.levels[level].tables.as_ref()
    }

    /// List length of any node, leaves included.
    pub fn list_len(&self, id: NodeId) -> usize {
        let (a, b) = self.leaf_span(id);
        b - a
    }

    /// Number of children; 0 for leaves.
    pub fn degree_of(&self, id: NodeId) -> usize {
        if id.level == 0 {
            return 0;
        }
        let below = self.level_len(id.level - 1);
        (below - id.index * self.delta).min(self.delta)
    }

    /// Leaf interval `[start, end)` covered by a node.
    pub fn leaf_span(&self, id: NodeId) -> (usize, usize) {
        let w = self.powers[id.level];
        let start = id.index.saturating_mul(w).min(self.n);
        (start, start.saturating_add(w).min(self.n))
    }

    // leaves under a full node of `level`
    #[inline]
    pub(crate) fn span_width(&self, level: usize) -> usize {
        self.powers[level]
    }

    /// Number of blocks of a node's list.
    pub fn block_count(&self, id: NodeId) -> usize {
        self.list_len(id).div_ceil(self.fmt.block)
    }

    // index of the node's first block within its level
    #[inline]
    pub(crate) fn first_block(&self, id: NodeId) -> usize {
        id.index * self.powers[id.level].div_ceil(self.fmt.block)
    }

    pub fn child(&self, id: NodeId, slot: usize) -> NodeId {
        NodeId::new(id.level - 1, id.index * self.delta + slot)
    }

    pub fn parent(&self, id: NodeId) -> (NodeId, usize) {
        (
            NodeId::new(id.level + 1, id.index / self.delta),
            id.index % self.delta,
        )
    }

    /// Ancestor of leaf `x` on `level`.
    pub(crate) fn ancestor_of_leaf(&self, x: usize, level: usize) -> NodeId {
        NodeId::new(level, x / self.powers[level])
    }

    pub(crate) fn eval(&self) -> BlockEval<'_> {
        BlockEval {
            memo: self.memo.as_ref(),
        }
    }

    pub(crate) fn block_size(&self) -> usize {
        self.fmt.block
    }

    pub(crate) fn sig(&self, id: NodeId, g: usize) -> SigRef<'_> {
        let bsz = self.fmt.block;
        SigRef {
            bits: &self.levels[id.level].sigs,
            start: (self.first_block(id) + g) * self.fmt.stride(),
            len: (self.list_len(id) - g * bsz).min(bsz),
            fmt: self.fmt,
        }
    }

    /// Signature of block `g` of an internal node.
    pub fn block_signature(&self, id: NodeId, g: usize) -> BlockSignature {
        self.sig(id, g).to_owned()
    }

    /// Bits stored for a level.
    pub fn level_space(&self, level: usize) -> LevelSpace {
        if level == 0 || level > self.height {
            return LevelSpace::default();
        }
        self.levels[level].space()
    }

    pub fn size_bits(&self) -> u64 {
        (1..=self.height)
            .map(|l| self.level_space(l).total())
            .sum::<u64>()
            + 4 * 64
    }

    /// The list `L_v` rebuilt from the point set, for checking only.
    pub fn materialize_list(&self, ps: &PointSet, id: NodeId) -> Vec<RankSpacePoint> {
        let (a, b) = self.leaf_span(id);
        let mut v: Vec<RankSpacePoint> = (a..b).map(|x| ps.point(x)).collect();
        v.sort_by_key(|p| p.y);
        v
    }

    /// Checks structural consistency of the tree against the point set.
    pub fn check_against(&self, ps: &PointSet) -> Result<()> {
        if ps.len() != self.n {
            return Err(Error::Validation(format!(
                "index holds {} points, point set has {}",
                self.n,
                ps.len()
            )));
        }
        for level in 1..=self.height {
            for index in 0..self.level_len(level) {
                let id = NodeId::new(level, index);
                for (p, pt) in self.materialize_list(ps, id).iter().enumerate() {
                    let (a, b) = self.leaf_span(self.child(id, self.slot_at(id, p)));
                    if pt.x < a || pt.x >= b {
                        return Err(Error::Validation(format!(
                            "node {id:?} entry {p} routed to the wrong child"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    // shape check of a decoded level against the parameters
    fn level_fits(&self, l: usize, level: &Level) -> bool {
        let nodes = self.level_len(l);
        let blocks: usize = (0..nodes)
            .map(|k| self.block_count(NodeId::new(l, k)))
            .sum();
        let pi_ok = match &level.pi {
            None => l == self.height,
            Some(p) => {
                let len: usize = (0..nodes)
                    .map(|k| self.list_len(NodeId::new(l + 1, k / self.delta)))
                    .sum();
                l < self.height && p.len() == len && p.count_ones() == self.n
            }
        };
        let tables_ok = match &level.tables {
            None => self.powers[l] <= self.fmt.block,
            Some(t) => {
                self.powers[l] > self.fmt.block
                    && t.child_counts.len() == self.delta
                    && t.child_counts.iter().all(|c| c.len() == blocks)
                    && t.rightmost.len() == self.n
                    && t.dominated.len() == self.n
                    && t.multislabs.len() == self.delta * (self.delta + 1) / 2
                    && t.multislabs.iter().all(|m| {
                        m.rightmost.len() == blocks
                            && m.topmost.len() == blocks
                            && m.own.len() == blocks
                            && m.covered.len() == blocks
                    })
            }
        };
        level.slots.len() == self.n
            && level.slots.width() == self.fmt.slab_bits
            && level.sigs.len() == blocks * self.fmt.stride()
            && pi_ok
            && tables_ok
    }
}

impl Persist for Multislab {
    fn write(&self, w: &mut Writer) {
        self.rightmost.write(w);
        self.topmost.write(w);
        self.own.write(w);
        self.covered.write(w);
    }

    fn read(r: &mut Reader) -> Result<Self> {
        Ok(Self {
            rightmost: RangeMaxStructure::read(r)?,
            topmost: RangeMaxStructure::read(r)?,
            own: MonotoneSequence::read(r)?,
            covered: MonotoneSequence::read(r)?,
        })
    }
}

impl Persist for Tables {
    fn write(&self, w: &mut Writer) {
        w.put_vec(&self.child_counts);
        self.rightmost.write(w);
        self.dominated.write(w);
        w.put_vec(&self.multislabs);
    }

    fn read(r: &mut Reader) -> Result<Self> {
        Ok(Self {
            child_counts: r.get_vec()?,
            rightmost: RangeMaxStructure::read(r)?,
            dominated: MonotoneSequence::read(r)?,
            multislabs: r.get_vec()?,
        })
    }
}

impl Persist for Level {
    fn write(&self, w: &mut Writer) {
        self.slots.write(w);
        self.sigs.write(w);
        w.put_option(&self.pi);
        w.put_option(&self.tables);
    }

    fn read(r: &mut Reader) -> Result<Self> {
        Ok(Self {
            slots: PackedInts::read(r)?,
            sigs: BitBuf::read(r)?,
            pi: r.get_option()?,
            tables: r.get_option()?,
        })
    }
}

impl Persist for BaseTree {
    fn write(&self, w: &mut Writer) {
        w.put_u64(self.n as u64);
        w.put_u64(self.delta as u64);
        for level in &self.levels[1..] {
            level.write(w);
        }
    }

    fn read(r: &mut Reader) -> Result<Self> {
        let n = r.get_u64()? as usize;
        let delta = r.get_u64()? as usize;
        if !(2..=256).contains(&delta) {
            return Err(r.corrupt("tree degree"));
        }
        let height = height_for(n, delta);
        let fmt = SigFormat::for_degree(delta);
        let mut tree = Self {
            n,
            delta,
            height,
            fmt,
            levels: vec![empty_level(fmt)],
            powers: powers_of(delta, height),
            memo: None,
        };
        for l in 1..=height {
            let level = Level::read(r)?;
            if !tree.level_fits(l, &level) {
                return Err(r.corrupt("tree level"));
            }
            tree.levels.push(level);
        }
        Ok(tree)
    }
}
