//! Skyline reporting and ball-inheritance pointers.
//!
//! Within a multislab, points are produced bottom-up by repeatedly taking the
//! rightmost point and moving the lower edge just above it. Each result is a
//! position in some node list; [`BallInheritance`] maps it to the point.
//!
//! A node at depth `D` (root at depth 0) stores, for every `i` with `B^i`
//! dividing `D`, the positions of its list inside the list of its ancestor at
//! depth `floor((D-1) / B^(i+1)) * B^(i+1)`. Resolution always takes the
//! longest available jump, reaching the root in at most
//! `ceil(log_B height) + 1` jumps.

use crate::persist::{Persist, Reader, Writer};
use crate::point::{PointSet, RankRect, RankSpacePoint};
use crate::succinct::bits::{bits_for, PackedInts};
use crate::succinct::SparseBitVector;
use crate::tree::signature::Signature;
use crate::tree::{BaseTree, NodeId, QueryStats};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallInheritance {
    fan: usize,
    height: usize,
    delta: usize,
    max_i: usize,
    root_x: PackedInts,
    // jumps[level][node][i], present for levels 1..height
    jumps: Vec<Vec<Vec<SparseBitVector>>>,
}

/// Fan-out `ceil(lg(n)^eps)`, at least 2.
pub fn fan_for_epsilon(n: usize, eps: f64) -> usize {
    let lg = (n.max(2) as f64).log2();
    2.max(lg.powf(eps).ceil() as usize)
}

fn pow(b: usize, e: usize) -> usize {
    b.saturating_pow(e as u32)
}

impl BallInheritance {
    pub fn build(tree: &BaseTree, ps: &PointSet, fan: usize) -> Result<Self> {
        if fan < 2 {
            return Err(Error::Parameter(format!(
                "fan-out must be at least 2, got {fan}"
            )));
        }
        let h = tree.height();
        let delta = tree.delta();
        let mut max_i = 0;
        while pow(fan, max_i) < h {
            max_i += 1;
        }
        let n = ps.len();
        let mut root_x = PackedInts::with_width(bits_for(n as u64));
        let mut x_of_y = vec![0usize; n];
        for p in ps.points() {
            x_of_y[p.y] = p.x;
        }
        for &x in &x_of_y {
            root_x.push(x as u64);
        }

        let mut jumps: Vec<Vec<Vec<SparseBitVector>>> = vec![Vec::new(); h + 1];
        for level in 1..h {
            jumps[level] = vec![Vec::new(); tree.level_len(level)];
        }
        let span = |level: usize| pow(delta, level);
        // lists of every node on a level, as x values in ascending y
        let lists_of = |level: usize| -> Vec<Vec<usize>> {
            let w = span(level);
            let mut lists: Vec<Vec<usize>> = vec![Vec::new(); tree.level_len(level)];
            for &x in &x_of_y {
                lists[x / w].push(x);
            }
            lists
        };
        for i in 0..=max_i {
            let step = pow(fan, i);
            let up = pow(fan, i + 1);
            let mut depth = step;
            while depth < h {
                let level = h - depth;
                let target_depth = ((depth - 1) / up) * up;
                let target_level = h - target_depth;
                let w = span(level);
                let mut positions: Vec<Vec<usize>> = vec![Vec::new(); tree.level_len(level)];
                let mut owner_len = vec![0usize; tree.level_len(level)];
                for list in lists_of(target_level) {
                    for (p, &x) in list.iter().enumerate() {
                        positions[x / w].push(p);
                        owner_len[x / w] = list.len();
                    }
                }
                for (k, pos) in positions.into_iter().enumerate() {
                    let sbv = SparseBitVector::from_positions(owner_len[k], &pos);
                    debug_assert_eq!(jumps[level][k].len(), i);
                    jumps[level][k].push(sbv);
                }
                depth += step;
            }
        }
        Ok(Self {
            fan,
            height: h,
            delta,
            max_i,
            root_x,
            jumps,
        })
    }

    pub fn fan(&self) -> usize {
        self.fan
    }

    /// Largest jump exponent stored.
    pub fn max_exponent(&self) -> usize {
        self.max_i
    }

    /// Upper bound on jumps per resolution, leaves included.
    pub fn jump_bound(&self) -> usize {
        self.max_i + 2
    }

    /// Point stored at position `idx` of the list of `v`.
    pub fn resolve(&self, tree: &BaseTree, v: NodeId, idx: usize) -> Result<RankSpacePoint> {
        if v.level > self.height || v.index >= tree.level_len(v.level) || idx >= tree.list_len(v) {
            return Err(Error::Range(format!("position {idx} of {v:?}")));
        }
        let mut jumps = 0;
        Ok(self.resolve_counted(tree, v, idx, &mut jumps))
    }

    pub(crate) fn resolve_counted(
        &self,
        tree: &BaseTree,
        mut v: NodeId,
        mut idx: usize,
        jumps: &mut usize,
    ) -> RankSpacePoint {
        let h = self.height;
        if v.level == 0 && h > 0 {
            let (p, s) = tree.parent(v);
            idx = tree.first_of_slot(p, s);
            v = p;
            *jumps += 1;
        }
        while v.level < h {
            let depth = h - v.level;
            let arrays = &self.jumps[v.level][v.index];
            let i = arrays.len() - 1;
            idx = arrays[i].select(idx);
            let up = pow(self.fan, i + 1);
            let target_level = h - ((depth - 1) / up) * up;
            v = NodeId::new(
                target_level,
                v.index / pow(self.delta, target_level - v.level),
            );
            *jumps += 1;
        }
        RankSpacePoint::new(self.root_x.get(idx) as usize, idx)
    }

    pub fn size_bits(&self) -> u64 {
        let arrays: u64 = self
            .jumps
            .iter()
            .flatten()
            .flatten()
            .map(|s| s.size_bits())
            .sum();
        arrays + self.root_x.size_bits() + 4 * 64
    }
}

impl Persist for BallInheritance {
    fn write(&self, w: &mut Writer) {
        w.put_u64(self.fan as u64);
        w.put_u64(self.height as u64);
        w.put_u64(self.delta as u64);
        w.put_u64(self.max_i as u64);
        self.root_x.write(w);
        for level in &self.jumps {
            w.put_u64(level.len() as u64);
            for node in level {
                w.put_vec(node);
            }
        }
    }

    fn read(r: &mut Reader) -> Result<Self> {
        let fan = r.get_u64()? as usize;
        let height = r.get_u64()? as usize;
        let delta = r.get_u64()? as usize;
        let max_i = r.get_u64()? as usize;
        if fan < 2 || delta < 2 || height > 64 || max_i > 64 {
            return Err(r.corrupt("ball inheritance header"));
        }
        let root_x = PackedInts::read(r)?;
        let mut jumps = Vec::with_capacity(height + 1);
        for level in 0..=height {
            let count = r.get_u64()? as usize;
            if count > r.remaining() {
                return Err(r.corrupt("ball inheritance level"));
            }
            let mut nodes = Vec::with_capacity(count);
            for _ in 0..count {
                let arrays: Vec<SparseBitVector> = r.get_vec()?;
                if (1..height).contains(&level) && arrays.is_empty() {
                    return Err(r.corrupt("ball inheritance node"));
                }
                nodes.push(arrays);
            }
            jumps.push(nodes);
        }
        Ok(Self {
            fan,
            height,
            delta,
            max_i,
            root_x,
            jumps,
        })
    }
}

type Emit = Vec<(NodeId, usize)>;

impl BaseTree {
    // rightmost recursion inside block g over offsets [b, t], slabs [i, j]
    fn block_walk(
        &self,
        v: NodeId,
        g: usize,
        mut b: usize,
        t: usize,
        i: usize,
        j: usize,
        out: &mut Emit,
    ) {
        let sig = self.sig(v, g);
        let bsz = self.block_size();
        while b <= t {
            let Some(q) = self.eval().rightmost(&sig, b, t, i, j) else {
                break;
            };
            out.push((v, g * bsz + q));
            b = q + 1;
        }
    }

    // skyline of child range [a, end] minus its top entry `end`
    fn child_walk(&self, c: NodeId, mut a: usize, end: usize, out: &mut Emit) {
        while a < end {
            let q = self.rightmost_in(c, a, end);
            if q == end {
                break;
            }
            out.push((c, q));
            a = q + 1;
        }
    }

    // does list entry qn (higher) have larger x than f? both in slabs of v
    fn dominated_by(&self, v: NodeId, f: usize, qn: usize, stats: &mut QueryStats) -> bool {
        let (sf, sq) = (self.slot_at(v, f), self.slot_at(v, qn));
        if sf != sq {
            return sf < sq;
        }
        stats.child_probes += 1;
        let (c, a, b) = self.slab_range(v, sf, f, qn);
        self.rightmost_in(c, a, b) == b
    }

    /// Reports the window `[lo, hi)` of `L_v` in slabs `[i, j]` bottom-up,
    /// returning the topmost position.
    pub(crate) fn multislab_report(
        &self,
        v: NodeId,
        (i, j): (usize, usize),
        lo: usize,
        hi: usize,
        stats: &mut QueryStats,
        out: &mut Emit,
    ) -> Option<usize> {
        let bsz = self.block_size();
        let (bb, bt) = (lo / bsz, (hi - 1) / bsz);
        let start = out.len();
        if bb == bt {
            self.block_walk(v, bb, lo % bsz, (hi - 1) % bsz, i, j, out);
            return out[start..].last().map(|e| e.1);
        }
        let p = self.parts(v, i, j, lo, hi);

        // (3) bottom partial block right of slab k3
        if p.bot_lo <= j {
            let len = self.sig(v, bb).len();
            self.block_walk(v, bb, p.bot % bsz, len - 1, p.bot_lo, j, out);
        }
        // (5) slab k3 between p4 and p3
        if let Some(p3) = p.p3 {
            let lower = p.p4.map_or(p.bot, |q| q + 1);
            let (c, a, b) = self.slab_range(v, self.slot_at(v, p3), lower, p3);
            stats.child_probes += 1;
            self.child_walk(c, a, b, out);
        }
        // (2) middle blocks, walking from block to block
        if let Some(mut q) = p.p3 {
            loop {
                let g = q / bsz;
                let next = (g + 1 < p.bt)
                    .then(|| self.ms_rightmost_u(v, p.mid_lo, j, g + 1, p.bt - 1))
                    .flatten();
                out.push((v, q));
                let sig = self.sig(v, g);
                let mut b = q % bsz + 1;
                while b < sig.len() {
                    let Some(f) = self.eval().rightmost(&sig, b, sig.len() - 1, p.mid_lo, j) else {
                        break;
                    };
                    let f_idx = g * bsz + f;
                    if next.is_some_and(|qn| self.dominated_by(v, f_idx, qn, stats)) {
                        break;
                    }
                    out.push((v, f_idx));
                    b = f + 1;
                }
                match next {
                    Some(qn) => q = qn,
                    None => break,
                }
            }
        }
        // (4) slab k1 between the highest point right of it and p1
        if let Some(p1) = p.p1 {
            let lower = p.p2.or(p.p4).map_or(p.bot, |q| q + 1);
            let (c, a, b) = self.slab_range(v, self.slot_at(v, p1), lower, p1);
            stats.child_probes += 1;
            self.child_walk(c, a, b, out);
        }
        // (1) top partial block
        self.block_walk(v, bt, 0, p.top % bsz, i, j, out);

        let e = self.eval();
        if let Some(l) = e.topmost(&self.sig(v, bt), 0, p.top % bsz, i, j) {
            return Some(bt * bsz + l);
        }
        if bb + 1 < bt {
            if let Some(t) = self.ms_topmost_u(v, i, j, bb + 1, bt - 1) {
                return Some(t);
            }
        }
        let sig = self.sig(v, bb);
        e.topmost(&sig, p.bot % bsz, sig.len() - 1, i, j)
            .map(|l| bb * bsz + l)
    }

    /// List positions of the skyline inside `r`, by decreasing x.
    pub fn report_positions(&self, r: &RankRect, stats: &mut QueryStats) -> Vec<(NodeId, usize)> {
        let mut out = Vec::new();
        match self.len() {
            0 => return out,
            1 => {
                out.push((self.root(), 0));
                return out;
            }
            _ => {}
        }
        self.traverse(r, stats, |t, v, slabs, lo, hi, st| {
            t.multislab_report(v, slabs, lo, hi, st, &mut out)
        });
        stats.reported += out.len();
        out
    }
}

/// Skyline points inside `r`, by strictly decreasing x.
pub fn report(
    tree: &BaseTree,
    bi: &BallInheritance,
    r: &RankRect,
    stats: &mut QueryStats,
) -> Vec<RankSpacePoint> {
    tree.report_positions(r, stats)
        .into_iter()
        .map(|(v, idx)| bi.resolve_counted(tree, v, idx, &mut stats.resolve_jumps))
        .collect()
}
