//! Per-node queries over the implicit list `L_v`.
//!
//! List positions are 0-based and ranges inclusive, except `count_lt` and
//! `skycount_prefix`, which take a length.

use super::{BaseTree, Multislab, NodeId};
use crate::{Error, Result};

impl BaseTree {
    fn check_internal(&self, v: NodeId) -> Result<()> {
        if v.level == 0 || v.level > self.height() || v.index >= self.level_len(v.level) {
            return Err(Error::Range(format!("{v:?} is not an internal node")));
        }
        Ok(())
    }

    fn check_range(&self, v: NodeId, a: usize, b: usize) -> Result<()> {
        if v.level > self.height() || v.index >= self.level_len(v.level) {
            return Err(Error::Range(format!("{v:?} does not exist")));
        }
        let n = self.list_len(v);
        if a > b || b >= n {
            return Err(Error::Range(format!(
                "range [{a}, {b}] on list of length {n}"
            )));
        }
        Ok(())
    }

    /// Child slot of entry `t` of `L_v`.
    #[inline]
    pub(crate) fn slot_at(&self, v: NodeId, t: usize) -> usize {
        self.level(v.level).slots.get(self.leaf_span(v).0 + t) as usize
    }

    /// Entries of `L_v[..t]` that belong to child `s`.
    #[inline]
    pub(crate) fn count_lt(&self, v: NodeId, t: usize, s: usize) -> usize {
        let Some(tables) = self.tables(v.level) else {
            return self.eval().below(&self.sig(v, 0), t, s);
        };
        let bsz = self.block_size();
        let (g, off) = (t / bsz, t % bsz);
        let gb = self.first_block(v);
        let base = tables.child_counts[s].range_sum(gb, gb + g) as usize;
        if off == 0 {
            base
        } else {
            base + self.eval().below(&self.sig(v, g), off, s)
        }
    }

    /// Position in the child list of the last child-`s` entry at or before
    /// `t`, if any.
    pub fn pred(&self, v: NodeId, t: usize, s: usize) -> Result<Option<usize>> {
        self.check_range(v, t, t)?;
        self.check_slot(v, s)?;
        Ok(self.count_lt(v, t + 1, s).checked_sub(1))
    }

    /// Position in the child list of the first child-`s` entry at or after
    /// `t`, if any.
    pub fn succ(&self, v: NodeId, t: usize, s: usize) -> Result<Option<usize>> {
        self.check_range(v, t, t)?;
        self.check_slot(v, s)?;
        let k = self.count_lt(v, t, s);
        let child = self.child(v, s);
        Ok((k < self.list_len(child)).then_some(k))
    }

    fn check_slot(&self, v: NodeId, s: usize) -> Result<()> {
        self.check_internal(v)?;
        if s >= self.degree_of(v) {
            return Err(Error::Range(format!("slot {s} of {v:?}")));
        }
        Ok(())
    }

    /// Position of entry `t` of `L_v` inside the parent list.
    #[inline]
    pub(crate) fn lift(&self, v: NodeId, t: usize) -> usize {
        let pi = self.level(v.level).pi.as_ref().expect("root has no parent");
        let (p, s) = self.parent(v);
        let segment = p.index * self.delta() * self.span_width(p.level) + s * self.list_len(p);
        pi.select(self.leaf_span(v).0 + t) - segment
    }

    /// Position of `L_v[t]` in the parent list.
    pub fn parent_position(&self, v: NodeId, t: usize) -> Result<usize> {
        self.check_range(v, t, t)?;
        if v.level == self.height() {
            return Err(Error::Range("the root has no parent".into()));
        }
        if v.level == 0 {
            let (p, s) = self.parent(v);
            return Ok(self.first_of_slot(p, s));
        }
        Ok(self.lift(v, t))
    }

    // position of the only entry of a leaf child in its parent's list
    pub(crate) fn first_of_slot(&self, p: NodeId, s: usize) -> usize {
        let (mut lo, mut hi) = (0, self.list_len(p) - 1);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.count_lt(p, mid + 1, s) == 0 {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Position in `L_v[a..=b]` of the entry with the largest x.
    #[inline]
    pub(crate) fn rightmost_in(&self, v: NodeId, a: usize, b: usize) -> usize {
        if v.level == 0 {
            return a;
        }
        match self.tables(v.level) {
            Some(t) => {
                let off = self.leaf_span(v).0;
                t.rightmost.argmax(off + a, off + b) - off
            }
            None => self
                .eval()
                .rightmost(&self.sig(v, 0), a, b, 0, self.delta() - 1)
                .expect("nonempty range"),
        }
    }

    /// Position in `L_v[a..=b]` of the entry with the largest x.
    pub fn rightmost_v(&self, v: NodeId, a: usize, b: usize) -> Result<usize> {
        self.check_range(v, a, b)?;
        Ok(self.rightmost_in(v, a, b))
    }

    /// Skyline size of `L_v[..i]`.
    pub fn skycount_prefix(&self, v: NodeId, i: usize) -> Result<usize> {
        if i == 0 || i > self.list_len(v) {
            return Err(Error::Range(format!(
                "prefix length {i} on list of length {}",
                self.list_len(v)
            )));
        }
        Ok(self.sky_prefix(v, i))
    }

    pub(crate) fn sky_prefix(&self, v: NodeId, i: usize) -> usize {
        if v.level == 0 {
            return i;
        }
        match self.tables(v.level) {
            Some(t) => {
                let off = self.leaf_span(v).0;
                i - t.dominated.range_sum(off, off + i) as usize
            }
            None => self
                .eval()
                .skycount(&self.sig(v, 0), 0, i - 1, 0, self.delta() - 1),
        }
    }

    /// Skyline size of `L_v[a..=b]`.
    pub fn skycount_range(&self, v: NodeId, a: usize, b: usize) -> Result<usize> {
        self.check_range(v, a, b)?;
        Ok(self.sky_range(v, a, b))
    }

    pub(crate) fn sky_range(&self, v: NodeId, a: usize, b: usize) -> usize {
        if v.level == 0 {
            return 1;
        }
        if !self.has_tables(v.level) {
            return self
                .eval()
                .skycount(&self.sig(v, 0), a, b, 0, self.delta() - 1);
        }
        let k = self.rightmost_in(v, a, b);
        self.sky_prefix(v, b + 1) - self.sky_prefix(v, k + 1) + 1
    }

    #[inline]
    fn multislab(&self, v: NodeId, i: usize, j: usize) -> &Multislab {
        let d = self.delta();
        let t = self.tables(v.level).expect("multi-block node");
        &t.multislabs[i * d - i * i.saturating_sub(1) / 2 + (j - i)]
    }

    fn check_multislab(&self, v: NodeId, i: usize, j: usize, b: usize, t: usize) -> Result<()> {
        self.check_internal(v)?;
        if i > j || j >= self.degree_of(v) || b > t || t >= self.block_count(v) {
            return Err(Error::Range(format!(
                "slabs [{i}, {j}] blocks [{b}, {t}] on {v:?}"
            )));
        }
        Ok(())
    }

    /// Rightmost entry of blocks `[b, t]` inside slabs `[i, j]`.
    pub fn ms_rightmost(
        &self,
        v: NodeId,
        i: usize,
        j: usize,
        b: usize,
        t: usize,
    ) -> Result<Option<usize>> {
        self.check_multislab(v, i, j, b, t)?;
        Ok(self.ms_rightmost_u(v, i, j, b, t))
    }

    /// Topmost entry of blocks `[b, t]` inside slabs `[i, j]`.
    pub fn ms_topmost(
        &self,
        v: NodeId,
        i: usize,
        j: usize,
        b: usize,
        t: usize,
    ) -> Result<Option<usize>> {
        self.check_multislab(v, i, j, b, t)?;
        Ok(self.ms_topmost_u(v, i, j, b, t))
    }

    /// Skyline size of blocks `[b, t]` inside slabs `[i, j]`.
    pub fn ms_skycount(&self, v: NodeId, i: usize, j: usize, b: usize, t: usize) -> Result<usize> {
        self.check_multislab(v, i, j, b, t)?;
        Ok(self.ms_skycount_u(v, i, j, b, t))
    }

    pub(crate) fn ms_rightmost_u(
        &self,
        v: NodeId,
        i: usize,
        j: usize,
        b: usize,
        t: usize,
    ) -> Option<usize> {
        let g = if b == t {
            b
        } else {
            let gb = self.first_block(v);
            self.multislab(v, i, j).rightmost.argmax(gb + b, gb + t) - gb
        };
        let sig = self.sig(v, g);
        self.eval()
            .rightmost(&sig, 0, sig.len - 1, i, j)
            .map(|l| g * self.block_size() + l)
    }

    pub(crate) fn ms_topmost_u(
        &self,
        v: NodeId,
        i: usize,
        j: usize,
        b: usize,
        t: usize,
    ) -> Option<usize> {
        let g = if b == t {
            b
        } else {
            let gb = self.first_block(v);
            self.multislab(v, i, j).topmost.argmax(gb + b, gb + t) - gb
        };
        let sig = self.sig(v, g);
        self.eval()
            .topmost(&sig, 0, sig.len - 1, i, j)
            .map(|l| g * self.block_size() + l)
    }

    pub(crate) fn ms_skycount_u(&self, v: NodeId, i: usize, j: usize, b: usize, t: usize) -> usize {
        if b == t {
            let sig = self.sig(v, b);
            return self.eval().skycount(&sig, 0, sig.len - 1, i, j);
        }
        let Some(p) = self.ms_rightmost_u(v, i, j, b, t) else {
            return 0;
        };
        let gb = self.first_block(v);
        let k = gb + p / self.block_size();
        let ms = self.multislab(v, i, j);
        (ms.own.range_sum(k, gb + t + 1) - ms.covered.range_sum(k + 1, gb + t + 1)) as usize
    }
}
