//! Counting queries: decomposition into multislabs and the per-multislab
//! five-part count.
//!
//! A query `[x1, x2] x [y1, y2]` splits at the lowest common ancestor of
//! leaves `x1` and `x2`. Its x-span is covered right to left by multislabs on
//! the path towards `x2` (bottom-up), at the ancestor itself, and on the path
//! towards `x1` (top-down). In each node the y-range is a half-open window of
//! list positions `[lo, hi)`. Processing right to left, the lower bound is
//! raised above the topmost point seen so far, since anything lower and to
//! the left is dominated.

use super::signature::Signature;
use super::{BaseTree, NodeId};
use crate::point::RankRect;

/// Per-query instrumentation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QueryStats {
    /// Distinct nodes on the decomposition paths.
    pub node_visits: usize,
    /// Child structures consulted for the slab-local parts.
    pub child_probes: usize,
    /// Multislabs evaluated.
    pub multislabs: usize,
    /// Entries produced by reporting before resolution.
    pub reported: usize,
    /// Pointer jumps spent resolving reported entries.
    pub resolve_jumps: usize,
}

impl QueryStats {
    pub fn add(&mut self, o: &QueryStats) {
        self.node_visits += o.node_visits;
        self.child_probes += o.child_probes;
        self.multislabs += o.multislabs;
        self.reported += o.reported;
        self.resolve_jumps += o.resolve_jumps;
    }
}

/// One multislab of a decomposition, with its window before raising.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MultislabQuery {
    pub node: NodeId,
    /// Inclusive child-slot interval.
    pub slabs: (usize, usize),
    /// Half-open list window selected by the y-range alone.
    pub lo: usize,
    pub hi: usize,
}

#[derive(Clone, Copy, Debug)]
struct Step {
    node: NodeId,
    slabs: Option<(usize, usize)>,
    lo: usize,
    hi: usize,
}

#[derive(Debug)]
struct Plan {
    // top-down
    right: Vec<Step>,
    lca: Step,
    // top-down; entry k is child slot `left_slots[k]` of the node above
    left: Vec<Step>,
    left_slots: Vec<usize>,
}

/// Anchors of the five parts of a multislab spanning more than one block.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Parts {
    pub bot: usize,
    pub top: usize,
    pub bt: usize,
    // rightmost of the top partial block
    pub p1: Option<usize>,
    // first slab right of p1's slab (or i)
    pub mid_lo: usize,
    pub middle: bool,
    pub p2: Option<usize>,
    pub p3: Option<usize>,
    // first slab right of p3's slab (or mid_lo)
    pub bot_lo: usize,
    pub p4: Option<usize>,
}

impl BaseTree {
    fn plan(&self, r: &RankRect, stats: &mut QueryStats) -> Plan {
        let d = self.delta();
        let (x1, x2) = (r.x1, r.x2);
        let mut level = 1;
        while x1 / self.powers[level] != x2 / self.powers[level] {
            level += 1;
        }
        let (mut lo, mut hi) = (r.y1, r.y2 + 1);
        for l in (level + 1..=self.height()).rev() {
            let v = self.ancestor_of_leaf(x1, l);
            let s = self.ancestor_of_leaf(x1, l - 1).index % d;
            stats.node_visits += 1;
            lo = self.count_lt(v, lo, s);
            hi = self.count_lt(v, hi, s);
        }
        stats.node_visits += 1;
        let lca_node = self.ancestor_of_leaf(x1, level);
        let ca = self.ancestor_of_leaf(x1, level - 1);
        let cb = self.ancestor_of_leaf(x2, level - 1);
        let (a, b) = (ca.index % d, cb.index % d);
        let left_covered = level == 1 || self.leaf_span(ca).0 == x1;
        let right_covered = level == 1 || self.leaf_span(cb).1 == x2 + 1;
        let sa = if left_covered { a } else { a + 1 };
        let sb = if right_covered {
            b as isize
        } else {
            b as isize - 1
        };
        let lca = Step {
            node: lca_node,
            slabs: (sa as isize <= sb).then_some((sa, sb as usize)),
            lo,
            hi,
        };

        let mut right = Vec::new();
        if !right_covered {
            let (mut v, mut vlo, mut vhi) = (
                cb,
                self.count_lt(lca_node, lo, b),
                self.count_lt(lca_node, hi, b),
            );
            loop {
                stats.node_visits += 1;
                let c = self.ancestor_of_leaf(x2, v.level - 1);
                let s = c.index % d;
                let covered = v.level == 1 || self.leaf_span(c).1 == x2 + 1;
                let last = if covered { Some(s) } else { s.checked_sub(1) };
                right.push(Step {
                    node: v,
                    slabs: last.map(|t| (0, t)),
                    lo: vlo,
                    hi: vhi,
                });
                if covered {
                    break;
                }
                vlo = self.count_lt(v, vlo, s);
                vhi = self.count_lt(v, vhi, s);
                v = c;
            }
        }

        let mut left = Vec::new();
        let mut left_slots = Vec::new();
        if !left_covered {
            let (mut v, mut vlo, mut vhi) = (
                ca,
                self.count_lt(lca_node, lo, a),
                self.count_lt(lca_node, hi, a),
            );
            left_slots.push(a);
            loop {
                stats.node_visits += 1;
                let c = self.ancestor_of_leaf(x1, v.level - 1);
                let s = c.index % d;
                let covered = v.level == 1 || self.leaf_span(c).0 == x1;
                let first = if covered { s } else { s + 1 };
                let deg = self.degree_of(v);
                left.push(Step {
                    node: v,
                    slabs: (first < deg).then_some((first, deg - 1)),
                    lo: vlo,
                    hi: vhi,
                });
                if covered {
                    break;
                }
                vlo = self.count_lt(v, vlo, s);
                vhi = self.count_lt(v, vhi, s);
                left_slots.push(s);
                v = c;
            }
        }
        Plan {
            right,
            lca,
            left,
            left_slots,
        }
    }

    /// Multislabs covering `r`, right to left, with their y-windows.
    pub fn decompose(&self, r: &RankRect) -> Vec<MultislabQuery> {
        if self.height() == 0 {
            return Vec::new();
        }
        let plan = self.plan(r, &mut QueryStats::default());
        let steps = plan
            .right
            .iter()
            .rev()
            .chain(std::iter::once(&plan.lca))
            .chain(plan.left.iter());
        steps
            .filter_map(|s| {
                s.slabs.map(|slabs| MultislabQuery {
                    node: s.node,
                    slabs,
                    lo: s.lo,
                    hi: s.hi,
                })
            })
            .collect()
    }

    /// Visits the multislabs of `r` right to left with raised lower bounds.
    /// `f` returns the topmost list position it saw, if any.
    pub(crate) fn traverse<F>(&self, r: &RankRect, stats: &mut QueryStats, mut f: F)
    where
        F: FnMut(&Self, NodeId, (usize, usize), usize, usize, &mut QueryStats) -> Option<usize>,
    {
        let plan = self.plan(r, stats);
        let mut run = |step: &Step, lo: usize, stats: &mut QueryStats| -> Option<usize> {
            match step.slabs {
                Some(slabs) if lo < step.hi => {
                    stats.multislabs += 1;
                    f(self, step.node, slabs, lo, step.hi, stats)
                }
                _ => None,
            }
        };

        // topmost seen so far, as a position in the current node's list
        let mut carry: Option<usize> = None;
        for step in plan.right.iter().rev() {
            let lo = carry.map_or(step.lo, |c| step.lo.max(c + 1));
            let t = run(step, lo, stats);
            carry = carry.max(t).map(|c| self.lift(step.node, c));
        }
        let step = &plan.lca;
        let lo = carry.map_or(step.lo, |c| step.lo.max(c + 1));
        let t = run(step, lo, stats);
        let mut threshold = carry.max(t).map_or(lo, |c| lo.max(c + 1));
        let mut parent = plan.lca.node;
        for (step, &slot) in plan.left.iter().zip(&plan.left_slots) {
            let lo = self.count_lt(parent, threshold, slot).max(step.lo);
            threshold = match run(step, lo, stats) {
                Some(t) => lo.max(t + 1),
                None => lo,
            };
            parent = step.node;
        }
    }

    pub(crate) fn parts(&self, v: NodeId, i: usize, j: usize, lo: usize, hi: usize) -> Parts {
        let bsz = self.block_size();
        let (bot, top) = (lo, hi - 1);
        let (bb, bt) = (bot / bsz, top / bsz);
        debug_assert!(bb < bt);

        let e = self.eval();
        let p1 = e
            .rightmost(&self.sig(v, bt), 0, top % bsz, i, j)
            .map(|l| bt * bsz + l);
        let mid_lo = p1.map_or(i, |p| self.slot_at(v, p) + 1);
        let middle = mid_lo <= j && bb + 1 < bt;
        let (p2, p3) = if middle {
            (
                self.ms_topmost_u(v, mid_lo, j, bb + 1, bt - 1),
                self.ms_rightmost_u(v, mid_lo, j, bb + 1, bt - 1),
            )
        } else {
            (None, None)
        };
        let bot_lo = p3.map_or(mid_lo, |p| self.slot_at(v, p) + 1);
        let p4 = if bot_lo <= j {
            let sig = self.sig(v, bb);
            e.topmost(&sig, bot % bsz, sig.len() - 1, bot_lo, j)
                .map(|l| bb * bsz + l)
        } else {
            None
        };
        Parts {
            bot,
            top,
            bt,
            p1,
            mid_lo,
            middle,
            p2,
            p3,
            bot_lo,
            p4,
        }
    }

    /// Child-list range `[start, end]` of slab `s` between list position
    /// `lower` and the slab's entry at `upper`.
    pub(crate) fn slab_range(
        &self,
        v: NodeId,
        s: usize,
        lower: usize,
        upper: usize,
    ) -> (NodeId, usize, usize) {
        (
            self.child(v, s),
            self.count_lt(v, lower, s),
            self.count_lt(v, upper, s),
        )
    }

    /// Topmost list position of the window in slabs `[i, j]`.
    fn window_topmost(&self, v: NodeId, i: usize, j: usize, lo: usize, hi: usize) -> Option<usize> {
        let bsz = self.block_size();
        let (bot, top) = (lo, hi - 1);
        let (bb, bt) = (bot / bsz, top / bsz);

        let e = self.eval();
        let lo_off = if bb == bt { bot % bsz } else { 0 };
        if let Some(l) = e.topmost(&self.sig(v, bt), lo_off, top % bsz, i, j) {
            return Some(bt * bsz + l);
        }
        if bb == bt {
            return None;
        }
        if bb + 1 < bt {
            if let Some(p) = self.ms_topmost_u(v, i, j, bb + 1, bt - 1) {
                return Some(p);
            }
        }
        let sig = self.sig(v, bb);
        e.topmost(&sig, bot % bsz, sig.len() - 1, i, j)
            .map(|l| bb * bsz + l)
    }

    /// Skyline size of the window `[lo, hi)` of `L_v` in slabs `[i, j]`,
    /// with the topmost position found.
    pub(crate) fn multislab_count(
        &self,
        v: NodeId,
        (i, j): (usize, usize),
        lo: usize,
        hi: usize,
        stats: &mut QueryStats,
    ) -> (usize, Option<usize>) {
        let bsz = self.block_size();

        let e = self.eval();
        let topmost = self.window_topmost(v, i, j, lo, hi);
        let (bb, bt) = (lo / bsz, (hi - 1) / bsz);
        if bb == bt {
            let c = e.skycount(&self.sig(v, bb), lo % bsz, (hi - 1) % bsz, i, j);
            return (c, topmost);
        }
        let p = self.parts(v, i, j, lo, hi);
        let mut total = e.skycount(&self.sig(v, bt), 0, p.top % bsz, i, j);
        if p.middle {
            total += self.ms_skycount_u(v, p.mid_lo, j, bb + 1, bt - 1);
        }
        if p.bot_lo <= j {
            let sig = self.sig(v, bb);
            total += e.skycount(&sig, p.bot % bsz, sig.len() - 1, p.bot_lo, j);
        }
        if let Some(p1) = p.p1 {
            let lower = p.p2.or(p.p4).map_or(p.bot, |q| q + 1);
            let (c, a, b) = self.slab_range(v, self.slot_at(v, p1), lower, p1);
            stats.child_probes += 1;
            total += self.sky_range(c, a, b) - 1;
        }
        if let Some(p3) = p.p3 {
            let lower = p.p4.map_or(p.bot, |q| q + 1);
            let (c, a, b) = self.slab_range(v, self.slot_at(v, p3), lower, p3);
            stats.child_probes += 1;
            total += self.sky_range(c, a, b) - 1;
        }
        (total, topmost)
    }

    /// Skyline size inside a rank rectangle.
    pub fn count_rank(&self, r: &RankRect, stats: &mut QueryStats) -> usize {
        match self.len() {
            0 => return 0,
            1 => return 1,
            _ => {}
        }
        let mut total = 0;
        self.traverse(r, stats, |t, v, slabs, lo, hi, st| {
            let (c, top) = t.multislab_count(v, slabs, lo, hi, st);
            total += c;
            top
        });
        total
    }
}
