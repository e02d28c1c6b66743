//! The assembled index: rank reduction, base tree and reporting pointers.

use crate::point::{rank_reduce, PointSet, QueryRect, RankRect, RankSpacePoint, RawPoint};
use crate::report::{fan_for_epsilon, report, BallInheritance};
use crate::space::SpaceReport;
use crate::tree::{default_delta, BaseTree, QueryStats};
use crate::{Error, Result};
use rayon::prelude::*;

/// Build parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct IndexOptions {
    /// Tree degree; `None` picks `max(2, ceil(lg(n)^(1/4)))`.
    pub delta: Option<usize>,
    /// Ball-inheritance fan-out; overrides `epsilon`.
    pub ball_b: Option<usize>,
    /// Picks fan-out `ceil(lg(n)^epsilon)` when `ball_b` is unset.
    pub epsilon: Option<f64>,
    /// Capacity of the block-query memo table; 0 disables it.
    pub memo_capacity: usize,
}

impl Default for IndexOptions {
    fn default() -> Self {
        Self {
            delta: None,
            ball_b: None,
            epsilon: None,
            memo_capacity: 0,
        }
    }
}

impl IndexOptions {
    pub fn with_delta(mut self, delta: usize) -> Self {
        self.delta = Some(delta);
        self
    }

    pub fn with_ball_b(mut self, b: usize) -> Self {
        self.ball_b = Some(b);
        self
    }

    pub fn with_epsilon(mut self, eps: f64) -> Self {
        self.epsilon = Some(eps);
        self
    }

    pub fn with_memo(mut self, capacity: usize) -> Self {
        self.memo_capacity = capacity;
        self
    }

    pub fn resolved_delta(&self, n: usize) -> usize {
        self.delta.unwrap_or_else(|| default_delta(n))
    }

    pub fn resolved_fan(&self, n: usize) -> Result<usize> {
        match (self.ball_b, self.epsilon) {
            (Some(b), _) => Ok(b),
            (None, Some(eps)) if eps > 0.0 && eps < 1.0 => Ok(fan_for_epsilon(n, eps)),
            (None, Some(eps)) => Err(Error::Parameter(format!("epsilon {eps} outside (0, 1)"))),
            (None, None) => Ok(2),
        }
    }
}

/// Skyline counting and reporting index over a static point set.
#[derive(Debug)]
pub struct SkylineIndex {
    pub(crate) points: PointSet,
    pub(crate) tree: BaseTree,
    pub(crate) ball: BallInheritance,
}

impl SkylineIndex {
    /// Builds from raw points; duplicates are rejected.
    pub fn build(raw: &[RawPoint], opts: &IndexOptions) -> Result<Self> {
        Self::from_point_set(rank_reduce(raw)?, opts)
    }

    pub fn from_point_set(points: PointSet, opts: &IndexOptions) -> Result<Self> {
        let n = points.len();
        let mut tree = BaseTree::build(&points, opts.resolved_delta(n))?;
        tree.set_memo_capacity(opts.memo_capacity);
        let ball = BallInheritance::build(&tree, &points, opts.resolved_fan(n)?)?;
        Ok(Self { points, tree, ball })
    }

    pub(crate) fn from_parts(
        points: PointSet,
        tree: BaseTree,
        ball: BallInheritance,
    ) -> Result<Self> {
        if points.len() != tree.len() {
            return Err(Error::Format("point count does not match the tree".into()));
        }
        Ok(Self { points, tree, ball })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn tree(&self) -> &BaseTree {
        &self.tree
    }

    pub fn ball(&self) -> &BallInheritance {
        &self.ball
    }

    pub fn set_memo_capacity(&mut self, capacity: usize) {
        self.tree.set_memo_capacity(capacity);
    }

    /// Rank rectangle for `r`, or `None` when it selects nothing.
    pub fn map_rect(&self, r: &QueryRect) -> Option<RankRect> {
        self.points.map_rect(r)
    }

    /// Skyline size inside `r`.
    pub fn count(&self, r: &QueryRect) -> usize {
        self.count_with_stats(r, &mut QueryStats::default())
    }

    pub fn count_with_stats(&self, r: &QueryRect, stats: &mut QueryStats) -> usize {
        self.map_rect(r)
            .map_or(0, |rr| self.tree.count_rank(&rr, stats))
    }

    pub fn count_rank(&self, r: &RankRect) -> usize {
        self.tree.count_rank(r, &mut QueryStats::default())
    }

    /// Skyline inside `r` in rank space, by decreasing x.
    pub fn report_rank(&self, r: &RankRect, stats: &mut QueryStats) -> Vec<RankSpacePoint> {
        report(&self.tree, &self.ball, r, stats)
    }

    /// Skyline inside `r`, by decreasing x, in input coordinates when known.
    pub fn report(&self, r: &QueryRect) -> Vec<RawPoint> {
        self.report_with_stats(r, &mut QueryStats::default())
    }

    pub fn report_with_stats(&self, r: &QueryRect, stats: &mut QueryStats) -> Vec<RawPoint> {
        match self.map_rect(r) {
            None => Vec::new(),
            Some(rr) => self
                .report_rank(&rr, stats)
                .into_iter()
                .map(|p| self.to_raw(p))
                .collect(),
        }
    }

    pub fn to_raw(&self, p: RankSpacePoint) -> RawPoint {
        self.points
            .raw_of(p)
            .unwrap_or(RawPoint::new(p.x as i64, p.y as i64))
    }

    /// Counts a batch in parallel; results keep the input order.
    pub fn count_batch(&self, rects: &[QueryRect]) -> Vec<usize> {
        rects.par_iter().map(|r| self.count(r)).collect()
    }

    /// Reports a batch in parallel; results keep the input order.
    pub fn report_batch(&self, rects: &[QueryRect]) -> Vec<Vec<RawPoint>> {
        rects.par_iter().map(|r| self.report(r)).collect()
    }

    pub fn space_report(&self) -> SpaceReport {
        SpaceReport::of(self)
    }
}
