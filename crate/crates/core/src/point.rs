//! Points, rectangles, rank reduction and the brute-force skyline.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// A point with arbitrary integer coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RawPoint {
    pub x: i64,
    pub y: i64,
}

impl RawPoint {
    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }
}

/// A point whose coordinates are ranks in `0..n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RankSpacePoint {
    pub x: usize,
    pub y: usize,
}

impl RankSpacePoint {
    pub const fn new(x: usize, y: usize) -> Self {
        Self { x, y }
    }
}

/// Anything that can be read as an `(x, y)` integer pair.
pub trait Coords {
    fn xy(&self) -> (i64, i64);
}

impl Coords for RawPoint {
    fn xy(&self) -> (i64, i64) {
        (self.x, self.y)
    }
}

impl Coords for RankSpacePoint {
    fn xy(&self) -> (i64, i64) {
        (self.x as i64, self.y as i64)
    }
}

impl Coords for (i64, i64) {
    fn xy(&self) -> (i64, i64) {
        *self
    }
}

/// `p` dominates `q` when `q.x <= p.x` and `q.y <= p.y`.
pub fn dominates<P: Coords, Q: Coords>(p: &P, q: &Q) -> bool {
    let (px, py) = p.xy();
    let (qx, qy) = q.xy();
    qx <= px && qy <= py
}

/// Closed rectangle `[x1, x2] x [y1, y2]`. A rectangle with `x1 > x2` or
/// `y1 > y2` is empty.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QueryRect {
    pub x1: i64,
    pub x2: i64,
    pub y1: i64,
    pub y2: i64,
}

impl QueryRect {
    pub const fn new(x1: i64, x2: i64, y1: i64, y2: i64) -> Self {
        Self { x1, x2, y1, y2 }
    }

    /// The whole plane.
    pub const fn everything() -> Self {
        Self::new(i64::MIN, i64::MAX, i64::MIN, i64::MAX)
    }

    pub fn is_empty(&self) -> bool {
        self.x1 > self.x2 || self.y1 > self.y2
    }

    pub fn contains<P: Coords>(&self, p: &P) -> bool {
        let (x, y) = p.xy();
        self.x1 <= x && x <= self.x2 && self.y1 <= y && y <= self.y2
    }
}

/// A nonempty closed rectangle in rank space, all bounds inside `0..n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RankRect {
    pub x1: usize,
    pub x2: usize,
    pub y1: usize,
    pub y2: usize,
}

impl RankRect {
    pub fn contains(&self, p: RankSpacePoint) -> bool {
        self.x1 <= p.x && p.x <= self.x2 && self.y1 <= p.y && p.y <= self.y2
    }
}

/// Rank-space point set stored by x-rank, optionally with the original
/// coordinates needed to translate raw queries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    y_of_x: Vec<usize>,
    // raw (x, y) of the point with x-rank r
    x_keys: Option<Vec<(i64, i64)>>,
    // raw (y, x) of the point with y-rank r
    y_keys: Option<Vec<(i64, i64)>>,
}

impl PointSet {
    /// Builds from y-ranks listed in x-rank order; `ys` must be a permutation.
    pub fn from_permutation(ys: Vec<usize>) -> Result<Self> {
        let n = ys.len();
        let mut seen = vec![false; n];
        for &y in &ys {
            if y >= n || std::mem::replace(&mut seen[y], true) {
                return Err(Error::Validation(format!(
                    "y-rank {y} repeated or outside 0..{n}"
                )));
            }
        }
        Ok(Self {
            y_of_x: ys,
            x_keys: None,
            y_keys: None,
        })
    }

    /// Builds from rank-space points in any order.
    pub fn from_rank_points(points: &[RankSpacePoint]) -> Result<Self> {
        let n = points.len();
        let mut ys = vec![usize::MAX; n];
        for p in points {
            if p.x >= n || ys[p.x] != usize::MAX {
                return Err(Error::Validation(format!(
                    "x-rank {} repeated or outside 0..{n}",
                    p.x
                )));
            }
            ys[p.x] = p.y;
        }
        Self::from_permutation(ys)
    }

    pub fn len(&self) -> usize {
        self.y_of_x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y_of_x.is_empty()
    }

    pub fn y_of_x(&self) -> &[usize] {
        &self.y_of_x
    }

    pub fn point(&self, x: usize) -> RankSpacePoint {
        RankSpacePoint::new(x, self.y_of_x[x])
    }

    pub fn points(&self) -> impl Iterator<Item = RankSpacePoint> + '_ {
        self.y_of_x
            .iter()
            .enumerate()
            .map(|(x, &y)| RankSpacePoint::new(x, y))
    }

    pub fn has_raw(&self) -> bool {
        self.x_keys.is_some()
    }

    /// Original coordinates of a rank-space point, when known.
    pub fn raw_of(&self, p: RankSpacePoint) -> Option<RawPoint> {
        self.x_keys
            .as_ref()
            .map(|k| RawPoint::new(k[p.x].0, k[p.x].1))
    }

    pub(crate) fn raw_keys(&self) -> Option<(&[(i64, i64)], &[(i64, i64)])> {
        Some((self.x_keys.as_deref()?, self.y_keys.as_deref()?))
    }

    pub(crate) fn with_raw_keys(
        ys: Vec<usize>,
        x_keys: Vec<(i64, i64)>,
        y_keys: Vec<(i64, i64)>,
    ) -> Result<Self> {
        let mut ps = Self::from_permutation(ys)?;
        if x_keys.len() != ps.len() || y_keys.len() != ps.len() {
            return Err(Error::Validation("coordinate key length mismatch".into()));
        }
        ps.x_keys = Some(x_keys);
        ps.y_keys = Some(y_keys);
        Ok(ps)
    }

    /// Translates a rectangle to rank space. With raw keys the bounds are
    /// raw coordinates; without them the bounds are already ranks.
    pub fn map_rect(&self, r: &QueryRect) -> Option<RankRect> {
        if r.is_empty() || self.is_empty() {
            return None;
        }
        let n = self.len();
        let (x1, x2, y1, y2) = match (&self.x_keys, &self.y_keys) {
            (Some(xk), Some(yk)) => {
                let x1 = xk.partition_point(|k| k.0 < r.x1);
                let x2 = xk.partition_point(|k| k.0 <= r.x2);
                let y1 = yk.partition_point(|k| k.0 < r.y1);
                let y2 = yk.partition_point(|k| k.0 <= r.y2);
                (x1, x2, y1, y2)
            }
            _ => {
                let clamp = |v: i64| v.clamp(0, n as i64) as usize;
                (
                    clamp(r.x1),
                    clamp(r.x2.saturating_add(1)),
                    clamp(r.y1),
                    clamp(r.y2.saturating_add(1)),
                )
            }
        };
        (x1 < x2 && y1 < y2).then(|| RankRect {
            x1,
            x2: x2 - 1,
            y1,
            y2: y2 - 1,
        })
    }
}

/// Replaces coordinates by ranks. Ties in x are broken by ascending y and
/// ties in y by ascending x, which keeps every pairwise dominance relation.
pub fn rank_reduce(raw: &[RawPoint]) -> Result<PointSet> {
    let n = raw.len();
    let mut by_x: Vec<usize> = (0..n).collect();
    by_x.sort_by_key(|&i| (raw[i].x, raw[i].y));
    if let Some(w) = by_x.windows(2).find(|w| raw[w[0]] == raw[w[1]]) {
        let p = raw[w[0]];
        return Err(Error::Validation(format!(
            "duplicate point ({}, {})",
            p.x, p.y
        )));
    }
    let mut by_y: Vec<usize> = (0..n).collect();
    by_y.sort_by_key(|&i| (raw[i].y, raw[i].x));
    let mut y_rank = vec![0; n];
    for (r, &i) in by_y.iter().enumerate() {
        y_rank[i] = r;
    }
    let ys = by_x.iter().map(|&i| y_rank[i]).collect();
    let x_keys = by_x.iter().map(|&i| (raw[i].x, raw[i].y)).collect();
    let y_keys = by_y.iter().map(|&i| (raw[i].y, raw[i].x)).collect();
    PointSet::with_raw_keys(ys, x_keys, y_keys)
}

/// Maximal points of `pts` inside `r`, by strictly decreasing x.
pub fn oracle_skyline<P: Coords + Clone>(pts: &[P], r: &QueryRect) -> Vec<P> {
    let mut inside: Vec<&P> = pts.iter().filter(|p| r.contains(*p)).collect();
    inside.sort_by(|a, b| b.xy().cmp(&a.xy()));
    let mut out = Vec::new();
    let mut best_y = None;
    for p in inside {
        let y = p.xy().1;
        if best_y.is_none_or(|b| y > b) {
            best_y = Some(y);
            out.push(p.clone());
        }
    }
    out
}

/// Size of [`oracle_skyline`].
pub fn oracle_count<P: Coords + Clone>(pts: &[P], r: &QueryRect) -> usize {
    oracle_skyline(pts, r).len()
}

/// Skyline of a rank-space set inside a rank rectangle, by decreasing x.
/// Scans the x-range once instead of sorting.
pub fn rank_oracle_skyline(ps: &PointSet, r: &RankRect) -> Vec<RankSpacePoint> {
    let ys = ps.y_of_x();
    let mut out = Vec::new();
    let mut best: Option<usize> = None;
    for x in (r.x1..=r.x2).rev() {
        let y = ys[x];
        if y >= r.y1 && y <= r.y2 && best.is_none_or(|b| y > b) {
            best = Some(y);
            out.push(RankSpacePoint::new(x, y));
        }
    }
    out
}
