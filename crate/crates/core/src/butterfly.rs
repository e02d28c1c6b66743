//! Butterfly graphs and their reduction to two-sided skyline counting.
//!
//! The butterfly of degree `B` and depth `d` has layers `0..=d` of `B^d`
//! nodes. Node `i` of layer `k` has an edge `e_k(i, j)` to every node `j` of
//! layer `k + 1` whose base-`B` digits agree with those of `i` except digit
//! `k` (digit 0 least significant). Each source reaches each sink along
//! exactly one path.
//!
//! Every edge maps to a rectangle which contains `(s, rev(t))` exactly when
//! the edge lies on the `s -> t` path. After a coordinate transform that
//! separates layers, the lower-left corners become points: one point per
//! edge present in a subgraph, two per absent edge. Sink `t` is reachable
//! from `s` in the subgraph iff the two-sided query at the corner
//! `(2d(s+1) - 1, 2d(rev(t)+1) - 1)` has a skyline of exactly `d` points.

use crate::index::SkylineIndex;
use crate::point::{oracle_skyline, QueryRect, RawPoint};
use crate::{Error, Result};
use rand::Rng;

/// Closed integer rectangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rect {
    pub x1: i64,
    pub x2: i64,
    pub y1: i64,
    pub y2: i64,
}

impl Rect {
    pub fn contains(&self, x: i64, y: i64) -> bool {
        self.x1 <= x && x <= self.x2 && self.y1 <= y && y <= self.y2
    }
}

/// Shape of a butterfly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Butterfly {
    pub b: usize,
    pub d: usize,
}

/// An edge `e_k(i, j)` where `j` is `i` with digit `k` set to `c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub k: usize,
    pub i: usize,
    pub c: usize,
}

fn digit(v: usize, b: usize, h: usize) -> usize {
    v / b.pow(h as u32) % b
}

/// `t` written with its `d` base-`b` digits reversed.
pub fn rev_digits(t: usize, b: usize, d: usize) -> Result<usize> {
    if b < 2 || t >= b.pow(d as u32) {
        return Err(Error::Range(format!(
            "{t} is not a {d}-digit base-{b} number"
        )));
    }
    Ok((0..d).fold(0, |acc, h| acc * b + digit(t, b, h)))
}

impl Butterfly {
    pub fn new(b: usize, d: usize) -> Result<Self> {
        if b < 2 || d < 1 {
            return Err(Error::Parameter(format!(
                "butterfly needs B >= 2 and d >= 1, got B={b}, d={d}"
            )));
        }
        if (b as f64).powi(d as i32 + 1) * d as f64 > 1e8 {
            return Err(Error::Parameter(format!(
                "butterfly B={b}, d={d} is too large"
            )));
        }
        Ok(Self { b, d })
    }

    /// Nodes per layer.
    pub fn width(&self) -> usize {
        self.b.pow(self.d as u32)
    }

    pub fn edge_count(&self) -> usize {
        self.d * self.width() * self.b
    }

    pub fn edge_id(&self, e: Edge) -> usize {
        (e.k * self.width() + e.i) * self.b + e.c
    }

    pub fn edge_of(&self, id: usize) -> Edge {
        Edge {
            k: id / self.b / self.width(),
            i: id / self.b % self.width(),
            c: id % self.b,
        }
    }

    /// Head of an edge.
    pub fn target(&self, e: Edge) -> usize {
        let p = self.b.pow(e.k as u32);
        e.i - digit(e.i, self.b, e.k) * p + e.c * p
    }

    /// The edge `e_k(i, j)`, if `i` and `j` differ at most in digit `k`.
    pub fn edge(&self, k: usize, i: usize, j: usize) -> Result<Edge> {
        let w = self.width();
        if k >= self.d || i >= w || j >= w {
            return Err(Error::Validation(format!(
                "e_{k}({i}, {j}) outside the butterfly"
            )));
        }
        let e = Edge {
            k,
            i,
            c: digit(j, self.b, k),
        };
        if self.target(e) != j {
            return Err(Error::Validation(format!(
                "{i} and {j} differ outside digit {k}"
            )));
        }
        Ok(e)
    }

    fn rev(&self, t: usize) -> usize {
        rev_digits(t, self.b, self.d).expect("sink in range")
    }

    /// Unique source-to-sink path, one edge per layer.
    pub fn path(&self, s: usize, t: usize) -> Vec<Edge> {
        let mut cur = s;
        (0..self.d)
            .map(|k| {
                let e = Edge {
                    k,
                    i: cur,
                    c: digit(t, self.b, k),
                };
                cur = self.target(e);
                e
            })
            .collect()
    }

    /// Rectangle of `e_k(i, j)`: sources sharing digits `k..d` with `i`
    /// times sinks whose reversed low digits `0..=k` match `j`.
    pub fn edge_rect(&self, k: usize, i: usize, j: usize) -> Result<Rect> {
        let e = self.edge(k, i, j)?;
        Ok(self.rect_of(e))
    }

    pub fn rect_of(&self, e: Edge) -> Rect {
        let (b, d) = (self.b, self.d);
        let j = self.target(e);
        let low = b.pow(e.k as u32);
        let x1 = e.i / low * low;
        let y1: usize = (0..=e.k)
            .map(|h| digit(j, b, h) * b.pow((d - 1 - h) as u32))
            .sum();
        let hgt = b.pow((d - 1 - e.k) as u32);
        Rect {
            x1: x1 as i64,
            x2: (x1 + low - 1) as i64,
            y1: y1 as i64,
            y2: (y1 + hgt - 1) as i64,
        }
    }

    /// Two-sided query corner for `(s, t)` in the doubled coordinates.
    pub fn query_corner(&self, s: usize, t: usize) -> (i64, i64) {
        let d = self.d as i64;
        (
            2 * d * (s as i64 + 1) - 1,
            2 * d * (self.rev(t) as i64 + 1) - 1,
        )
    }

    pub fn query_rect(&self, s: usize, t: usize) -> QueryRect {
        let (x, y) = self.query_corner(s, t);
        QueryRect::new(0, x, 0, y)
    }
}

/// Separates layers so corners from different layers in one grid cell stop
/// dominating each other.
pub fn transform_pi(r: Rect, k: usize, d: usize) -> Rect {
    let (k, d) = (k as i64, d as i64);
    Rect {
        x1: d * r.x1 + (d - 1 - k),
        x2: d * r.x2 + d - 1,
        y1: d * r.y1 + k,
        y2: d * r.y2 + d - 1,
    }
}

/// A set of retained butterfly edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgraph {
    pub shape: Butterfly,
    pub present: Vec<bool>,
}

impl Subgraph {
    pub fn full(shape: Butterfly) -> Self {
        Self {
            shape,
            present: vec![true; shape.edge_count()],
        }
    }

    pub fn empty(shape: Butterfly) -> Self {
        Self {
            shape,
            present: vec![false; shape.edge_count()],
        }
    }

    /// Keeps every edge independently with probability `p`.
    pub fn random<R: Rng>(shape: Butterfly, p: f64, rng: &mut R) -> Self {
        Self {
            shape,
            present: (0..shape.edge_count()).map(|_| rng.gen_bool(p)).collect(),
        }
    }

    pub fn without(mut self, edges: &[Edge]) -> Self {
        for &e in edges {
            let id = self.shape.edge_id(e);
            self.present[id] = false;
        }
        self
    }

    pub fn has(&self, e: Edge) -> bool {
        self.present[self.shape.edge_id(e)]
    }

    /// Layer-by-layer search from source `s`.
    pub fn bfs_reachable(&self, s: usize, t: usize) -> bool {
        let sh = self.shape;
        let mut cur = vec![false; sh.width()];
        cur[s] = true;
        for k in 0..sh.d {
            let mut next = vec![false; sh.width()];
            for i in (0..sh.width()).filter(|&i| cur[i]) {
                for c in 0..sh.b {
                    let e = Edge { k, i, c };
                    if self.has(e) {
                        next[sh.target(e)] = true;
                    }
                }
            }
            cur = next;
        }
        cur[t]
    }
}

/// Depth-3 binary butterfly with the layer-1 edge of the path from
/// `s = 001` to `t = 110` removed, plus two edges off that path.
pub fn punctured_fixture() -> (Subgraph, [Edge; 3]) {
    let sh = Butterfly::new(2, 3).unwrap();
    let a = sh.edge(0, 3, 2).unwrap();
    let b = sh.edge(1, 0, 2).unwrap();
    let c = sh.edge(2, 5, 1).unwrap();
    (Subgraph::full(sh).without(&[a, b, c]), [a, b, c])
}

/// Point set `P(G)` with per-point provenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionInstance {
    pub shape: Butterfly,
    pub points: Vec<RawPoint>,
    /// Edge id and whether it is present, for each point.
    pub origin: Vec<(usize, bool)>,
}

/// Corner of the transformed rectangle of every edge, in edge-id order.
pub fn transformed_corners(shape: Butterfly) -> Vec<(i64, i64)> {
    (0..shape.edge_count())
        .map(|id| {
            let e = shape.edge_of(id);
            let r = transform_pi(shape.rect_of(e), e.k, shape.d);
            (r.x1, r.y1)
        })
        .collect()
}

pub fn build_points(g: &Subgraph) -> ReductionInstance {
    let mut points = Vec::new();
    let mut origin = Vec::new();
    for (id, (x, y)) in transformed_corners(g.shape).into_iter().enumerate() {
        let (x, y) = (2 * x, 2 * y);
        if g.present[id] {
            points.push(RawPoint::new(x + 1, y + 1));
            origin.push((id, true));
        } else {
            points.push(RawPoint::new(x + 1, y));
            points.push(RawPoint::new(x, y + 1));
            origin.push((id, false));
            origin.push((id, false));
        }
    }
    ReductionInstance {
        shape: g.shape,
        points,
        origin,
    }
}

impl ReductionInstance {
    /// Skyline size of the two-sided query for `(s, t)`.
    pub fn query_count(&self, index: &SkylineIndex, s: usize, t: usize) -> usize {
        index.count(&self.shape.query_rect(s, t))
    }
}

/// Reachability answered by one skyline count.
///
/// # Panics
/// If the count is below `d`, which no correct index can produce.
pub fn reach_via_skyline(
    inst: &ReductionInstance,
    index: &SkylineIndex,
    s: usize,
    t: usize,
) -> bool {
    let c = inst.query_count(index, s, t);
    assert!(
        c >= inst.shape.d,
        "skyline count {c} below depth {} for ({s}, {t})",
        inst.shape.d
    );
    c == inst.shape.d
}

/// Skyline of the corner set under `(-inf, dx+d-1] x (-inf, dy+d-1]`, and
/// the corners of the transformed rectangles whose originals contain
/// `(x, y)`. Both sorted.
pub fn stabbing_sets(shape: Butterfly, x: usize, y: usize) -> (Vec<(i64, i64)>, Vec<(i64, i64)>) {
    let corners = transformed_corners(shape);
    let d = shape.d as i64;
    let q = QueryRect::new(
        i64::MIN,
        d * x as i64 + d - 1,
        i64::MIN,
        d * y as i64 + d - 1,
    );
    let mut sky = oracle_skyline(&corners, &q);
    sky.sort();
    let mut stabbed: Vec<(i64, i64)> = (0..shape.edge_count())
        .filter(|&id| {
            shape
                .rect_of(shape.edge_of(id))
                .contains(x as i64, y as i64)
        })
        .map(|id| corners[id])
        .collect();
    stabbed.sort();
    (sky, stabbed)
}

pub fn stabbing_check(shape: Butterfly, x: usize, y: usize) -> bool {
    let (sky, stabbed) = stabbing_sets(shape, x, y);
    sky == stabbed
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::IndexOptions;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn digit_reversal() {
        assert_eq!(rev_digits(6, 2, 3).unwrap(), 3);
        assert_eq!(rev_digits(0, 2, 3).unwrap(), 0);
        for t in 0..27 {
            assert_eq!(rev_digits(rev_digits(t, 3, 3).unwrap(), 3, 3).unwrap(), t);
        }
        assert!(rev_digits(8, 2, 3).is_err());
    }

    #[test]
    fn rectangles() {
        let sh = Butterfly::new(2, 3).unwrap();
        let r = sh.edge_rect(0, 1, 0).unwrap();
        assert_eq!((r.x1, r.x2, r.y1, r.y2), (1, 1, 0, 3));
        assert!(sh.edge_rect(0, 1, 2).is_err());
        for i in 0..8 {
            let j = i ^ 4;
            let r = sh.edge_rect(2, i, j).unwrap();
            assert_eq!(r.x2 - r.x1 + 1, 4);
        }
    }

    #[test]
    fn membership_law_exhaustive_binary() {
        for d in 1..=3 {
            let sh = Butterfly::new(2, d).unwrap();
            check_membership(sh, sh.width());
        }
        check_membership(Butterfly::new(3, 2).unwrap(), 9);
    }

    fn check_membership(sh: Butterfly, w: usize) {
        for s in 0..w {
            for t in 0..w {
                let path = sh.path(s, t);
                assert_eq!(sh.target(*path.last().unwrap()), t);
                for id in 0..sh.edge_count() {
                    let e = sh.edge_of(id);
                    let inside = sh.rect_of(e).contains(s as i64, sh.rev(t) as i64);
                    assert_eq!(inside, path.contains(&e), "{e:?} s={s} t={t}");
                }
            }
        }
    }

    #[test]
    fn transform_fixtures() {
        let r = Rect {
            x1: 1,
            x2: 1,
            y1: 0,
            y2: 1,
        };
        assert_eq!(
            transform_pi(r, 0, 3),
            Rect {
                x1: 5,
                x2: 5,
                y1: 0,
                y2: 5
            }
        );
        let t = transform_pi(
            Rect {
                x1: 2,
                x2: 3,
                y1: 4,
                y2: 4,
            },
            2,
            3,
        );
        assert_eq!((t.x1, t.y1), (6, 14));
    }

    #[test]
    fn transform_separates_layers_in_a_cell() {
        let sh = Butterfly::new(2, 3).unwrap();
        let corners = transformed_corners(sh);
        for a in 0..sh.edge_count() {
            for b in 0..sh.edge_count() {
                let (ea, eb) = (sh.edge_of(a), sh.edge_of(b));
                let (ra, rb) = (sh.rect_of(ea), sh.rect_of(eb));
                if ea.k != eb.k && ra.x1 == rb.x1 && ra.y1 == rb.y1 {
                    let (pa, pb) = (corners[a], corners[b]);
                    assert!(!(pb.0 <= pa.0 && pb.1 <= pa.1));
                }
            }
        }
    }

    #[test]
    fn point_counts() {
        let sh = Butterfly::new(2, 3).unwrap();
        assert_eq!(build_points(&Subgraph::full(sh)).points.len(), 3 * 16);
        assert_eq!(build_points(&Subgraph::empty(sh)).points.len(), 2 * 3 * 16);
        let (g, dropped) = punctured_fixture();
        let inst = build_points(&g);
        assert_eq!(inst.points.len(), 48 + 3);
        for e in dropped {
            let id = sh.edge_id(e);
            assert_eq!(inst.origin.iter().filter(|o| o.0 == id).count(), 2);
        }
    }

    #[test]
    fn corner_of_sample_query() {
        let sh = Butterfly::new(2, 3).unwrap();
        assert_eq!(sh.query_corner(1, 6), (11, 23));
    }

    #[test]
    fn punctured_path_is_unreachable() {
        let sh = Butterfly::new(2, 3).unwrap();
        let full = build_points(&Subgraph::full(sh));
        let idx = SkylineIndex::build(&full.points, &IndexOptions::default()).unwrap();
        assert!(reach_via_skyline(&full, &idx, 1, 6));
        let (g, _) = punctured_fixture();
        let inst = build_points(&g);
        let idx = SkylineIndex::build(&inst.points, &IndexOptions::default()).unwrap();
        assert!(!reach_via_skyline(&inst, &idx, 1, 6));
        assert_eq!(inst.query_count(&idx, 1, 6), 4);
        assert!(!g.bfs_reachable(1, 6));
    }

    #[test]
    fn random_subgraphs_agree_with_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let sh = Butterfly::new(2, 2).unwrap();
        for _ in 0..20 {
            let g = Subgraph::random(sh, 0.6, &mut rng);
            let inst = build_points(&g);
            let idx = SkylineIndex::build(&inst.points, &IndexOptions::default()).unwrap();
            for s in 0..4 {
                for t in 0..4 {
                    assert_eq!(reach_via_skyline(&inst, &idx, s, t), g.bfs_reachable(s, t));
                }
            }
        }
    }

    #[test]
    fn stabbing_matches_skyline() {
        for d in 1..=3 {
            let sh = Butterfly::new(2, d).unwrap();
            for x in 0..sh.width() {
                for y in 0..sh.width() {
                    let (sky, stabbed) = stabbing_sets(sh, x, y);
                    assert_eq!(sky, stabbed);
                    assert_eq!(stabbed.len(), d);
                }
            }
        }
    }
}
