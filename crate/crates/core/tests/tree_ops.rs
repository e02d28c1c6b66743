use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use skycount::tree::{BaseTree, MultislabQuery, NodeId, QueryStats};
use skycount::{IndexOptions, PointSet, RankRect, RankSpacePoint, SkylineIndex};

fn random_set(n: usize, seed: u64) -> PointSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ys: Vec<usize> = (0..n).collect();
    ys.shuffle(&mut rng);
    PointSet::from_permutation(ys).unwrap()
}

fn slot_of(tree: &BaseTree, v: NodeId, p: RankSpacePoint) -> usize {
    (0..tree.degree_of(v))
        .find(|&s| {
            let (a, b) = tree.leaf_span(tree.child(v, s));
            (a..b).contains(&p.x)
        })
        .unwrap()
}

fn naive_skycount(xs: &[usize]) -> usize {
    (0..xs.len())
        .filter(|&p| xs[p + 1..].iter().all(|&q| q < xs[p]))
        .count()
}

fn argmax(xs: &[usize]) -> usize {
    (0..xs.len()).max_by_key(|&i| xs[i]).unwrap()
}

fn internal_nodes(tree: &BaseTree) -> Vec<NodeId> {
    (1..=tree.height())
        .flat_map(|l| (0..tree.level_len(l)).map(move |k| NodeId::new(l, k)))
        .collect()
}

#[test]
fn node_queries_match_materialized_lists() {
    for (n, delta) in [(37, 2), (64, 2), (90, 3), (150, 4), (200, 5)] {
        let ps = random_set(n, n as u64);
        let tree = BaseTree::build(&ps, delta).unwrap();
        tree.check_against(&ps).unwrap();
        for v in internal_nodes(&tree) {
            let list = tree.materialize_list(&ps, v);
            assert_eq!(tree.list_len(v), list.len());
            let xs: Vec<usize> = list.iter().map(|p| p.x).collect();
            let slots: Vec<usize> = list.iter().map(|&p| slot_of(&tree, v, p)).collect();
            for t in 0..list.len() {
                for s in 0..tree.degree_of(v) {
                    let before = slots[..=t].iter().filter(|&&c| c == s).count();
                    assert_eq!(tree.pred(v, t, s).unwrap(), before.checked_sub(1));
                    let at_or_after = slots[..t].iter().filter(|&&c| c == s).count();
                    let child_len = tree.list_len(tree.child(v, s));
                    assert_eq!(
                        tree.succ(v, t, s).unwrap(),
                        (at_or_after < child_len).then_some(at_or_after)
                    );
                }
                if v.level < tree.height() {
                    let (p, _) = tree.parent(v);
                    let plist = tree.materialize_list(&ps, p);
                    let want = plist.iter().position(|q| *q == list[t]).unwrap();
                    assert_eq!(tree.parent_position(v, t).unwrap(), want);
                }
                assert_eq!(
                    tree.skycount_prefix(v, t + 1).unwrap(),
                    naive_skycount(&xs[..=t])
                );
            }
            for a in 0..list.len() {
                for b in a..list.len() {
                    assert_eq!(tree.rightmost_v(v, a, b).unwrap(), a + argmax(&xs[a..=b]));
                    assert_eq!(
                        tree.skycount_range(v, a, b).unwrap(),
                        naive_skycount(&xs[a..=b])
                    );
                }
            }
            let bsz = tree.signature_format().block;
            let nblocks = tree.block_count(v);
            for i in 0..tree.degree_of(v) {
                for j in i..tree.degree_of(v) {
                    for b in 0..nblocks {
                        for t in b..nblocks {
                            let range = b * bsz..((t + 1) * bsz).min(list.len());
                            let inside: Vec<usize> =
                                range.filter(|&p| (i..=j).contains(&slots[p])).collect();
                            let sub: Vec<usize> = inside.iter().map(|&p| xs[p]).collect();
                            let right = (!sub.is_empty()).then(|| inside[argmax(&sub)]);
                            assert_eq!(tree.ms_rightmost(v, i, j, b, t).unwrap(), right);
                            assert_eq!(
                                tree.ms_topmost(v, i, j, b, t).unwrap(),
                                inside.last().copied()
                            );
                            assert_eq!(
                                tree.ms_skycount(v, i, j, b, t).unwrap(),
                                naive_skycount(&sub)
                            );
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn node_queries_reject_bad_arguments() {
    let ps = random_set(40, 1);
    let tree = BaseTree::build(&ps, 2).unwrap();
    let root = tree.root();
    assert!(tree.rightmost_v(root, 5, 4).is_err());
    assert!(tree.rightmost_v(root, 0, 40).is_err());
    assert!(tree.skycount_prefix(root, 0).is_err());
    assert!(tree.parent_position(root, 0).is_err());
    assert!(tree.pred(root, 0, 2).is_err());
    assert!(tree.ms_skycount(root, 1, 0, 0, 0).is_err());
    assert!(tree.ms_rightmost(root, 0, 1, 0, 99).is_err());
    assert!(tree.pred(NodeId::new(0, 3), 0, 0).is_err());
    assert!(BaseTree::build(&ps, 1).is_err());
}

#[test]
fn decomposition_of_a_sixteen_leaf_tree() {
    let tree = BaseTree::build(&random_set(16, 3), 4).unwrap();
    let r = RankRect {
        x1: 5,
        x2: 10,
        y1: 0,
        y2: 15,
    };
    let parts = tree.decompose(&r);
    let got: Vec<(NodeId, (usize, usize))> = parts.iter().map(|q| (q.node, q.slabs)).collect();
    assert_eq!(
        got,
        vec![(NodeId::new(1, 2), (0, 2)), (NodeId::new(1, 1), (1, 3))]
    );
}

// entries of each multislab query, as points
fn covered_points(tree: &BaseTree, ps: &PointSet, q: &MultislabQuery) -> Vec<RankSpacePoint> {
    let list = tree.materialize_list(ps, q.node);
    list[q.lo..q.hi]
        .iter()
        .copied()
        .filter(|&p| (q.slabs.0..=q.slabs.1).contains(&slot_of(tree, q.node, p)))
        .collect()
}

#[test]
fn decomposition_partitions_the_rectangle() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for (n, delta) in [(50, 2), (81, 3), (300, 4), (64, 8)] {
        let ps = random_set(n, n as u64 + 1);
        let tree = BaseTree::build(&ps, delta).unwrap();
        for _ in 0..300 {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let (c, d) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let r = RankRect {
                x1: a.min(b),
                x2: a.max(b),
                y1: c.min(d),
                y2: c.max(d),
            };
            let parts = tree.decompose(&r);
            let mut seen: Vec<RankSpacePoint> = parts
                .iter()
                .flat_map(|q| covered_points(&tree, &ps, q))
                .collect();
            let mut want: Vec<RankSpacePoint> = ps.points().filter(|&p| r.contains(p)).collect();
            seen.sort();
            want.sort();
            assert_eq!(seen, want, "{r:?}");
            for w in parts.windows(2) {
                let (_, hi) = tree.leaf_span(tree.child(w[1].node, w[1].slabs.1));
                let (lo, _) = tree.leaf_span(tree.child(w[0].node, w[0].slabs.0));
                assert!(hi <= lo, "multislabs out of right-to-left order");
            }
        }
    }
}

#[test]
fn ball_inheritance_resolves_every_position() {
    for (n, delta, fan) in [(100, 2, 2), (243, 3, 2), (500, 2, 3), (700, 4, 5)] {
        let ps = random_set(n, 9);
        let idx = SkylineIndex::from_point_set(
            ps.clone(),
            &IndexOptions::default().with_delta(delta).with_ball_b(fan),
        )
        .unwrap();
        let (tree, ball) = (idx.tree(), idx.ball());
        assert!(ball.jump_bound() <= ball.max_exponent() + 2);
        for l in 0..=tree.height() {
            for k in 0..tree.level_len(l) {
                let v = NodeId::new(l, k);
                for (i, p) in tree.materialize_list(&ps, v).into_iter().enumerate() {
                    assert_eq!(ball.resolve(tree, v, i).unwrap(), p, "{v:?}[{i}]");
                }
            }
        }
        assert!(ball.resolve(tree, tree.root(), n).is_err());
    }
}

#[test]
fn query_counters_stay_within_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (n, delta, fan) in [(1000, 2, 2), (3000, 3, 4), (5000, 5, 2)] {
        let idx = SkylineIndex::from_point_set(
            random_set(n, 2),
            &IndexOptions::default().with_delta(delta).with_ball_b(fan),
        )
        .unwrap();
        let bound = skycount::cli::visit_bound(n, delta);
        for _ in 0..500 {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let (c, d) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let r = RankRect {
                x1: a.min(b),
                x2: a.max(b),
                y1: c.min(d),
                y2: c.max(d),
            };
            let mut st = QueryStats::default();
            idx.tree().count_rank(&r, &mut st);
            assert!(st.node_visits <= bound);
            let mut rs = QueryStats::default();
            let pts = idx.report_rank(&r, &mut rs);
            assert_eq!(rs.reported, pts.len());
            assert!(rs.resolve_jumps <= pts.len() * idx.ball().jump_bound());
        }
    }
}

#[test]
fn memo_table_leaves_answers_unchanged() {
    let ps = random_set(800, 6);
    let plain = SkylineIndex::from_point_set(ps.clone(), &IndexOptions::default()).unwrap();
    let memo = SkylineIndex::from_point_set(ps, &IndexOptions::default().with_memo(4096)).unwrap();
    assert_eq!(memo.tree().memo_capacity(), 4096);
    for r in skycount::cli::random_rank_rects(800, 2000, 7) {
        assert_eq!(plain.count_rank(&r), memo.count_rank(&r));
        assert_eq!(
            plain.report_rank(&r, &mut QueryStats::default()),
            memo.report_rank(&r, &mut QueryStats::default())
        );
    }
}

#[test]
fn degenerate_sizes() {
    for n in 0..=3 {
        let idx = SkylineIndex::from_point_set(random_set(n, 0), &IndexOptions::default()).unwrap();
        if n == 0 {
            assert_eq!(idx.count(&skycount::QueryRect::everything()), 0);
            continue;
        }
        let r = RankRect {
            x1: 0,
            x2: n - 1,
            y1: 0,
            y2: n - 1,
        };
        let want = skycount::point::rank_oracle_skyline(idx.points(), &r);
        assert_eq!(idx.count_rank(&r), want.len());
        assert_eq!(idx.report_rank(&r, &mut QueryStats::default()), want);
    }
}
