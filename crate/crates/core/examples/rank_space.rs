// Work directly in rank space: a permutation of `0..n` is a point set.

use skycount::point::{oracle_skyline, rank_oracle_skyline, rank_reduce};
use skycount::tree::QueryStats;
use skycount::{IndexOptions, PointSet, QueryRect, RankRect, RawPoint, SkylineIndex};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ps = PointSet::from_permutation(vec![4, 0, 6, 2, 7, 1, 5, 3])?;
    let index = SkylineIndex::from_point_set(ps.clone(), &IndexOptions::default().with_delta(2))?;

    let r = RankRect {
        x1: 1,
        x2: 6,
        y1: 0,
        y2: 6,
    };
    let mut stats = QueryStats::default();
    let got = index.report_rank(&r, &mut stats);
    assert_eq!(got, rank_oracle_skyline(&ps, &r));
    println!(
        "rank skyline {got:?} after {} node visits",
        stats.node_visits
    );

    let raw = vec![
        RawPoint::new(-50, 10),
        RawPoint::new(12, -3),
        RawPoint::new(7, 40),
        RawPoint::new(30, 30),
    ];
    let reduced = rank_reduce(&raw)?;
    let q = QueryRect::new(-100, 20, -100, 100);
    let mapped = reduced.map_rect(&q).expect("window holds points");
    println!("{q:?} maps to {mapped:?}");
    let idx = SkylineIndex::from_point_set(reduced, &IndexOptions::default())?;
    let mut want = oracle_skyline(&raw, &q);
    want.sort_by_key(|p| std::cmp::Reverse(p.x));
    assert_eq!(idx.report(&q), want);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
