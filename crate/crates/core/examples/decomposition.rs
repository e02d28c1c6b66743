use skycount::tree::{BaseTree, QueryStats};
use skycount::{PointSet, RankRect};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ys: Vec<usize> = (0..64).map(|x| (x * 37 + 11) % 64).collect();
    let ps = PointSet::from_permutation(ys)?;
    let tree = BaseTree::build(&ps, 4)?;

    let r = RankRect {
        x1: 5,
        x2: 58,
        y1: 10,
        y2: 50,
    };
    let parts = tree.decompose(&r);
    for q in &parts {
        let (lo, _) = tree.leaf_span(tree.child(q.node, q.slabs.0));
        let (_, hi) = tree.leaf_span(tree.child(q.node, q.slabs.1));
        println!(
            "{:?} slabs {:?} -> x in [{lo}, {hi}), list window [{}, {})",
            q.node, q.slabs, q.lo, q.hi
        );
    }
    assert!(parts.len() <= 2 * tree.height());

    let mut stats = QueryStats::default();
    let count = tree.count_rank(&r, &mut stats);
    let want = skycount::point::rank_oracle_skyline(&ps, &r).len();
    assert_eq!(count, want);
    println!("count {count} with {} node visits", stats.node_visits);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
