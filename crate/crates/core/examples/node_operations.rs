// Per-node queries on the base tree, checked against the materialized
// y-sorted list of one node.

use skycount::tree::{BaseTree, NodeId};
use skycount::PointSet;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ys = vec![11, 3, 14, 0, 8, 5, 15, 9, 1, 12, 6, 2, 10, 13, 4, 7];
    let ps = PointSet::from_permutation(ys)?;
    let tree = BaseTree::build(&ps, 4)?;
    println!(
        "n = {}, Δ = {}, height = {}",
        tree.len(),
        tree.delta(),
        tree.height()
    );

    let v = NodeId::new(1, 1);
    let list = tree.materialize_list(&ps, v);
    println!("{v:?} covers leaves {:?}, list {list:?}", tree.leaf_span(v));

    // entries "below" position 3 that sit in child slot 2
    assert_eq!(tree.pred(v, 3, 2)?, Some(0));
    assert_eq!(tree.succ(v, 0, 3)?, Some(0));

    let up = tree.parent_position(v, 2)?;
    let root_list = tree.materialize_list(&ps, tree.root());
    assert_eq!(root_list[up], list[2]);

    let a = tree.rightmost_v(v, 0, 3)?;
    assert_eq!(list[a].x, list[..4].iter().map(|p| p.x).max().unwrap());
    let naive = |run: &[skycount::RankSpacePoint]| {
        (0..run.len())
            .filter(|&i| run[i + 1..].iter().all(|q| q.x < run[i].x))
            .count()
    };
    assert_eq!(tree.skycount_prefix(v, 4)?, naive(&list[..4]));
    assert_eq!(tree.skycount_range(tree.root(), 0, 15)?, naive(&root_list));
    println!("skyline of the whole set: {} points", naive(&root_list));

    let root = tree.root();
    let bsz = tree.signature_format().block;
    println!(
        "root: {} blocks of {bsz}, slabs [1, 2] skyline over blocks 0..=0 = {}",
        tree.block_count(root),
        tree.ms_skycount(root, 1, 2, 0, 0)?
    );
    tree.check_against(&ps)?;
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
