// A block signature records, for each entry of a block of `Δ²` list
// entries, its child slab and its x-rank among same-slab entries. That is
// enough to answer in-block queries without touching the points.

use skycount::tree::signature::{block_below, block_rightmost, block_skycount, block_topmost};
use skycount::tree::{BaseTree, BlockSignature, NodeId, SigFormat};
use skycount::PointSet;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    // (slab, x) in ascending y order
    let entries = [(0, 2), (1, 9), (0, 0), (1, 5), (1, 7), (0, 3)];
    let sig = BlockSignature::from_entries(&entries);
    assert_eq!(
        sig.pairs,
        vec![(0, 1), (1, 2), (0, 0), (1, 0), (1, 1), (0, 2)]
    );

    assert_eq!(block_below(&sig, 4, 1), 2);
    assert_eq!(block_rightmost(&sig, 0, 5, 0, 0), Some(5));
    assert_eq!(block_topmost(&sig, 0, 3, 0, 0), Some(2));
    // from the top: x = 3, then 7, then 9 at the bottom of the block
    assert_eq!(block_skycount(&sig, 0, 5, 0, 1), 3);
    assert_eq!(block_skycount(&sig, 0, 2, 0, 0), 2);

    let fmt = SigFormat::for_degree(3);
    println!(
        "Δ = 3: {} entries per block, {} bits each, stride {} bits",
        fmt.block,
        fmt.entry_bits(),
        fmt.stride()
    );

    let ps = PointSet::from_permutation((0..27).rev().collect())?;
    let tree = BaseTree::build(&ps, 3)?;
    let root = tree.root();
    let first = tree.block_signature(root, 0);
    println!("first root block: {:?}", first.pairs);
    assert_eq!(first.pairs.len(), 9);
    assert!(first.pairs.iter().all(|&(s, _)| s == 2));
    assert_eq!(tree.block_signature(NodeId::new(1, 0), 0).pairs.len(), 3);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
