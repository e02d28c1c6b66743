// Reporting needs the point behind a list position at any node; ball
// inheritance pointers recover it in a bounded number of jumps.

use skycount::tree::NodeId;
use skycount::{IndexOptions, PointSet, SkylineIndex};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ys: Vec<usize> = (0..200).map(|x| (x * 71 + 5) % 200).collect();
    let ps = PointSet::from_permutation(ys)?;
    for fan in [2, 3, 8] {
        let opts = IndexOptions::default().with_delta(3).with_ball_b(fan);
        let index = SkylineIndex::from_point_set(ps.clone(), &opts)?;
        let (tree, ball) = (index.tree(), index.ball());

        let v = NodeId::new(2, 4);
        let list = tree.materialize_list(&ps, v);
        for (i, want) in list.iter().enumerate() {
            assert_eq!(ball.resolve(tree, v, i)?, *want);
        }
        println!(
            "fan {fan}: jump bound {}, {} bits of pointers",
            ball.jump_bound(),
            ball.size_bits()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
