// Reachability in a subgraph of a butterfly graph, answered with one
// skyline count per source-sink pair.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use skycount::butterfly::{
    build_points, punctured_fixture, reach_via_skyline, Butterfly, Subgraph,
};
use skycount::{IndexOptions, SkylineIndex};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let shape = Butterfly::new(2, 3)?;
    let path = shape.path(0b001, 0b110);
    println!("path 001 -> 110: {path:?}");
    assert_eq!(path.len(), 3);

    let (g, removed) = punctured_fixture();
    println!("removed edges {removed:?}");
    let inst = build_points(&g);
    let index = SkylineIndex::build(&inst.points, &IndexOptions::default())?;
    assert!(!reach_via_skyline(&inst, &index, 0b001, 0b110));
    println!(
        "count for 001 -> 110: {}",
        inst.query_count(&index, 0b001, 0b110)
    );

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let shape = Butterfly::new(3, 3)?;
    let g = Subgraph::random(shape, 0.25, &mut rng);
    let inst = build_points(&g);
    let index = SkylineIndex::build(&inst.points, &IndexOptions::default())?;
    let w = shape.width();
    let mut reachable = 0;
    for s in 0..w {
        for t in 0..w {
            let r = reach_via_skyline(&inst, &index, s, t);
            assert_eq!(r, g.bfs_reachable(s, t));
            reachable += r as usize;
        }
    }
    println!(
        "{} points, {reachable} of {} pairs reachable",
        inst.points.len(),
        w * w
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
