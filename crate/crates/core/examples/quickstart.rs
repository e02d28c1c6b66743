// Build an index over a handful of points and ask for skylines.
//
// Run with `cargo run --example quickstart`.

use skycount::{IndexOptions, QueryRect, RawPoint, SkylineIndex};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let pts: Vec<RawPoint> = [(1, 9), (3, 7), (4, 8), (6, 2), (7, 5), (9, 1), (2, 3)]
        .into_iter()
        .map(|(x, y)| RawPoint::new(x, y))
        .collect();
    let index = SkylineIndex::build(&pts, &IndexOptions::default())?;

    let everything = QueryRect::new(0, 10, 0, 10);
    let sky = index.report(&everything);
    println!("skyline of all {} points: {:?}", index.len(), sky);
    assert_eq!(index.count(&everything), 4);
    assert_eq!(
        sky,
        vec![
            RawPoint::new(9, 1),
            RawPoint::new(7, 5),
            RawPoint::new(4, 8),
            RawPoint::new(1, 9)
        ]
    );

    // (4, 8) dominates (3, 7) but lies outside this window
    let left = QueryRect::new(0, 3, 0, 7);
    assert_eq!(index.report(&left), vec![RawPoint::new(3, 7)]);

    let nothing = QueryRect::new(10, 20, 0, 10);
    assert_eq!(index.count(&nothing), 0);
    println!("left window: {:?}", index.report(&left));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
