// Batched queries run in parallel; a memo table for in-block lookups can be
// switched on after the fact without changing any answer.

use skycount::cli::random_workload;
use skycount::point::oracle_count;
use skycount::tree::QueryStats;
use skycount::{IndexOptions, SkylineIndex};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let (pts, rects) = random_workload(5000, 2000, 42);
    let mut index = SkylineIndex::build(&pts, &IndexOptions::default())?;

    let counts = index.count_batch(&rects);
    let reports = index.report_batch(&rects);
    for ((r, &c), sky) in rects.iter().zip(&counts).zip(&reports) {
        assert_eq!(c, sky.len());
        assert_eq!(c, oracle_count(&pts, r));
    }
    let total: usize = counts.iter().sum();
    println!("{} queries, {total} skyline points in total", rects.len());

    index.set_memo_capacity(1 << 14);
    assert_eq!(index.count_batch(&rects), counts);
    let mut stats = QueryStats::default();
    for r in &rects[..100] {
        index.count_with_stats(r, &mut stats);
    }
    println!("first 100 queries with memo: {stats:?}");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
