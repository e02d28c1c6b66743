use skycount::cli::bench_index;
use skycount::{IndexOptions, PointSet, SkylineIndex};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let n = 1 << 14;
    let ys: Vec<usize> = (0..n).map(|x| (x * 40503 + 17) % n).collect();
    let index =
        SkylineIndex::from_point_set(PointSet::from_permutation(ys)?, &IndexOptions::default())?;
    let rep = bench_index(&index, 2000, 3);
    println!(
        "count p50 {:.0} ns, p99 {:.0} ns; report p50 {:.0} ns",
        rep.count_ns.p50, rep.count_ns.p99, rep.report_ns.p50
    );
    println!(
        "visits mean {:.2}, max {} (bound {}); {:.2} jumps per reported point",
        rep.mean_visits, rep.max_visits, rep.visit_bound, rep.mean_jumps_per_point
    );
    assert!(rep.within_visit_bound());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
