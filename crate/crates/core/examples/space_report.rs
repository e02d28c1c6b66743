use skycount::space::SpaceReport;
use skycount::{IndexOptions, PointSet, SkylineIndex};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let n = 1 << 12;
    let ys: Vec<usize> = (0..n).map(|x| (x * 2654435761) % n).collect();
    let ps = PointSet::from_permutation(ys)?;
    for delta in [2, 4] {
        let index =
            SkylineIndex::from_point_set(ps.clone(), &IndexOptions::default().with_delta(delta))?;
        let rep = SpaceReport::of(&index);
        println!(
            "Δ = {delta}: counting {:.1} bits/(n lg n), total {:.1}, worst level {:.1} bits/(n lg Δ)",
            rep.counting_ratio, rep.total_ratio, rep.level_constant
        );
        for l in &rep.levels {
            println!(
                "  level {:>2}: {:>5} nodes, {:>8} bits",
                l.level, l.nodes, l.bits
            );
        }
        assert!(rep.levels.iter().map(|l| l.bits).sum::<u64>() <= rep.counting_bits);
    }
    let rep = SpaceReport::of(&SkylineIndex::from_point_set(ps, &IndexOptions::default())?);
    println!("{}", rep.to_json());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
