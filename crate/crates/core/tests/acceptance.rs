//! Acceptance harness: one PASS/FAIL line per criterion.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use skycount::butterfly::{
    build_points, punctured_fixture, reach_via_skyline, stabbing_sets, Butterfly, Subgraph,
};
use skycount::cli::{bench_index, random_rank_rects, visit_bound};
use skycount::point::{oracle_skyline, rank_oracle_skyline};
use skycount::succinct::{
    BitBuf, MonotoneSequence, RangeMaxStructure, RankSelectBits, SparseBitVector,
};
use skycount::tree::QueryStats;
use skycount::{IndexOptions, PointSet, QueryRect, RawPoint, SkylineIndex};
use std::process::ExitCode;
use std::time::Instant;

type Outcome = Result<String, String>;

fn permutation(n: usize, seed: u64) -> PointSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ys: Vec<usize> = (0..n).collect();
    ys.shuffle(&mut rng);
    PointSet::from_permutation(ys).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn counting_oracle() -> Outcome {
    let mut total = 0;
    for &n in &[10, 100, 1000, 100_000] {
        for seed in 0..5 {
            let idx = SkylineIndex::from_point_set(permutation(n, seed), &IndexOptions::default())
                .unwrap();
            let rects = random_rank_rects(n, 10_000, 100 + seed);
            let bad = rects
                .par_iter()
                .filter(|r| idx.count_rank(r) != rank_oracle_skyline(idx.points(), r).len())
                .count();
            ensure(bad == 0, || format!("n={n} seed={seed}: {bad} mismatches"))?;
            total += rects.len();
        }
    }
    Ok(format!("{total} queries, 0 mismatches"))
}

fn reporting_oracle() -> Outcome {
    let mut total = 0;
    for &n in &[10, 100, 1000, 10_000] {
        let lg = (n as f64).log2();
        for fan in [2, (lg.sqrt().ceil() as usize).max(2)] {
            for seed in 0..5 {
                let opts = IndexOptions::default().with_ball_b(fan);
                let idx = SkylineIndex::from_point_set(permutation(n, seed), &opts).unwrap();
                let rects = random_rank_rects(n, 10_000, 200 + seed);
                let bad = rects
                    .par_iter()
                    .filter(|r| {
                        let want = rank_oracle_skyline(idx.points(), r);
                        let got = idx.report_rank(r, &mut QueryStats::default());
                        got != want || idx.count_rank(r) != got.len()
                    })
                    .count();
                ensure(bad == 0, || {
                    format!("n={n} B={fan} seed={seed}: {bad} mismatches")
                })?;
                total += rects.len();
            }
        }
    }
    Ok(format!("{total} queries over both fan-outs, 0 mismatches"))
}

// every set of at most 5 cells of the 5x5 grid with distinct rows and columns
fn partial_permutations(k: usize, cols: &mut Vec<Option<i64>>, out: &mut Vec<Vec<RawPoint>>) {
    if k == 5 {
        out.push(
            cols.iter()
                .enumerate()
                .filter_map(|(x, c)| c.map(|y| RawPoint::new(x as i64, y)))
                .collect(),
        );
        return;
    }
    cols.push(None);
    partial_permutations(k + 1, cols, out);
    cols.pop();
    for y in 0..5 {
        if !cols.contains(&Some(y)) {
            cols.push(Some(y));
            partial_permutations(k + 1, cols, out);
            cols.pop();
        }
    }
}

fn exhaustive_grid() -> Outcome {
    let mut sets = Vec::new();
    partial_permutations(0, &mut Vec::new(), &mut sets);
    let mut rects = Vec::new();
    for x1 in 0..5 {
        for x2 in x1..5 {
            for y1 in 0..5 {
                for y2 in y1..5 {
                    rects.push(QueryRect::new(x1, x2, y1, y2));
                }
            }
        }
    }
    ensure(rects.len() == 225, || format!("{} rectangles", rects.len()))?;
    let bad: usize = sets
        .par_iter()
        .map(|pts| {
            let idx = SkylineIndex::build(pts, &IndexOptions::default()).unwrap();
            rects
                .iter()
                .filter(|r| {
                    let mut want = oracle_skyline(pts, r);
                    want.sort_by(|a, b| b.x.cmp(&a.x));
                    idx.count(r) != want.len() || idx.report(r) != want
                })
                .count()
        })
        .sum();
    ensure(bad == 0, || format!("{bad} mismatches"))?;
    Ok(format!("{} point sets x 225 rectangles", sets.len()))
}

fn butterfly_reduction() -> Outcome {
    let mut checked = 0;
    for &(b, d) in &[(2, 1), (2, 2), (2, 3), (3, 2)] {
        let shape = Butterfly::new(b, d).unwrap();
        for (pi, &p) in [0.3, 0.7, 1.0].iter().enumerate() {
            let mut rng = ChaCha8Rng::seed_from_u64((b * 100 + d * 10 + pi) as u64);
            for _ in 0..100 {
                let g = Subgraph::random(shape, p, &mut rng);
                let inst = build_points(&g);
                let idx = SkylineIndex::build(&inst.points, &IndexOptions::default()).unwrap();
                for s in 0..shape.width() {
                    for t in 0..shape.width() {
                        let c = inst.query_count(&idx, s, t);
                        ensure(c >= d, || {
                            format!("B={b} d={d}: count {c} < d at ({s}, {t})")
                        })?;
                        let via = reach_via_skyline(&inst, &idx, s, t);
                        ensure(via == g.bfs_reachable(s, t), || {
                            format!("B={b} d={d} p={p}: disagreement at ({s}, {t})")
                        })?;
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{checked} source-sink pairs agree"))
}

fn stabbing_corners() -> Outcome {
    let mut pts = 0;
    for d in 1..=3 {
        let shape = Butterfly::new(2, d).unwrap();
        for x in 0..shape.width() {
            for y in 0..shape.width() {
                let (sky, stabbed) = stabbing_sets(shape, x, y);
                ensure(sky == stabbed, || {
                    format!("d={d} ({x}, {y}): skyline differs from stabbed corners")
                })?;
                ensure(sky.len() == d, || {
                    format!("d={d} ({x}, {y}): {} corners", sky.len())
                })?;
                pts += 1;
            }
        }
    }
    Ok(format!("{pts} query points"))
}

fn worked_instance_anchors() -> Outcome {
    // list in y order has x = 1, 0, 5, 2, 4, 3: dominated counts 0,0,2,0,1,0
    let ps = PointSet::from_permutation(vec![1, 0, 3, 5, 4, 2]).unwrap();
    let idx = SkylineIndex::from_point_set(ps, &IndexOptions::default()).unwrap();
    let tree = idx.tree();
    let sky = tree
        .skycount_prefix(tree.root(), 6)
        .map_err(|e| e.to_string())?;
    ensure(sky == 3, || format!("six-point prefix skyline {sky}"))?;

    let shape = Butterfly::new(2, 3).unwrap();
    let (s, t) = (0b001, 0b110);
    let full = build_points(&Subgraph::full(shape));
    let fidx = SkylineIndex::build(&full.points, &IndexOptions::default()).unwrap();
    ensure(reach_via_skyline(&full, &fidx, s, t), || {
        "full butterfly: unreachable".into()
    })?;
    let (g, _) = punctured_fixture();
    let inst = build_points(&g);
    let pidx = SkylineIndex::build(&inst.points, &IndexOptions::default()).unwrap();
    ensure(!reach_via_skyline(&inst, &pidx, s, t), || {
        "punctured butterfly: reachable".into()
    })?;
    Ok(format!(
        "prefix skyline 3; 001->110 reachable with all edges, unreachable without b (count {})",
        inst.query_count(&pidx, s, t)
    ))
}

fn visit_counts() -> Outcome {
    let mut lines = Vec::new();
    for delta in [2, 4] {
        let mut means = Vec::new();
        for e in [12, 14, 16] {
            let n = 1usize << e;
            let idx = SkylineIndex::from_point_set(
                permutation(n, e as u64),
                &IndexOptions::default().with_delta(delta),
            )
            .unwrap();
            let rep = bench_index(&idx, 10_000, 7);
            let bound = visit_bound(n, delta);
            ensure(rep.max_visits <= bound, || {
                format!(
                    "delta={delta} n=2^{e}: {} visits > bound {bound}",
                    rep.max_visits
                )
            })?;
            means.push(rep.mean_visits);
        }
        for w in means.windows(2) {
            ensure(w[1] / w[0] <= 1.3, || {
                format!("delta={delta}: mean visits {:.2} -> {:.2}", w[0], w[1])
            })?;
        }
        lines.push(format!(
            "delta={delta} mean {:.2}/{:.2}/{:.2}",
            means[0], means[1], means[2]
        ));
    }
    Ok(lines.join(", "))
}

fn space_accounting() -> Outcome {
    let small = SkylineIndex::from_point_set(
        permutation(1 << 12, 1),
        &IndexOptions::default().with_delta(2),
    )
    .unwrap()
    .space_report();
    let large = SkylineIndex::from_point_set(
        permutation(1 << 16, 1),
        &IndexOptions::default().with_delta(2),
    )
    .unwrap()
    .space_report();
    let growth = large.counting_ratio / small.counting_ratio;
    ensure(growth <= 1.5, || {
        format!(
            "ratio {:.2} at 2^12, {:.2} at 2^16",
            small.counting_ratio, large.counting_ratio
        )
    })?;
    for rep in [&small, &large] {
        let c = rep.level_constant;
        let lg_delta = (rep.delta as f64).log2();
        for l in &rep.levels {
            ensure(l.bits as f64 <= c * rep.n as f64 * lg_delta + 1e-6, || {
                format!("level {} over c", l.level)
            })?;
        }
    }
    let c_growth = large.level_constant / small.level_constant;
    ensure(c_growth <= 1.5, || {
        format!(
            "per-level constant {:.1} -> {:.1}",
            small.level_constant, large.level_constant
        )
    })?;
    Ok(format!(
        "bits/(n lg n) {:.2} -> {:.2} ({growth:.2}x); per-level c {:.1} -> {:.1}",
        small.counting_ratio, large.counting_ratio, small.level_constant, large.level_constant
    ))
}

fn check_bits(bits: &[bool]) -> Result<(), String> {
    let rs = RankSelectBits::new(BitBuf::from_bools(bits));
    let sp = SparseBitVector::from_bools(bits);
    let (mut ones, mut zeros) = (0, 0);
    for (i, &b) in bits.iter().enumerate() {
        ensure(rs.rank1(i) == ones && sp.rank1(i).unwrap() == ones, || {
            format!("rank at {i} of {bits:?}")
        })?;
        if b {
            ensure(
                rs.select1(ones) == i && sp.select1(ones).unwrap() == i,
                || format!("select1 {ones}"),
            )?;
            ones += 1;
        } else {
            ensure(rs.select0(zeros) == i, || format!("select0 {zeros}"))?;
            zeros += 1;
        }
    }
    ensure(rs.rank1(bits.len()) == ones, || "full rank".into())?;
    let len = bits.len();
    ensure(rs.size_bits() as f64 <= 1.5 * len as f64 + 512.0, || {
        format!("rank/select size at len {len}")
    })?;
    ensure(
        sp.size_bits() as f64 <= SparseBitVector::bit_budget(len, ones),
        || format!("sparse size at len {len}"),
    )
}

fn check_values(v: &[u64]) -> Result<(), String> {
    let m = MonotoneSequence::new(v);
    let mut acc = 0;
    for (i, &x) in v.iter().enumerate() {
        ensure(
            m.prefix(i).unwrap() == acc && m.lookup(i).unwrap() == x,
            || format!("prefix at {i} of {v:?}"),
        )?;
        acc += x;
    }
    ensure(m.prefix(v.len()).unwrap() == acc, || "total".into())?;
    ensure(
        m.size_bits() as f64 <= MonotoneSequence::bit_budget(v.len(), acc),
        || format!("prefix size at len {}", v.len()),
    )?;
    if v.is_empty() {
        return Ok(());
    }
    let r = RangeMaxStructure::new(v);
    // every start up to length 64, about 64 spread-out starts beyond
    let step = v.len().div_ceil(64).max(1);
    for i in (0..v.len()).step_by(step) {
        let mut best = i;
        for j in i..v.len() {
            if v[j] > v[best] {
                best = j;
            }
            ensure(r.range_max_index(i, j).unwrap() == best, || {
                format!("rmq [{i}, {j}] of {v:?}")
            })?;
        }
    }
    ensure(
        r.size_bits() as f64 <= RangeMaxStructure::bit_budget(v.len()),
        || format!("rmq size at len {}", v.len()),
    )
}

fn primitives() -> Outcome {
    let mut inputs = 0;
    for len in 0..=12 {
        for mask in 0u32..1 << len {
            let bits: Vec<bool> = (0..len).map(|i| mask >> i & 1 == 1).collect();
            check_bits(&bits)?;
            inputs += 1;
        }
    }
    for len in 0..=7 {
        for code in 0..4usize.pow(len) {
            let v: Vec<u64> = (0..len)
                .map(|i| (code / 4usize.pow(i) % 4) as u64)
                .collect();
            check_values(&v)?;
            inputs += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for k in 0..10_000 {
        let len = if k % 2 == 0 {
            rng.gen_range(0..=64)
        } else {
            rng.gen_range(65..3000)
        };
        let density = rng.gen_range(0.01..0.99);
        let bits: Vec<bool> = (0..len).map(|_| rng.gen_bool(density)).collect();
        check_bits(&bits)?;
        let vlen = len.min(400);
        let cap = rng.gen_range(1..1000u64);
        let v: Vec<u64> = (0..vlen).map(|_| rng.gen_range(0..cap)).collect();
        check_values(&v)?;
        inputs += 2;
    }
    Ok(format!(
        "{inputs} inputs against naive scans and size budgets"
    ))
}

fn persistence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let raw: Vec<RawPoint> = (0..5000)
        .map(|_| {
            RawPoint::new(
                rng.gen_range(-1_000_000..1_000_000),
                rng.gen_range(-1_000_000..1_000_000),
            )
        })
        .collect::<std::collections::HashSet<_>>()
        .into_iter()
        .collect();
    let idx = SkylineIndex::build(&raw, &IndexOptions::default()).unwrap();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("probe.skyc");
    idx.save(&path).map_err(|e| e.to_string())?;
    let back = SkylineIndex::load(&path).map_err(|e| e.to_string())?;
    ensure(back.to_bytes() == idx.to_bytes(), || {
        "re-serialized bytes differ".into()
    })?;
    let probes: Vec<QueryRect> = (0..1000)
        .map(|_| {
            let (a, b) = (
                rng.gen_range(-1_100_000..1_100_000),
                rng.gen_range(-1_100_000..1_100_000),
            );
            let (c, d) = (
                rng.gen_range(-1_100_000..1_100_000),
                rng.gen_range(-1_100_000..1_100_000),
            );
            QueryRect::new(a.min(b), a.max(b), c.min(d), c.max(d))
        })
        .collect();
    for r in &probes {
        ensure(
            idx.count(r) == back.count(r) && idx.report(r) == back.report(r),
            || format!("{r:?} differs"),
        )?;
    }
    Ok(format!("{} probes identical after save/load", probes.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("counting matches oracle", counting_oracle),
        ("reporting matches oracle", reporting_oracle),
        ("exhaustive 5x5 grid", exhaustive_grid),
        ("butterfly reachability", butterfly_reduction),
        ("stabbing corners form the skyline", stabbing_corners),
        ("worked instance anchors", worked_instance_anchors),
        ("node-visit bound and growth", visit_counts),
        ("space accounting", space_accounting),
        ("succinct primitives", primitives),
        ("persistence round-trip", persistence),
    ];
    let filter = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        if filter.as_deref().is_some_and(|f| !name.contains(f)) {
            continue;
        }
        let start = Instant::now();
        let res = f();
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
