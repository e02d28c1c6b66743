//! Command implementations behind `skyc`.
//!
//! Each command reads text files, writes its answers to a caller-supplied
//! sink and returns a summary value, so the binary stays a thin argument
//! parser and tests can drive commands in-process.
//!
//! Points files hold one `x y` pair per line, query files one
//! `x1 x2 y1 y2` closed rectangle per line. Blank lines and lines starting
//! with `#` are ignored. A reported skyline is printed as `x,y` pairs joined
//! by `;`, by decreasing x.

use crate::butterfly::{build_points, Butterfly, Subgraph};
use crate::point::{oracle_skyline, QueryRect, RankRect, RawPoint};
use crate::tree::QueryStats;
use crate::{Error, IndexOptions, Result, SkylineIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_ints<const N: usize>(line: usize, s: &str) -> Result<[i64; N]> {
    let fields: Vec<&str> = s.split_whitespace().collect();
    if fields.len() != N {
        return Err(Error::Parse {
            line,
            msg: format!("expected {N} integers, found {} fields", fields.len()),
        });
    }
    let mut out = [0i64; N];
    for (o, f) in out.iter_mut().zip(fields) {
        *o = f.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("`{f}` is not an integer"),
        })?;
    }
    Ok(out)
}

/// Parses a points file.
pub fn parse_points(text: &str) -> Result<Vec<RawPoint>> {
    data_lines(text)
        .map(|(line, s)| parse_ints::<2>(line, s).map(|[x, y]| RawPoint::new(x, y)))
        .collect()
}

/// Parses a queries file. In strict mode the first malformed line is an
/// error; otherwise it becomes an `Err` entry and parsing goes on.
pub fn parse_queries(text: &str, strict: bool) -> Result<Vec<Result<QueryRect>>> {
    let mut out = Vec::new();
    for (line, s) in data_lines(text) {
        match parse_ints::<4>(line, s) {
            Ok([x1, x2, y1, y2]) => out.push(Ok(QueryRect::new(x1, x2, y1, y2))),
            Err(e) if strict => return Err(e),
            Err(e) => out.push(Err(e)),
        }
    }
    Ok(out)
}

pub fn format_points(pts: &[RawPoint]) -> String {
    pts.iter()
        .map(|p| format!("{},{}", p.x, p.y))
        .collect::<Vec<_>>()
        .join(";")
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BuildSummary {
    pub n: usize,
    pub delta: usize,
    pub fan: usize,
    pub bytes: usize,
    pub millis: f64,
}

/// Builds an index from a points file and writes the container.
pub fn cmd_build(
    points: &Path,
    out: &Path,
    opts: &IndexOptions,
    log: &mut dyn Write,
) -> Result<BuildSummary> {
    let raw = parse_points(&read(points)?)?;
    let start = Instant::now();
    let index = SkylineIndex::build(&raw, opts)?;
    let millis = start.elapsed().as_secs_f64() * 1e3;
    let bytes = index.to_bytes();
    fs::write(out, &bytes)?;
    let summary = BuildSummary {
        n: index.len(),
        delta: index.tree().delta(),
        fan: index.ball().fan(),
        bytes: bytes.len(),
        millis,
    };
    writeln!(
        log,
        "built n={} delta={} ball-b={} in {:.1} ms, {} bytes",
        summary.n, summary.delta, summary.fan, summary.millis, summary.bytes
    )?;
    Ok(summary)
}

/// Output options shared by `count` and `report`.
#[derive(Clone, Copy, Debug)]
pub struct QueryOptions {
    pub strict: bool,
    pub stats: bool,
}

impl Default for QueryOptions {
    fn default() -> Self {
        Self {
            strict: true,
            stats: false,
        }
    }
}

fn run_queries<F>(
    index: &Path,
    queries: &Path,
    q: QueryOptions,
    out: &mut dyn Write,
    log: &mut dyn Write,
    mut answer: F,
) -> Result<QueryStats>
where
    F: FnMut(&SkylineIndex, &QueryRect, &mut QueryStats) -> String,
{
    let index = SkylineIndex::load(index)?;
    let rects = parse_queries(&read(queries)?, q.strict)?;
    let mut total = QueryStats::default();
    for r in &rects {
        match r {
            Ok(r) => {
                let mut st = QueryStats::default();
                let line = answer(&index, r, &mut st);
                writeln!(out, "{line}")?;
                if q.stats {
                    writeln!(
                        log,
                        "visits={} probes={} multislabs={} reported={} jumps={}",
                        st.node_visits,
                        st.child_probes,
                        st.multislabs,
                        st.reported,
                        st.resolve_jumps
                    )?;
                }
                total.add(&st);
            }
            Err(e) => {
                writeln!(out, "error")?;
                writeln!(log, "{e}")?;
            }
        }
    }
    Ok(total)
}

/// Prints one skyline size per query.
pub fn cmd_count(
    index: &Path,
    queries: &Path,
    q: QueryOptions,
    out: &mut dyn Write,
    log: &mut dyn Write,
) -> Result<QueryStats> {
    run_queries(index, queries, q, out, log, |idx, r, st| {
        idx.count_with_stats(r, st).to_string()
    })
}

/// Prints one skyline per query.
pub fn cmd_report(
    index: &Path,
    queries: &Path,
    q: QueryOptions,
    out: &mut dyn Write,
    log: &mut dyn Write,
) -> Result<QueryStats> {
    run_queries(index, queries, q, out, log, |idx, r, st| {
        format_points(&idx.report_with_stats(r, st))
    })
}

/// Where `verify` takes its workload from.
#[derive(Clone, Debug)]
pub enum Workload {
    Files { points: PathBuf, queries: PathBuf },
    Random { n: usize, queries: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub query: QueryRect,
    pub expected: Vec<RawPoint>,
    pub count: usize,
    pub report: Vec<RawPoint>,
}

#[derive(Clone, Debug)]
pub struct VerifyOutcome {
    pub queries: usize,
    pub mismatches: Vec<Mismatch>,
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Random permutation of `0..n` as raw points, plus random rectangles that
/// mostly poke slightly outside the coordinate range.
pub fn random_workload(n: usize, queries: usize, seed: u64) -> (Vec<RawPoint>, Vec<QueryRect>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ys: Vec<i64> = (0..n as i64).collect();
    ys.shuffle(&mut rng);
    let pts = ys
        .iter()
        .enumerate()
        .map(|(x, &y)| RawPoint::new(x as i64, y))
        .collect();
    let span = n as i64 + 1;
    let coord = |rng: &mut ChaCha8Rng| {
        let (a, b) = (rng.gen_range(-1..span), rng.gen_range(-1..span));
        (a.min(b), a.max(b))
    };
    let rects = (0..queries)
        .map(|_| {
            let (x1, x2) = coord(&mut rng);
            let (y1, y2) = coord(&mut rng);
            QueryRect::new(x1, x2, y1, y2)
        })
        .collect();
    (pts, rects)
}

/// Runs the index beside the brute-force oracle. With `index` set, that
/// container is queried instead of a fresh build.
pub fn cmd_verify(
    workload: &Workload,
    index: Option<&Path>,
    opts: &IndexOptions,
    out: &mut dyn Write,
) -> Result<VerifyOutcome> {
    let (pts, rects) = match workload {
        Workload::Files { points, queries } => {
            let pts = parse_points(&read(points)?)?;
            let rects = parse_queries(&read(queries)?, true)?
                .into_iter()
                .collect::<Result<Vec<_>>>()?;
            (pts, rects)
        }
        Workload::Random { n, queries, seed } => random_workload(*n, *queries, *seed),
    };
    let index = match index {
        Some(p) => SkylineIndex::load(p)?,
        None => SkylineIndex::build(&pts, opts)?,
    };
    let results: Vec<Option<Mismatch>> = {
        use rayon::prelude::*;
        rects
            .par_iter()
            .map(|r| {
                let mut expected = oracle_skyline(&pts, r);
                expected.sort_by(|a, b| b.x.cmp(&a.x));
                let count = index.count(r);
                let report = index.report(r);
                (count != expected.len() || report != expected).then(|| Mismatch {
                    query: *r,
                    expected,
                    count,
                    report,
                })
            })
            .collect()
    };
    let mismatches: Vec<Mismatch> = results.into_iter().flatten().collect();
    let outcome = VerifyOutcome {
        queries: rects.len(),
        mismatches,
    };
    if outcome.passed() {
        writeln!(out, "PASS {} queries", outcome.queries)?;
    } else {
        writeln!(
            out,
            "FAIL {} of {} queries",
            outcome.mismatches.len(),
            outcome.queries
        )?;
        for m in outcome.mismatches.iter().take(10) {
            let q = m.query;
            writeln!(
                out,
                "  {} {} {} {}: expected {} [{}], count {} report [{}]",
                q.x1,
                q.x2,
                q.y1,
                q.y2,
                m.expected.len(),
                format_points(&m.expected),
                m.count,
                format_points(&m.report)
            )?;
        }
    }
    Ok(outcome)
}

#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct Percentiles {
    pub p50: f64,
    pub p90: f64,
    pub p99: f64,
    pub max: f64,
    pub mean: f64,
}

impl Percentiles {
    pub fn of(mut v: Vec<f64>) -> Self {
        if v.is_empty() {
            return Self::default();
        }
        v.sort_by(f64::total_cmp);
        let at = |q: f64| v[((v.len() - 1) as f64 * q).round() as usize];
        Self {
            p50: at(0.5),
            p90: at(0.9),
            p99: at(0.99),
            max: v[v.len() - 1],
            mean: v.iter().sum::<f64>() / v.len() as f64,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchReport {
    pub n: usize,
    pub delta: usize,
    pub height: usize,
    pub queries: usize,
    pub count_ns: Percentiles,
    pub report_ns: Percentiles,
    pub mean_visits: f64,
    pub max_visits: usize,
    pub visit_bound: usize,
    pub mean_reported: f64,
    pub mean_jumps_per_point: f64,
}

impl BenchReport {
    pub fn within_visit_bound(&self) -> bool {
        self.max_visits <= self.visit_bound
    }
}

/// `2 * ceil(log_delta n) + 3`.
pub fn visit_bound(n: usize, delta: usize) -> usize {
    let mut levels = 0;
    let mut span = 1usize;
    while span < n {
        span = span.saturating_mul(delta);
        levels += 1;
    }
    2 * levels + 3
}

/// Random nonempty rank rectangles.
pub fn random_rank_rects(n: usize, queries: usize, seed: u64) -> Vec<RankRect> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..queries)
        .map(|_| {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let (c, d) = (rng.gen_range(0..n), rng.gen_range(0..n));
            RankRect {
                x1: a.min(b),
                x2: a.max(b),
                y1: c.min(d),
                y2: c.max(d),
            }
        })
        .collect()
}

/// Times count and report on random rank rectangles.
pub fn bench_index(index: &SkylineIndex, queries: usize, seed: u64) -> BenchReport {
    let n = index.len();
    let rects = if n == 0 {
        Vec::new()
    } else {
        random_rank_rects(n, queries, seed)
    };
    let (mut count_ns, mut report_ns) = (Vec::new(), Vec::new());
    let (mut visits, mut max_visits, mut reported, mut jumps) = (0usize, 0usize, 0usize, 0usize);
    for r in &rects {
        let mut st = QueryStats::default();
        let t = Instant::now();
        std::hint::black_box(index.tree().count_rank(r, &mut st));
        count_ns.push(t.elapsed().as_nanos() as f64);
        visits += st.node_visits;
        max_visits = max_visits.max(st.node_visits);
        let mut rs = QueryStats::default();
        let t = Instant::now();
        let out = std::hint::black_box(index.report_rank(r, &mut rs));
        report_ns.push(t.elapsed().as_nanos() as f64);
        reported += out.len();
        jumps += rs.resolve_jumps;
    }
    let q = rects.len().max(1) as f64;
    BenchReport {
        n,
        delta: index.tree().delta(),
        height: index.tree().height(),
        queries: rects.len(),
        count_ns: Percentiles::of(count_ns),
        report_ns: Percentiles::of(report_ns),
        mean_visits: visits as f64 / q,
        max_visits,
        visit_bound: visit_bound(n, index.tree().delta()),
        mean_reported: reported as f64 / q,
        mean_jumps_per_point: jumps as f64 / reported.max(1) as f64,
    }
}

pub fn cmd_bench(
    index: &Path,
    queries: usize,
    seed: u64,
    json: bool,
    out: &mut dyn Write,
) -> Result<BenchReport> {
    let index = SkylineIndex::load(index)?;
    let rep = bench_index(&index, queries, seed);
    if json {
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&rep).expect("serializable")
        )?;
    } else {
        writeln!(
            out,
            "n={} delta={} height={} queries={}",
            rep.n, rep.delta, rep.height, rep.queries
        )?;
        for (name, p) in [("count", rep.count_ns), ("report", rep.report_ns)] {
            writeln!(
                out,
                "{name:<7} p50={:.0}ns p90={:.0}ns p99={:.0}ns max={:.0}ns mean={:.0}ns",
                p.p50, p.p90, p.p99, p.max, p.mean
            )?;
        }
        writeln!(
            out,
            "visits mean={:.2} max={} bound={} reported mean={:.2} jumps/point={:.2}",
            rep.mean_visits,
            rep.max_visits,
            rep.visit_bound,
            rep.mean_reported,
            rep.mean_jumps_per_point
        )?;
    }
    Ok(rep)
}

pub fn cmd_space(index: &Path, out: &mut dyn Write) -> Result<()> {
    let index = SkylineIndex::load(index)?;
    writeln!(out, "{}", index.space_report().to_json())?;
    Ok(())
}

/// Parameters of `reduce-butterfly`.
#[derive(Clone, Debug)]
pub struct ReduceOptions {
    pub degree: usize,
    pub depth: usize,
    /// Each edge is removed with this probability.
    pub drop_prob: f64,
    pub seed: u64,
    /// Sample this many source-sink pairs instead of all of them.
    pub sample: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReduceOutput {
    pub points: PathBuf,
    pub queries: PathBuf,
    pub answers: PathBuf,
    pub pairs: usize,
    pub reachable: usize,
}

/// Writes `points.txt`, `queries.txt` and `answers.txt` into `dir`. Answer
/// lines read `s t 1` for reachable pairs and `s t 0` otherwise.
pub fn cmd_reduce_butterfly(o: &ReduceOptions, dir: &Path) -> Result<ReduceOutput> {
    if !(0.0..=1.0).contains(&o.drop_prob) {
        return Err(Error::Parameter(format!(
            "drop probability {} outside [0, 1]",
            o.drop_prob
        )));
    }
    let shape = Butterfly::new(o.degree, o.depth)?;
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
    let g = Subgraph::random(shape, 1.0 - o.drop_prob, &mut rng);
    let inst = build_points(&g);
    let w = shape.width();
    let pairs: Vec<(usize, usize)> = match o.sample {
        None => (0..w).flat_map(|s| (0..w).map(move |t| (s, t))).collect(),
        Some(k) => (0..k)
            .map(|_| (rng.gen_range(0..w), rng.gen_range(0..w)))
            .collect(),
    };
    fs::create_dir_all(dir)?;
    let mut points = String::new();
    for p in &inst.points {
        points.push_str(&format!("{} {}\n", p.x, p.y));
    }
    let (mut queries, mut answers, mut reachable) = (String::new(), String::new(), 0);
    for &(s, t) in &pairs {
        let q = shape.query_rect(s, t);
        queries.push_str(&format!("{} {} {} {}\n", q.x1, q.x2, q.y1, q.y2));
        let ok = g.bfs_reachable(s, t);
        reachable += ok as usize;
        answers.push_str(&format!("{s} {t} {}\n", ok as u8));
    }
    let out = ReduceOutput {
        points: dir.join("points.txt"),
        queries: dir.join("queries.txt"),
        answers: dir.join("answers.txt"),
        pairs: pairs.len(),
        reachable,
    };
    fs::write(&out.points, points)?;
    fs::write(&out.queries, queries)?;
    fs::write(&out.answers, answers)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsing_reports_line_numbers() {
        let pts = parse_points("# header\n1 2\n\n3 4\n").unwrap();
        assert_eq!(pts, vec![RawPoint::new(1, 2), RawPoint::new(3, 4)]);
        match parse_points("1 2\n3 x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(parse_queries("0 1 0\n", true).is_err());
        let lax = parse_queries("0 1 0\n0 1 0 1\n", false).unwrap();
        assert!(lax[0].is_err() && lax[1].is_ok());
    }

    #[test]
    fn bound_values() {
        assert_eq!(visit_bound(1, 2), 3);
        assert_eq!(visit_bound(16, 2), 11);
        assert_eq!(visit_bound(17, 4), 9);
    }

    #[test]
    fn percentiles() {
        let p = Percentiles::of((1..=100).map(f64::from).collect());
        assert_eq!(p.max, 100.0);
        assert_eq!(p.p50, 51.0);
        assert_eq!(p.mean, 50.5);
    }
}
