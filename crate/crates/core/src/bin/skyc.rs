use clap::{Args, Parser, Subcommand};
use skycount::cli::{self, QueryOptions, ReduceOptions, Workload};
use skycount::IndexOptions;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "skyc",
    version,
    about = "Range skyline counting and reporting index"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct BuildFlags {
    /// Tree degree (default max(2, ceil(lg(n)^(1/4))))
    #[arg(long)]
    delta: Option<usize>,
    /// Ball-inheritance fan-out
    #[arg(long = "ball-b")]
    ball_b: Option<usize>,
    /// Fan-out ceil(lg(n)^epsilon) when --ball-b is unset
    #[arg(long)]
    epsilon: Option<f64>,
    /// Block-query memo table entries (0 disables)
    #[arg(long = "memo-cache", default_value_t = 0)]
    memo_cache: usize,
}

impl BuildFlags {
    fn options(&self) -> IndexOptions {
        IndexOptions {
            delta: self.delta,
            ball_b: self.ball_b,
            epsilon: self.epsilon,
            memo_capacity: self.memo_cache,
        }
    }
}

#[derive(Args)]
struct QueryFlags {
    index: PathBuf,
    queries: PathBuf,
    /// Abort on the first malformed query line
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    strict: bool,
    /// Print per-query counters to stderr
    #[arg(long)]
    stats: bool,
}

impl QueryFlags {
    fn options(&self) -> QueryOptions {
        QueryOptions {
            strict: self.strict,
            stats: self.stats,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Build an index container from a points file
    Build {
        points: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        flags: BuildFlags,
    },
    /// Print the skyline size of each query
    Count(QueryFlags),
    /// Print the skyline of each query
    Report(QueryFlags),
    /// Compare the index against the brute-force oracle
    Verify {
        points: Option<PathBuf>,
        queries: Option<PathBuf>,
        /// Random workload: number of points and queries
        #[arg(long, num_args = 2, value_names = ["N", "Q"])]
        random: Option<Vec<usize>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Query this container instead of building one
        #[arg(long)]
        index: Option<PathBuf>,
        #[command(flatten)]
        flags: BuildFlags,
    },
    /// Time random queries and record node visits
    Bench {
        index: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        queries: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Emit JSON
        #[arg(long)]
        json: bool,
    },
    /// Print the space report as JSON
    Space { index: PathBuf },
    /// Write a butterfly reachability workload
    ReduceButterfly {
        #[arg(long, default_value_t = 2)]
        degree: usize,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long = "drop-prob", default_value_t = 0.3)]
        drop_prob: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sample this many source-sink pairs
        #[arg(long)]
        random: Option<usize>,
        #[arg(short, long, default_value = ".")]
        output: PathBuf,
    },
}

fn run(cmd: Cmd) -> skycount::Result<bool> {
    let (mut out, mut err) = (io::stdout().lock(), io::stderr().lock());
    match cmd {
        Cmd::Build {
            points,
            output,
            flags,
        } => {
            cli::cmd_build(&points, &output, &flags.options(), &mut err)?;
        }
        Cmd::Count(q) => {
            cli::cmd_count(&q.index, &q.queries, q.options(), &mut out, &mut err)?;
        }
        Cmd::Report(q) => {
            cli::cmd_report(&q.index, &q.queries, q.options(), &mut out, &mut err)?;
        }
        Cmd::Verify {
            points,
            queries,
            random,
            seed,
            index,
            flags,
        } => {
            let workload = match (random, points, queries) {
                (Some(r), _, _) => Workload::Random {
                    n: r[0],
                    queries: r[1],
                    seed,
                },
                (None, Some(points), Some(queries)) => Workload::Files { points, queries },
                _ => {
                    return Err(skycount::Error::Parameter(
                        "verify needs POINTS QUERIES or --random N Q".into(),
                    ))
                }
            };
            return Ok(
                cli::cmd_verify(&workload, index.as_deref(), &flags.options(), &mut out)?.passed(),
            );
        }
        Cmd::Bench {
            index,
            queries,
            seed,
            json,
        } => {
            cli::cmd_bench(&index, queries, seed, json, &mut out)?;
        }
        Cmd::Space { index } => cli::cmd_space(&index, &mut out)?,
        Cmd::ReduceButterfly {
            degree,
            depth,
            drop_prob,
            seed,
            random,
            output,
        } => {
            let o = ReduceOptions {
                degree,
                depth,
                drop_prob,
                seed,
                sample: random,
            };
            let r = cli::cmd_reduce_butterfly(&o, &output)?;
            writeln!(
                err,
                "wrote {} pairs ({} reachable) to {}",
                r.pairs,
                r.reachable,
                output.display()
            )?;
        }
    }
    out.flush()?;
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse().cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("skyc: {e}");
            ExitCode::from(2)
        }
    }
}
