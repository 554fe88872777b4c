use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use brickscan_core::arith::factorize;
use brickscan_core::biquad::BiquadConjecture;
use brickscan_core::bricks::{build_brick, classify_brick, verify_brick, BrickVerdict, EulerBrick};
use brickscan_core::cuboids::{
    verify_perfect_cuboid, verify_perfect_cuboid_bigint, ConjectureSet, CuboidVerdict, PerfectCuboid,
};
use brickscan_core::pythag::{count_triples_odd_edge, triples_with_odd_edge};
use brickscan_core::record::{write_records, Task};
use brickscan_core::report::report_paper_examples;
use brickscan_core::search::{
    default_workers, run_search, BiquadParams, SearchConfig, Summary, DEFAULT_STRIDE, WORKERS_ENV,
};
use clap::{Args, Parser, Subcommand};

const EXIT_ERROR: u8 = 1;
const EXIT_FAIL: u8 = 2;
const EXIT_ANOMALY: u8 = 3;

/// Exact-integer search for Euler bricks and perfect-cuboid candidates with an odd edge.
#[derive(Parser)]
#[command(name = "brickscan", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scan odd n for brick witnesses.
    SearchBricks(ScanArgs),
    /// Scan odd n for perfect-cuboid witnesses.
    SearchCuboids {
        #[command(flatten)]
        scan: ScanArgs,
        /// Comma-separated subset of 1..=6.
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5,6")]
        conjectures: Vec<u8>,
    },
    /// Search one of the sums-of-fourth-powers families.
    SearchBiquad {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        conjecture: u8,
        /// Upper bound for P, Q, R, S.
        #[arg(long)]
        bound: u64,
        /// Upper bound for the odd scale factors (families 2 and 3).
        #[arg(long, default_value_t = 9)]
        scale_bound: u64,
        /// Keep annotations with U = 1 or V = 1.
        #[arg(long)]
        relaxed: bool,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Recover the witness behind each brick in a file.
    Classify {
        /// One brick per line: three edges, optionally followed by three face
        /// diagonals. Lines starting with '#' are skipped.
        #[arg(long = "in")]
        input: PathBuf,
        /// Emit one JSON object per line.
        #[arg(long)]
        json: bool,
    },
    /// Pythagorean triples with odd edge n.
    Triples {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        count_only: bool,
    },
    /// Regenerate the table of primitive odd-edge bricks below 1000 and check it.
    ReportPaper,
    /// Check the face (and body) identities of explicit lengths.
    Verify {
        /// a,b,c,d_ab,d_ac,d_bc
        #[arg(long, value_delimiter = ',', num_args = 1, conflicts_with = "cuboid", required_unless_present = "cuboid")]
        brick: Option<Vec<u128>>,
        /// a,b,c,d_ab,d_ac,d_bc,g
        #[arg(long, value_delimiter = ',', num_args = 1)]
        cuboid: Option<Vec<u128>>,
    },
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    min: u64,
    #[arg(long)]
    max: u64,
    /// Require f > 1 in every representation.
    #[arg(long)]
    strict: bool,
    /// Run shard i of k, as i/k.
    #[arg(long, value_parser = parse_shard)]
    shard: Option<(u64, u64)>,
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Continue from the checkpoint.
    #[arg(long, requires = "checkpoint")]
    resume: bool,
    /// Odd values per checkpoint.
    #[arg(long, default_value_t = DEFAULT_STRIDE)]
    stride: u64,
    /// Stop after the block containing this n (leaves a resumable checkpoint).
    #[arg(long, hide = true)]
    stop_after: Option<u64>,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct IoArgs {
    /// JSONL output; records go to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// CSV summary file.
    #[arg(long)]
    summary: Option<PathBuf>,
    #[arg(long, env = WORKERS_ENV)]
    workers: Option<usize>,
    /// Replace existing output and checkpoint files.
    #[arg(long)]
    overwrite: bool,
}

fn parse_shard(s: &str) -> Result<(u64, u64), String> {
    let (i, k) = s.split_once('/').ok_or("expected i/k")?;
    let i = i.trim().parse::<u64>().map_err(|e| e.to_string())?;
    let k = k.trim().parse::<u64>().map_err(|e| e.to_string())?;
    if k == 0 || i >= k {
        return Err(format!("need 0 <= i < k, got {i}/{k}"));
    }
    Ok((i, k))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_ERROR) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn run(cmd: Command) -> anyhow::Result<u8> {
    match cmd {
        Command::SearchBricks(scan) => scan_cmd(scan_config(Task::Bricks, scan)),
        Command::SearchCuboids { scan, conjectures } => {
            let set = ConjectureSet::new(&conjectures)?;
            scan_cmd(SearchConfig { conjectures: set, ..scan_config(Task::Cuboids, scan) })
        }
        Command::SearchBiquad { conjecture, bound, scale_bound, relaxed, io } => {
            let conjecture = BiquadConjecture::try_from(conjecture).map_err(anyhow::Error::msg)?;
            let cfg = SearchConfig {
                strict: !relaxed,
                ..with_io(SearchConfig::biquad(BiquadParams { conjecture, bound, scale_bound }), io)
            };
            scan_cmd(cfg)
        }
        Command::Classify { input, json } => classify_cmd(&input, json),
        Command::Triples { n, count_only } => {
            let mut out = BufWriter::new(io::stdout().lock());
            if count_only {
                writeln!(out, "{}", count_triples_odd_edge(&factorize(n)?)?)?;
            } else {
                for t in triples_with_odd_edge(n)? {
                    writeln!(out, "{},{},{}", t.x, t.y, t.z)?;
                }
            }
            out.flush()?;
            Ok(0)
        }
        Command::ReportPaper => {
            let report = report_paper_examples()?;
            print!("{}", report.render());
            Ok(report.exit_code() as u8)
        }
        Command::Verify { brick, cuboid } => verify_cmd(brick, cuboid),
    }
}

fn with_io(cfg: SearchConfig, io: IoArgs) -> SearchConfig {
    SearchConfig {
        output_path: io.out,
        summary_path: io.summary,
        worker_count: io.workers.unwrap_or_else(default_workers),
        overwrite: io.overwrite,
        ..cfg
    }
}

fn scan_config(task: Task, a: ScanArgs) -> SearchConfig {
    let (shard_index, shard_count) = a.shard.unwrap_or((0, 1));
    SearchConfig {
        strict: a.strict,
        shard_index,
        shard_count,
        checkpoint_path: a.checkpoint,
        resume: a.resume,
        stride: a.stride,
        stop_after: a.stop_after,
        ..with_io(SearchConfig::new(task, a.min, a.max), a.io)
    }
}

fn scan_cmd(cfg: SearchConfig) -> anyhow::Result<u8> {
    let outcome = run_search(&cfg)?;
    if cfg.output_path.is_none() {
        let mut out = BufWriter::new(io::stdout().lock());
        write_records(&mut out, &outcome.records)?;
        out.flush()?;
    }
    print_summary(&outcome.summary);
    Ok(outcome.summary.exit_code() as u8)
}

fn print_summary(s: &Summary) {
    let mut err = io::stderr().lock();
    for line in s.to_csv().lines().skip(1) {
        if let Some((k, v)) = line.split_once(',') {
            let _ = writeln!(err, "{k:>28}  {v}");
        }
    }
    if s.anomalies > 0 {
        let _ = writeln!(err, "ANOMALY: {} record(s) flagged, inspect the output", s.anomalies);
    }
}

/// Integers on a line, split on anything that is not a digit.
fn parse_ints(line: &str) -> anyhow::Result<Vec<u64>> {
    line.split(|c: char| !c.is_ascii_digit())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u64>().with_context(|| format!("bad integer {s:?}")))
        .collect()
}

fn classify_cmd(path: &Path, json: bool) -> anyhow::Result<u8> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut out = BufWriter::new(io::stdout().lock());
    let mut failed = 0usize;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let ints = parse_ints(line)?;
        if ints.len() != 3 && ints.len() != 6 {
            bail!("line {}: expected 3 edges or 6 lengths, got {} integers", i + 1, ints.len());
        }
        let given = if ints.len() == 6 {
            let wide: Vec<u128> = ints.iter().map(|&v| v as u128).collect();
            Some(EulerBrick::from_lengths([wide[0], wide[1], wide[2]], [wide[3], wide[4], wide[5]]))
        } else {
            None
        };
        let result = classify_brick(ints[0], ints[1], ints[2]).map_err(|e| e.to_string()).and_then(|c| {
            let built = build_brick(&c.witness);
            match given {
                Some(g) if !verify_brick(&g).is_valid() => Err(format!("given diagonals are wrong for {built}")),
                _ => Ok((c, built)),
            }
        });
        match result {
            Ok((c, built)) => {
                if json {
                    let v = serde_json::json!({
                        "line": i + 1,
                        "input": ints,
                        "scale": c.scale,
                        "witness": c.witness,
                        "brick": built.tuple().map(|v| v.to_string()),
                    });
                    writeln!(out, "{v}")?;
                } else {
                    let w = &c.witness;
                    writeln!(
                        out,
                        "{line} -> n={} scale={} type={} {} {} d={} brick={built}",
                        w.n, c.scale, w.brick_type, w.rep1, w.rep2, w.d
                    )?;
                }
            }
            Err(reason) => {
                failed += 1;
                if json {
                    writeln!(out, "{}", serde_json::json!({ "line": i + 1, "input": ints, "error": reason }))?;
                } else {
                    writeln!(out, "{line} -> FAIL: {reason}")?;
                }
            }
        }
    }
    out.flush()?;
    Ok(if failed > 0 { EXIT_FAIL } else { 0 })
}

fn verify_cmd(brick: Option<Vec<u128>>, cuboid: Option<Vec<u128>>) -> anyhow::Result<u8> {
    if let Some(v) = brick {
        if v.len() != 6 {
            bail!("--brick takes 6 integers, got {}", v.len());
        }
        let b = EulerBrick::from_lengths([v[0], v[1], v[2]], [v[3], v[4], v[5]]);
        return Ok(match verify_brick(&b) {
            BrickVerdict::Valid => {
                println!("PASS brick {b}{}", if b.primitive { " primitive" } else { "" });
                0
            }
            BrickVerdict::NonPositive => {
                println!("FAIL lengths must be positive");
                EXIT_FAIL
            }
            BrickVerdict::Failed(id) => {
                println!("FAIL {b} violates {id}");
                EXIT_FAIL
            }
        });
    }
    let v = cuboid.expect("clap requires one of --brick/--cuboid");
    if v.len() != 7 {
        bail!("--cuboid takes 7 integers, got {}", v.len());
    }
    let c = PerfectCuboid::from_lengths([v[0], v[1], v[2]], [v[3], v[4], v[5]], v[6]);
    Ok(match verify_perfect_cuboid(&c) {
        CuboidVerdict::Valid if verify_perfect_cuboid_bigint(&c) => {
            println!("ANOMALY perfect cuboid {:?} passes every identity", c.tuple());
            EXIT_ANOMALY
        }
        CuboidVerdict::Valid => {
            println!("FAIL fixed-width check passed but the wide re-check did not");
            EXIT_FAIL
        }
        CuboidVerdict::NonPositive => {
            println!("FAIL lengths must be positive");
            EXIT_FAIL
        }
        CuboidVerdict::Failed(id) => {
            println!("FAIL {:?} violates {id}", c.tuple());
            EXIT_FAIL
        }
    })
}
