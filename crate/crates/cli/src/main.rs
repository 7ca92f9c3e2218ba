//! `parkgraph`: simulate, count, biject and sample parking functions on
//! trees and mappings.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use output::Format;

#[derive(Debug, Parser)]
#[command(name = "parkgraph", version, about = "Parking functions on trees and mappings")]
struct Cli {
    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Output format for tables.
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,

    /// Write the result to this file (atomically) instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CountMode {
    Brute,
    Exact,
    Series,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    Fwd,
    Inv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Tree,
    Mapping,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Park a preference sequence on a graph read from a JSON file.
    Simulate {
        /// Graph file: {"kind":"tree","n":..,"parent":[..]} or {"kind":"mapping","n":..,"succ":[..]}.
        graph: PathBuf,
        /// Comma-separated preferences, e.g. 10,5,14.
        #[arg(long, conflicts_with = "prefs_file")]
        prefs: Option<String>,
        /// JSON file {"prefs":[..]}.
        #[arg(long)]
        prefs_file: Option<PathBuf>,
    },
    /// Tabulate total parking function counts.
    Count {
        #[arg(long, value_enum, default_value = "exact")]
        mode: CountMode,
        /// Sizes: a number, a range a..b or a comma list.
        #[arg(long)]
        n: String,
        /// Driver counts (default: every m in 0..=n).
        #[arg(long)]
        m: Option<String>,
        /// Truncation order for series mode (default: largest n).
        #[arg(long)]
        order: Option<usize>,
    },
    /// Apply the tree/mapping bijection to a JSON record.
    Bijection {
        #[arg(long, value_enum)]
        direction: Direction,
        /// Forward: {"tree":..,"prefs":..,"marked":w}; inverse: {"mapping":..,"prefs":..}.
        input: PathBuf,
    },
    /// Exact, Monte-Carlo and asymptotic success probabilities over load factors.
    Phase {
        /// Load factors: a comma list, or start:stop:step.
        #[arg(long)]
        rho: String,
        /// Sizes: a number, a range a..b or a comma list.
        #[arg(long)]
        n: String,
        /// Monte-Carlo trials per cell (0 leaves the columns empty).
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Draw uniform random trees or mappings as JSON lines.
    Sample {
        #[arg(long, value_enum, default_value = "tree")]
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Run the invariant sweep on small sizes.
    Verify {
        /// Largest size to check.
        #[arg(long, default_value_t = 4)]
        n: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(workers) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(workers).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let out = cli.out.as_deref();
    let result = match cli.command {
        Command::Simulate { graph, prefs, prefs_file } => {
            commands::simulate(&graph, prefs.as_deref(), prefs_file.as_deref(), cli.format, out)
        }
        Command::Count { mode, n, m, order } => commands::count(mode, &n, m.as_deref(), order, cli.format, out),
        Command::Bijection { direction, input } => commands::bijection(direction, &input, out),
        Command::Phase { rho, n, trials, seed } => commands::phase(&rho, &n, trials, seed, cli.format, out),
        Command::Sample { kind, n, count, seed } => commands::sample(kind, n, count, seed, out),
        Command::Verify { n } => commands::verify(n, cli.format, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
