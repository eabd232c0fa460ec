//! `chipfire`: simulate, detect periods, construct, enumerate, verify.
//!
//! Exit codes: 0 success, 2 input error, 3 step cap exceeded, 4 invalid
//! construction target, 5 verification failure.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::Format;

#[derive(Parser, Debug)]
#[command(name = "chipfire", version, about = "Parallel chip-firing games: simulation, periods, constructions, verification")]
pub struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the chips and firing set at every step.
    Simulate {
        #[command(flatten)]
        input: PositionInput,
        #[arg(long, default_value_t = 10)]
        steps: u64,
    },
    /// Detect transient length and period.
    Period {
        #[command(flatten)]
        input: PositionInput,
        #[arg(long, value_enum, default_value_t = Method::Stored)]
        method: Method,
        /// Step cap (default: CHIPFIRE_STEP_CAP or 10^7).
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Build a position with a prescribed period.
    #[command(subcommand)]
    Construct(Construct),
    /// Period multiset over all or sampled starts.
    Enumerate(EnumerateArgs),
    /// Theorem and property checks.
    #[command(subcommand)]
    Verify(Verify),
}

#[derive(Args, Debug)]
pub struct PositionInput {
    /// Graph specifier, e.g. complete_bipartite:2,3 (taken from the chips
    /// file when omitted there).
    #[arg(long)]
    pub graph: Option<String>,
    /// Comma-separated chip counts in canonical vertex order.
    #[arg(long, conflicts_with = "chips_file")]
    pub chips: Option<String>,
    /// Position JSON document `{"graph": ..., "chips": [...]}`.
    #[arg(long)]
    pub chips_file: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Stored,
    Lowmem,
    Both,
}

#[derive(Subcommand, Debug)]
pub enum Construct {
    /// σ_k / σ_2k family on K_{a,b}.
    Bipartite {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        period: usize,
        /// Run the detector and embed the measured period.
        #[arg(long)]
        check: bool,
    },
    /// Schedule-derived position on K_{a_1,…,a_c}, period (c−j)·a_c − k + 1.
    Cpartite {
        /// Part sizes, non-increasing.
        #[arg(long, value_delimiter = ',', required = true)]
        parts: Vec<usize>,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        check: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Random,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub graph: String,
    #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
    pub mode: Mode,
    /// Number of random starts.
    #[arg(long, default_value_t = 1000)]
    pub samples: u64,
    /// Sample on [0, 4deg(v)] instead of [0, 2deg(v)−1].
    #[arg(long)]
    pub unconfined: bool,
    /// Per-vertex chip bound, comma-separated (default 2deg(v)−1).
    #[arg(long, value_delimiter = ',')]
    pub bound: Option<Vec<u64>>,
    /// Maximum number of exhaustive starts.
    #[arg(long, default_value_t = 10_000_000)]
    pub budget: u128,
    #[arg(long)]
    pub cap: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum Verify {
    /// Exhaustive period sets of K_{a,b}, 1 ≤ a ≤ max-a, a ≤ b ≤ max-b.
    BipartiteTheorem {
        #[arg(long, default_value_t = 3)]
        max_a: usize,
        #[arg(long, default_value_t = 3)]
        max_b: usize,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u128,
    },
    /// Known-class property suites.
    Class {
        #[arg(long, value_parser = clap::value_parser!(chipfire::verify::PropertyClass))]
        class: chipfire::verify::PropertyClass,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Bipartite lemma suites on K_{a,b}.
    Lemmas {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = 30)]
        horizon: usize,
        #[arg(long)]
        cap: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let Some(text) = &e.output {
                print!("{text}");
            }
            eprintln!("error: {}", e.message);
            ExitCode::from(e.kind.code())
        }
    }
}
