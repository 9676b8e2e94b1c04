//! `popmat`: solve, verify and generate popular matroid intersection instances.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use popmat::gen::Family;

#[derive(Parser, Debug)]
#[command(name = "popmat", version, about = "Popular common independent sets of two ordered matroids")]
pub struct Cli {
    /// Leave the elapsed time out of the report, making it byte-stable.
    #[arg(long, global = true)]
    pub no_timing: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Maximum size popular common independent set.
    Solve {
        instance: String,
        /// Classify the output exhaustively and check it has maximum weakly defendable size.
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = popmat::popular::DEFAULT_BRUTE_FORCE_BOUND)]
        bound: usize,
    },
    /// Matroid kernel by deferred acceptance, side 1 proposing.
    Kernel { instance: String },
    /// Votes between two common independent sets, per side and in total.
    Vote {
        instance: String,
        /// Comma-separated element names.
        #[arg(long, allow_hyphen_values = true)]
        set_i: String,
        #[arg(long, allow_hyphen_values = true)]
        set_j: String,
        /// Weakly feasible pairings instead of feasible ones.
        #[arg(long)]
        weak: bool,
    },
    /// Exhaustive popularity classification of a set.
    Verify {
        instance: String,
        #[arg(long, allow_hyphen_values = true)]
        set: String,
        #[arg(long, default_value_t = popmat::popular::DEFAULT_BRUTE_FORCE_BOUND)]
        bound: usize,
    },
    /// Randomized checks of the exchange inequalities.
    CheckTheorems {
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated subset of partition, graphic, explicit.
        #[arg(long, default_value = "partition,graphic,explicit", value_delimiter = ',')]
        families: Vec<Family>,
        #[arg(long, default_value_t = 10)]
        max_size: usize,
    },
    /// Lexicographic popularity of b-matchings.
    #[command(subcommand)]
    Lex(LexCommand),
    /// Instance generators.
    #[command(subcommand)]
    Gen(GenCommand),
}

#[derive(Subcommand, Debug)]
pub enum LexCommand {
    /// Decide lexicographic popularity of a b-matching.
    Verify(LexSearch),
    /// Search for a b-matching that beats the given one.
    Dominate(LexSearch),
    /// Per-agent lexicographic votes between two b-matchings.
    Compare {
        instance: String,
        /// Edges as `a:b,c:d`; defaults to the `candidate` metadata entry.
        #[arg(long)]
        matching: Option<String>,
        /// Defaults to the `witness` metadata entry.
        #[arg(long)]
        against: Option<String>,
    },
    /// Seven-agent instance with no lexicographically popular b-matching.
    GenExample1 {
        #[arg(long, default_value_t = 1)]
        q: usize,
        /// Add q dummy partners that x ranks first.
        #[arg(long)]
        dummies: bool,
    },
    /// Reduction instance from an exact 3-cover instance.
    GenX3c {
        /// Sets as `1,2,3;1,2,3;...`, elements numbered from 1.
        #[arg(long)]
        sets: String,
        /// 1-based indices of an exact cover; stores the beating b-matching in the metadata.
        #[arg(long, value_delimiter = ',')]
        cover: Option<Vec<usize>>,
    },
    /// Raise every capacity to the maximum with dummy partners.
    Equalize { instance: String },
}

#[derive(Args, Debug)]
pub struct LexSearch {
    pub instance: String,
    /// Edges as `a:b,c:d`; defaults to the `candidate` metadata entry.
    #[arg(long)]
    pub matching: Option<String>,
    /// Search leaves explored before giving up.
    #[arg(long, default_value_t = 1 << 24)]
    pub budget: u64,
}

#[derive(Subcommand, Debug)]
pub enum GenCommand {
    /// Random two-sided matroid instance.
    Random {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    match commands::run(&cli, argv) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(commands::exit_code(&err))
        }
    }
}
