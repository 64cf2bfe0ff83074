use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use zsys_core::analysis::{DEFAULT_SAMPLES, DEFAULT_SEED};
use zsys_core::Family;

/// Exact computations with Z-systems of prime order and their two matrix examples.
#[derive(Debug, Parser)]
#[command(name = "zsys", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Structure-constant table of an example window
    Derive {
        /// Also print the generator matrices u_lo..u_hi
        #[arg(long)]
        matrices: bool,
    },
    /// Normal form of a word
    Nf,
    /// Commutator [a, b] of two words, or of two matrices
    Comm {
        /// First matrix as JSON nested arrays of term lists
        #[arg(long, requires = "matrix_b", conflicts_with = "word")]
        matrix_a: Option<String>,
        #[arg(long, requires = "matrix_a")]
        matrix_b: Option<String>,
    },
    /// Lower cutoff of an example or table
    Cutoff,
    /// Nilpotency class of a window
    Class,
    /// ZS axioms and consistency of a window
    Axioms,
    /// Lemma checks, normal-form lemmas and (for examples) the matrix oracle
    Lemmas,
    /// RGD axioms of an example on roots with |z| <= k
    Rgd,
    /// Enumerate consistent commutation tables (JSON lines)
    Search,
    /// Subgroup generated by all shifts of two elements
    Shiftinv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Json,
    Pretty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExampleArg {
    Standard,
    Unitary,
}

impl From<ExampleArg> for Family {
    fn from(e: ExampleArg) -> Self {
        match e {
            ExampleArg::Standard => Family::Standard,
            ExampleArg::Unitary => Family::Unitary,
        }
    }
}

#[derive(Debug, Args)]
pub struct Opts {
    #[arg(long, global = true, value_enum)]
    pub example: Option<ExampleArg>,
    /// Table file in window JSON form, `-` for stdin
    #[arg(long, global = true, conflicts_with = "example")]
    pub table: Option<PathBuf>,
    #[arg(long, global = true)]
    pub p: Option<u64>,
    #[arg(long, global = true, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    pub window: Option<Vec<i64>>,
    /// Word such as "2:1 0:-1"; a bare index means exponent 1
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub word: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub word2: Option<String>,
    /// First element for shiftinv
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Second element for shiftinv
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub b: Option<String>,
    /// Distance bound for cutoff
    #[arg(long, global = true, default_value_t = 10)]
    pub bound: u64,
    /// Root range for rgd
    #[arg(long, global = true, default_value_t = 4)]
    pub k: i64,
    #[arg(long, global = true, env = "ZSYS_CLOSURE_CAP", default_value_t = zsys_core::DEFAULT_CAP)]
    pub cap: u64,
    #[arg(long, global = true, default_value_t = 1)]
    pub support_bound: usize,
    #[arg(long, global = true, default_value_t = 1)]
    pub depth: u32,
    #[arg(long, global = true, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    pub output: Output,
    /// Add wall-clock timings (kept out of the result payload)
    #[arg(long, global = true)]
    pub timings: bool,
}
