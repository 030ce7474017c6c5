//! `polarsum`: sum/difference entropies, sumset constructions, kernel
//! selection and polar-code simulations from the command line.
//!
//! Exit status is 0 on success, 1 on I/O failures, 2 on usage errors and 3
//! when a request is refused for exceeding a size budget.

mod commands;
mod config;
mod error;
mod parse;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use polarsum::sumsets::DEFAULT_STEIN_BUDGET;

use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "polarsum", version, about = "Entropies of sums and differences, and polar codes built on them")]
pub struct Cli {
    /// File of `key = value` lines supplying default flags for the command.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Write results here instead of standard output.
    #[arg(short, long, value_name = "PATH", global = true)]
    pub output: Option<PathBuf>,

    /// Worker threads for Monte-Carlo runs (0 = all cores). Results do not
    /// depend on this.
    #[arg(long, default_value_t = 0, global = true)]
    pub workers: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// H(X+Y), H(X−Y) and their difference for a set or distribution.
    EntropyDiff(EntropyDiffArgs),
    /// Exhaustive search for sets with more sums than differences.
    MstdSearch(MstdArgs),
    /// Iterated Stein products of a set of integers.
    Stein(SteinArgs),
    /// Greedy Sidon set of the given size.
    Sidon(SidonArgs),
    /// A distribution with a prescribed H(X+Y) − H(X−Y).
    TargetDiff(TargetArgs),
    /// Stein level over a Sidon set with its entropy bounds.
    LpGap(LpGapArgs),
    /// Spread table and optimal kernel coefficient over F_q.
    KernelOpt(KernelArgs),
    /// Block-error curves of SC-decoded polar codes.
    PolarSim(PolarArgs),
    /// Sample paths of the polarization martingale.
    Martingale(MartingaleArgs),
    /// Capacity against one-step spread for binary-input channels.
    SpreadPlot(SpreadArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SetPreset {
    /// {0,2,3,4,7,11,12,14} in Z.
    Conway,
    /// {1,2,3,5,8,9,13,15,16} in Z.
    Marica,
    /// {0,1,3,4,5,6,7,10} in Z.
    Second,
    /// {0,1,2,4,5,9} in Z/12Z.
    Z12,
}

#[derive(Debug, Args)]
pub struct EntropyDiffArgs {
    /// Set literal such as 0,2,3,4,7 or, with --dist, a probability vector.
    #[arg(required_unless_present = "preset", conflicts_with = "preset", allow_hyphen_values = true)]
    pub input: Option<String>,
    /// Ambient group: z, or zM for Z/MZ.
    #[arg(long, default_value = "z")]
    pub group: String,
    #[arg(long, value_enum)]
    pub preset: Option<SetPreset>,
    /// Read the input as masses on 0, 1, 2, …
    #[arg(long)]
    pub dist: bool,
    /// Also print the exact value as `scale * log(num/den)`.
    #[arg(long)]
    pub exact: bool,
    /// Logarithm base for the floating-point entropies: e or a number > 1.
    #[arg(long, default_value = "e")]
    pub base: String,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("ambient").required(true).args(["modulus", "width"])))]
pub struct MstdArgs {
    /// Search Z/MZ.
    #[arg(long = "mod", id = "modulus", value_name = "M")]
    pub modulus: Option<u64>,
    /// Search subsets of [0, W] containing 0.
    #[arg(long)]
    pub width: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub min_size: usize,
    /// Defaults to the size of the search range.
    #[arg(long)]
    pub max_size: Option<usize>,
    /// Report one representative per affine class.
    #[arg(long)]
    pub canonical: bool,
}

#[derive(Debug, Args)]
pub struct SteinArgs {
    /// Base set of integers.
    #[arg(allow_hyphen_values = true)]
    pub set: String,
    #[arg(long, default_value_t = 1)]
    pub levels: u32,
    /// Largest |A|^(2^levels) attempted.
    #[arg(long, default_value_t = DEFAULT_STEIN_BUDGET)]
    pub budget: u64,
}

#[derive(Debug, Args)]
pub struct SidonArgs {
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct TargetArgs {
    /// Target value of H(X+Y) − H(X−Y) in nats.
    #[arg(long, allow_hyphen_values = true)]
    pub m: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Also write the distribution as `x,p` lines.
    #[arg(long, value_name = "PATH")]
    pub dist_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LpGapArgs {
    #[arg(long)]
    pub k: u32,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("law").required(true).args(["noise", "support"])))]
pub struct KernelArgs {
    #[arg(long)]
    pub q: u64,
    /// Noise masses on 0, …, q−1.
    #[arg(long)]
    pub noise: Option<String>,
    /// Uniform noise on this subset of F_q.
    #[arg(long)]
    pub support: Option<String>,
    /// Compare entropies exactly (masses read as fractions or decimals).
    #[arg(long)]
    pub exact: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolarPreset {
    /// q=3, noise 0.7,0.3,0, n=1024, c=1,2, rates 0.1..0.6.
    Figure2,
    /// q=5, noise 0.5,0.5,0,0,0, n=1024, c=2, rates 0.05..0.6.
    Figure3,
    /// q=3 with no noise, n=256, rates 0.25..1.
    Noiseless,
}

#[derive(Debug, Args)]
pub struct PolarArgs {
    /// Fills in every parameter not given explicitly.
    #[arg(long, value_enum)]
    pub preset: Option<PolarPreset>,
    /// Field order; defaults to the length of --noise.
    #[arg(long)]
    pub q: Option<u32>,
    /// Noise masses on 0, …, q−1.
    #[arg(long)]
    pub noise: Option<String>,
    /// Block length, a power of two.
    #[arg(long)]
    pub n: Option<usize>,
    /// `auto` or a comma-separated list of kernel coefficients.
    #[arg(long)]
    pub c: Option<String>,
    #[arg(long)]
    pub rates: Option<String>,
    #[arg(long)]
    pub construct_trials: Option<u64>,
    #[arg(long)]
    pub decode_trials: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Directory for reliability profiles, reused across runs.
    #[arg(long, env = "POLARSUM_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MartingaleArgs {
    /// `bec:ε` (closed form), `bsc:p`, or `channel:ROWS` with rows
    /// `p00,p01,…/p10,…` (exact transforms).
    #[arg(long)]
    pub family: String,
    /// Kernel coefficient for explicit channels.
    #[arg(long, default_value_t = 1)]
    pub c: u32,
    #[arg(long, default_value_t = 10)]
    pub depth: usize,
    #[arg(long, default_value_t = 1000)]
    pub paths: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpreadFamily {
    Bec,
    Bsc,
    Random,
}

#[derive(Debug, Args)]
pub struct SpreadArgs {
    #[arg(long, value_enum)]
    pub family: SpreadFamily,
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn command() -> clap::Command {
    Cli::command()
        .args_override_self(true)
        .mut_subcommands(|s| s.args_override_self(true))
}

fn parse(argv: Vec<String>) -> CliResult<Cli> {
    let cmd = command();
    let argv = config::expand(&cmd, argv)?;
    let matches = cmd.try_get_matches_from(argv).unwrap_or_else(|e| e.exit());
    Cli::from_arg_matches(&matches).map_err(|e| CliError::usage(e.to_string()))
}

fn run(argv: Vec<String>) -> CliResult<()> {
    let cli = parse(argv)?;
    let workers = cli.workers;
    polarsum::rng::with_workers(workers, move || commands::dispatch(&cli))?
}

fn main() -> ExitCode {
    match run(std::env::args().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("polarsum: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
