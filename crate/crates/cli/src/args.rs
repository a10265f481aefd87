use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use linkmax::dcov::DistanceMode;
use linkmax::DEFAULT_TOLERANCE;

#[derive(Debug, Parser)]
#[command(name = "linkmax", version, about = "Exact maxi-min subset selection via monotone linkages")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Find all minimal maximizers of the induced objective.
    Select(SelectArgs),
    /// Write the pairwise distance covariance matrix of a data file.
    Dcov(DcovArgs),
    /// Cross-check the parallel search against exhaustive enumeration.
    Verify(VerifyArgs),
    /// Time the search phases for several worker counts.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LinkageKind {
    /// Distance covariance between data columns.
    Dcov,
    /// Header-free square CSV of nonnegative weights.
    Weights,
}

impl LinkageKind {
    pub fn name(self) -> &'static str {
        match self {
            LinkageKind::Dcov => "dcov",
            LinkageKind::Weights => "weights",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DistanceArg {
    Squared,
    Euclidean,
}

impl From<DistanceArg> for DistanceMode {
    fn from(d: DistanceArg) -> Self {
        match d {
            DistanceArg::Squared => DistanceMode::Squared,
            DistanceArg::Euclidean => DistanceMode::Euclidean,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Data CSV (header row of feature labels) or weight CSV (square, no header).
    #[arg(long)]
    pub input: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "dcov")]
    pub linkage: LinkageKind,

    #[arg(long, value_enum, default_value = "squared")]
    pub distance: DistanceArg,

    /// Z-score each data column first (the default for dcov).
    #[arg(long, overrides_with = "no_normalize")]
    pub normalize: bool,

    #[arg(long, overrides_with = "normalize")]
    pub no_normalize: bool,

    /// Comma-separated element labels for weight input.
    #[arg(long, value_delimiter = ',')]
    pub labels: Option<Vec<String>>,

    /// Absolute tolerance for equal objective values.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    pub tol: f64,

    /// Where to write the result; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

impl InputArgs {
    /// Normalization applies to data input only and is on unless disabled.
    pub fn normalize(&self) -> bool {
        self.linkage == LinkageKind::Dcov && !self.no_normalize
    }
}

#[derive(Debug, Clone, Args)]
pub struct SelectArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Worker threads, 0 for all cores.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,

    /// Include one cluster per start element in the result.
    #[arg(long)]
    pub diagnostics: bool,
}

#[derive(Debug, Clone, Args)]
pub struct DcovArgs {
    #[command(flatten)]
    pub input: InputArgs,

    #[arg(long, default_value_t = 0)]
    pub workers: usize,

    /// Also write the distance correlation matrix here.
    #[arg(long)]
    pub dcor_output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: InputArgs,

    #[arg(long, default_value_t = 0)]
    pub workers: usize,

    /// Seed for the randomized property checks.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Random pairs for the quasi-concavity and monotonicity checks.
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Comma-separated worker counts to time.
    #[arg(long, value_delimiter = ',', default_value = "1,2,4")]
    pub workers: Vec<usize>,

    /// Size of the random weight matrix used when no input is given.
    #[arg(long, default_value_t = 2000)]
    pub synthetic: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}
