use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cocite_core::graph::{DanglingPolicy, DiagonalPolicy};
use cocite_core::ingest::InputFormat;
use cocite_core::pagerank::DEFAULT_TOLERANCE;
use cocite_core::scores::{DEFAULT_SEED, DEFAULT_SHUFFLES};

#[derive(Debug, Parser)]
#[command(
    name = "cocite",
    version,
    about = "Rank authors in a co-citation network"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// PageRank damping sweep, centralities and the combined rank table.
    Rank(RankArgs),
    /// Spearman correlation matrix across ranking measures.
    Correlate(CorrelateArgs),
    /// Plot-ready rank pairs for two measures.
    Scatter(ScatterArgs),
    /// Validate the input and print corpus statistics.
    IngestCheck(InputArgs),
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Input file.
    #[arg(long)]
    pub input: PathBuf,
    /// papers-csv, edges-csv or stats-csv.
    #[arg(long, default_value = "papers-csv", value_parser = parse_format)]
    pub format: InputFormat,
    /// Author statistics (stats-csv) to use alongside the input.
    #[arg(long)]
    pub stats: Option<PathBuf>,
    /// Keep authors cited strictly more than this many times.
    #[arg(long, default_value_t = 200)]
    pub threshold: u64,
    /// Count a co-cited pair as the product of reference multiplicities.
    #[arg(long)]
    pub pair_multiplicity: bool,
}

fn parse_format(s: &str) -> Result<InputFormat, String> {
    s.parse().map_err(|e: cocite_core::Error| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DiagonalArg {
    Keep,
    Zero,
}

impl From<DiagonalArg> for DiagonalPolicy {
    fn from(v: DiagonalArg) -> Self {
        match v {
            DiagonalArg::Keep => DiagonalPolicy::Keep,
            DiagonalArg::Zero => DiagonalPolicy::Zero,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DanglingArg {
    Uniform,
    Error,
}

impl From<DanglingArg> for DanglingPolicy {
    fn from(v: DanglingArg) -> Self {
        match v {
            DanglingArg::Uniform => DanglingPolicy::Uniform,
            DanglingArg::Error => DanglingPolicy::Error,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Power,
    Direct,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignificanceArg {
    T,
    Permutation,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Keep or zero self co-citation counts before normalizing.
    #[arg(long, value_enum, default_value = "zero")]
    pub diagonal: DiagonalArg,
    /// How to treat authors with no co-citations.
    #[arg(long, value_enum, default_value = "uniform")]
    pub dangling: DanglingArg,
    /// Minimum co-citation count for an edge in the centrality graph.
    #[arg(long, default_value_t = 1)]
    pub theta: u64,
    /// Stop when the L1 change between iterates is below this.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    pub tol: f64,
    /// Iteration cap. Defaults to a bound derived from d and --tol.
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// PageRank solver.
    #[arg(long, value_enum, default_value = "power")]
    pub method: MethodArg,
    /// uniform, citations, publications or custom:<path>
    #[arg(long, default_value = "uniform")]
    pub weight: String,
    /// Damping factor, or a `start:end:step` grid. Repeatable.
    #[arg(long = "d", allow_hyphen_values = true)]
    pub damping: Vec<String>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Seed for permutation tests.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Rank change (in positions) still classed as stable.
    #[arg(long, default_value_t = 2.0)]
    pub stability_slack: f64,
    /// Also write the co-citation matrix as matrix.csv.
    #[arg(long)]
    pub dump_matrix: bool,
}

#[derive(Debug, Clone, Args)]
pub struct RankArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CorrelateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Comma-separated measure labels, e.g. `PR(.15),PR_c(.85),Degree,h-index`.
    #[arg(long)]
    pub measures: Option<String>,
    /// Student-t test or seeded permutation test.
    #[arg(long, value_enum, default_value = "t")]
    pub significance: SignificanceArg,
    /// Shuffles per pair for the permutation test.
    #[arg(long, default_value_t = DEFAULT_SHUFFLES)]
    pub shuffles: usize,
    /// Print the mean r over cells given as `A:B`. Repeatable.
    #[arg(long)]
    pub average: Vec<String>,
}

#[derive(Debug, Clone, Args)]
pub struct ScatterArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Measure label for the x axis.
    #[arg(long)]
    pub x: String,
    /// Measure label for the y axis.
    #[arg(long)]
    pub y: String,
}
