// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const OUT_DIR_ENV: &str = "CLIQUEPRUNE_OUT_DIR";

/// Learned vertex pruning for maximum clique enumeration.
#[derive(Debug, Parser)]
#[command(name = "cliqueprune", version)]
pub struct Cli {
    /// Worker threads for parallel feature and experiment stages.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: u32,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate G(n, p), optionally with a planted clique, or a core-periphery graph.
    Gen(GenArgs),
    /// Write the per-vertex feature matrix as CSV.
    Features(FeaturesArgs),
    /// Train a pruning model.
    Train(TrainArgs),
    /// Stratified k-fold cross-validation.
    Cv(CvArgs),
    /// Remove vertices the model predicts to be prunable.
    Prune(PruneArgs),
    /// Enumerate all maximum cliques and print a JSON report.
    Enumerate(EnumerateArgs),
    /// Degree method, model pruning and enumeration on one graph.
    Pipeline(PipelineArgs),
    /// Planted-clique experiment: train on one (n, k) pair, test on others.
    Experiment(ExperimentArgs),
    /// Vertex accuracy of a small-pair model against natively trained ones.
    Robustness(RobustnessArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Auto,
    EdgeList,
    MatrixMarket,
}

impl From<FormatArg> for cliqueprune::GraphFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Auto => cliqueprune::GraphFormat::Auto,
            FormatArg::EdgeList => cliqueprune::GraphFormat::EdgeList,
            FormatArg::MatrixMarket => cliqueprune::GraphFormat::MatrixMarket,
        }
    }
}

#[derive(Debug, Args)]
pub struct GraphInput {
    /// Edge list or Matrix-Market file.
    pub graph: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct SeedArg {
    /// Master seed; a fresh one is drawn and printed when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
}

fn probability(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..=1.0).contains(&x) {
        Ok(x)
    } else {
        Err(format!("{x} is not in [0, 1]"))
    }
}

fn non_negative(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if x >= 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(format!("{x} must be a finite non-negative number"))
    }
}

fn pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected N,K, got '{s}'"))?;
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("'{t}': {e}"));
    Ok((parse(a)?, parse(b)?))
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, required_unless_present = "core")]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 0.5, value_parser = probability)]
    pub p: f64,
    /// Plant a clique of this size and write its vertices to a sidecar JSON.
    #[arg(long)]
    pub k: Option<usize>,
    /// Core-periphery graph: size of the complete core.
    #[arg(long, conflicts_with_all = ["n", "k"], requires = "periphery")]
    pub core: Option<usize>,
    #[arg(long)]
    pub periphery: Option<usize>,
    /// Earlier vertices each periphery vertex attaches to.
    #[arg(long, default_value_t = 1)]
    pub attach: usize,
    #[command(flatten)]
    pub seed: SeedArg,
    /// Output edge list.
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    RealWorld,
    Planted,
}

#[derive(Debug, Args)]
pub struct FeaturesArgs {
    #[command(flatten)]
    pub input: GraphInput,
    #[arg(long, value_enum, default_value_t = ModeArg::RealWorld)]
    pub mode: ModeArg,
    /// Edge probability for the analytic expectations of planted mode.
    #[arg(long, default_value_t = 0.5, value_parser = probability)]
    pub p: f64,
    /// CSV destination; stdout when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HyperArgs {
    #[arg(long, default_value_t = 400, value_parser = clap::value_parser!(u64).range(1..))]
    pub epochs: u64,
    #[arg(long, default_value_t = 0.0001, value_parser = non_negative)]
    pub l2: f64,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct DataSource {
    /// Labelled rows as written by `--save-data`.
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Planted-clique rows for N,K.
    #[arg(long, value_parser = pair)]
    pub planted: Option<(usize, usize)>,
    /// Graphs labelled by exact enumeration.
    #[arg(long, num_args = 1..)]
    pub graphs: Option<Vec<PathBuf>>,
}

#[derive(Debug, Args)]
pub struct DataArgs {
    #[command(flatten)]
    pub source: DataSource,
    /// Minimum number of planted rows.
    #[arg(long, default_value_t = 20_000)]
    pub rows: usize,
    #[arg(long, default_value_t = 0.5, value_parser = probability)]
    pub p: f64,
    /// Apply the degree method before labelling `--graphs`.
    #[arg(long)]
    pub degree_first: bool,
    /// Also write the labelled rows to this CSV.
    #[arg(long)]
    pub save_data: Option<PathBuf>,
    #[command(flatten)]
    pub seed: SeedArg,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub hyper: HyperArgs,
    /// Model file to write.
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct CvArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub hyper: HyperArgs,
    #[arg(long, default_value_t = 4)]
    pub folds: usize,
}

#[derive(Debug, Args)]
pub struct PruneArgs {
    #[command(flatten)]
    pub input: GraphInput,
    #[arg(long)]
    pub model: PathBuf,
    /// Confidence threshold on the prune probability.
    #[arg(long, default_value_t = 0.55, value_parser = probability)]
    pub q: f64,
    /// Print the hint set (vertices with keep probability at least q) instead.
    #[arg(long)]
    pub hints: bool,
    /// Directory for the reduced graph and its JSON summary.
    #[arg(short, long, env = OUT_DIR_ENV)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[command(flatten)]
    pub input: GraphInput,
    /// Maximum number of cliques kept in the report.
    #[arg(long)]
    pub cap: Option<usize>,
    /// Give up after this many seconds.
    #[arg(long)]
    pub timeout: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SolverArg {
    Exact,
    DegreeOnly,
    Both,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    #[command(flatten)]
    pub input: GraphInput,
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, default_value_t = 0.55, value_parser = probability)]
    pub q: f64,
    #[arg(long, value_enum, default_value_t = SolverArg::Exact)]
    pub solver: SolverArg,
    /// Per-solve timeout in seconds.
    #[arg(long)]
    pub timeout: Option<f64>,
    /// Apply the degree rule once instead of to a fixpoint.
    #[arg(long)]
    pub single_pass: bool,
    #[arg(long, default_value_t = 8)]
    pub greedy_restarts: usize,
    #[command(flatten)]
    pub seed: SeedArg,
    #[arg(short, long, env = OUT_DIR_ENV, default_value = "cliqueprune-out")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ReportFormat {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(long, value_parser = pair)]
    pub train: (usize, usize),
    #[arg(long, value_parser = pair, num_args = 1.., required = true)]
    pub test: Vec<(usize, usize)>,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, default_value_t = 0.55, value_parser = probability)]
    pub q: f64,
    #[arg(long, default_value_t = 0.5, value_parser = probability)]
    pub p: f64,
    /// Minimum number of training rows.
    #[arg(long, default_value_t = 20_000)]
    pub rows: usize,
    #[command(flatten)]
    pub hyper: HyperArgs,
    #[command(flatten)]
    pub seed: SeedArg,
    /// What to print on stdout.
    #[arg(long, value_enum, default_value_t = ReportFormat::Table)]
    pub report: ReportFormat,
    /// Also write report.json and report.csv here.
    #[arg(short, long, env = OUT_DIR_ENV)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RobustnessArgs {
    #[arg(long, value_parser = pair, default_value = "64,10")]
    pub small: (usize, usize),
    #[arg(long, value_parser = pair, num_args = 1.., required = true)]
    pub large: Vec<(usize, usize)>,
    #[arg(long, default_value_t = 0.5, value_parser = probability)]
    pub p: f64,
    #[arg(long, default_value_t = 20_000)]
    pub rows: usize,
    #[arg(long, default_value_t = 10_000)]
    pub test_rows: usize,
    #[command(flatten)]
    pub hyper: HyperArgs,
    #[command(flatten)]
    pub seed: SeedArg,
    /// Print JSON instead of a table.
    #[arg(long)]
    pub json: bool,
}
