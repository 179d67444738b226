//! `optitopo` command-line tool.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use optitopo::generator::RecipeName;
use optitopo::metrics::NormalizationScheme;
use optitopo::selection::MarginAggregation;
use optitopo::stats::StdConvention;

use config::Format;
use error::{CliError, EXIT_USAGE};

#[derive(Debug, Parser)]
#[command(name = "optitopo", version, about = "Optical core network topology generation, metrics, validation and clustering")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// TOML file with default settings; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads [default: available parallelism].
    #[arg(long, global = true, env = "OPTITOPO_JOBS")]
    pub jobs: Option<usize>,
    /// Suppress progress lines on stderr.
    #[arg(long, global = true)]
    pub quiet: bool,
    /// Allow overwriting existing output files.
    #[arg(long, global = true)]
    pub force: bool,
    /// Master seed for every random choice.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a topology corpus and re-export it in canonical form.
    Ingest(IngestArgs),
    /// Compute the metric suite for every topology under a directory.
    Metrics(MetricsArgs),
    /// Generate a synthetic dataset.
    Generate(GenerateArgs),
    /// Two-sample KS comparison of synthetic against real topologies.
    Validate(ValidateArgs),
    /// Summary statistics, correlation matrix and diagnostics of a metrics file.
    Correlate(CorrelateArgs),
    /// Per-topology z-scores and outlier flags.
    Outliers(OutliersArgs),
    /// PCA, k-means sweep and SVM margins for all four metric levels.
    Cluster(ClusterArgs),
    /// Three-metric subset search per category.
    Select(SelectArgs),
    /// WSD clusters and a uniform benchmark slice.
    Slice(SliceArgs),
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Compare stored edge lengths with the fibre model.
    #[arg(long)]
    pub audit_lengths: bool,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub normalization: Option<NormalizationScheme>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub recipe: RecipeName,
    #[arg(long)]
    pub out: PathBuf,
    /// Real topologies to match (position-matched recipe only).
    #[arg(long)]
    pub reference: Option<PathBuf>,
    /// Replicates per reference topology [default: 100].
    #[arg(long)]
    pub replicates: Option<usize>,
    /// Distance exponent of the attachment score [default: 5].
    #[arg(long)]
    pub theta: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub real: PathBuf,
    #[arg(long)]
    pub synthetic: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct MetricSelection {
    /// Metrics CSV written by `metrics`.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Comma-separated metric names [default: all].
    #[arg(long, value_delimiter = ',')]
    pub metrics: Option<Vec<String>>,
}

#[derive(Debug, Args)]
pub struct CorrelateArgs {
    #[command(flatten)]
    pub select: MetricSelection,
    #[arg(long)]
    pub std_convention: Option<StdConvention>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct OutliersArgs {
    #[command(flatten)]
    pub select: MetricSelection,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub k_min: Option<usize>,
    #[arg(long)]
    pub k_max: Option<usize>,
    /// SVM soft-margin penalty.
    #[arg(long)]
    pub svm_c: Option<f64>,
    #[arg(long)]
    pub margin_aggregation: Option<MarginAggregation>,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SliceArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub wsd_clusters: Option<usize>,
    #[arg(long)]
    pub size_bins: Option<usize>,
    #[arg(long)]
    pub path_bins: Option<usize>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code)
        }
    }
}

impl From<rayon::ThreadPoolBuildError> for CliError {
    fn from(e: rayon::ThreadPoolBuildError) -> Self {
        CliError::usage("Jobs", e.to_string())
    }
}
