use std::path::Path;

use optitopo::metrics::NormalizationScheme;
use optitopo::selection::MarginAggregation;
use optitopo::stats::StdConvention;
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Settings read from `--config`. Every key is optional; command-line flags
/// take precedence.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub quiet: Option<bool>,
    pub format: Option<Format>,
    pub normalization: Option<NormalizationScheme>,
    pub std_convention: Option<StdConvention>,
    pub theta: Option<f64>,
    pub replicates: Option<usize>,
    pub svm_c: Option<f64>,
    pub margin_aggregation: Option<MarginAggregation>,
    pub duality_gap: Option<f64>,
    pub k_min: Option<usize>,
    pub k_max: Option<usize>,
    pub kmeans_restarts: Option<usize>,
    pub kmeans_tolerance: Option<f64>,
    pub wsd_clusters: Option<usize>,
    pub size_bins: Option<usize>,
    pub path_bins: Option<usize>,
    pub metrics: Option<Vec<String>>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|e| CliError::usage("Config", format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }
}

/// First of flag, config value, default.
pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}
