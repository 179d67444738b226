use std::fmt;
use std::path::Path;

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INPUT: u8 = 3;
pub const EXIT_COMPUTE: u8 = 4;

/// A failure with its exit code and a `module::Kind` tag.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub kind: String,
    pub message: String,
}

impl CliError {
    pub fn usage(kind: &str, message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            kind: format!("cli::{kind}"),
            message: message.into(),
        }
    }

    pub fn input(kind: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            kind: kind.into(),
            message: message.into(),
        }
    }

    pub fn compute(kind: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            code: EXIT_COMPUTE,
            kind: kind.into(),
            message: message.into(),
        }
    }

    pub fn io(path: &Path, e: impl fmt::Display) -> Self {
        Self::input("io::Error", format!("{}: {e}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error[{}]: {}", self.kind, self.message)
    }
}

/// `module::Variant` from the `Debug` form of an error enum.
pub fn tag(module: &str, e: &impl fmt::Debug) -> String {
    let debug = format!("{e:?}");
    let variant = debug
        .split(|c: char| !c.is_alphanumeric() && c != '_')
        .next()
        .unwrap_or("Error");
    format!("{module}::{variant}")
}

macro_rules! from_core {
    ($ty:ty, $module:literal, $code:expr) => {
        impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                Self {
                    code: $code,
                    kind: tag($module, &e),
                    message: e.to_string(),
                }
            }
        }
    };
}

from_core!(optitopo::topology::TopologyError, "topology", EXIT_INPUT);

impl From<optitopo::metrics::MetricsError> for CliError {
    fn from(e: optitopo::metrics::MetricsError) -> Self {
        let code = match e {
            optitopo::metrics::MetricsError::Csv(_) => EXIT_INPUT,
            _ => EXIT_COMPUTE,
        };
        Self {
            code,
            kind: tag("metrics", &e),
            message: e.to_string(),
        }
    }
}

from_core!(optitopo::generator::GenerationError, "generator", EXIT_COMPUTE);
from_core!(optitopo::stats::StatsError, "stats", EXIT_COMPUTE);
from_core!(optitopo::selection::SelectionError, "selection", EXIT_COMPUTE);
