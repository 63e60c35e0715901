//! Experiment runner tying the profile, Markov, ensemble, Chebyshev,
//! diagram, path-expansion and edge-statistics crates into reproducible
//! scenarios with machine-readable reports.

pub mod cli;
pub mod config;
pub mod output;
pub mod presets;
pub mod report;
pub mod scenarios;
pub mod svg;

pub use config::{ExperimentConfig, Formats, Params, Scenario};
pub use output::{samples_csv, write_outputs, Artifacts, RunMeta};
pub use presets::{list_presets, presets_table, Preset};
pub use report::{Budget, Check, Report, Status};
pub use scenarios::{Outcome, Runner, SamplePair, STAT_BUDGET};
pub use svg::{emit_svg, render_svg};

/// Exit code for an invalid configuration or violated precondition.
pub const EXIT_CONFIG: i32 = 64;
pub const EXIT_RUNTIME: i32 = 70;
pub const EXIT_IO: i32 = 74;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("runtime failure: {0}")]
    Runtime(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Runtime(_) => EXIT_RUNTIME,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<irm_edgestats::EdgeError> for CliError {
    fn from(e: irm_edgestats::EdgeError) -> Self {
        match e {
            irm_edgestats::EdgeError::Numerical { .. } => CliError::Runtime(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

macro_rules! precondition_errors {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Config(e.to_string())
            }
        }
    )*};
}

precondition_errors!(irm_profiles::ProfileError, irm_chebyshev::ChebError, irm_nonbacktracking::NbError);

impl From<irm_ensembles::EnsembleError> for CliError {
    fn from(e: irm_ensembles::EnsembleError) -> Self {
        match e {
            irm_ensembles::EnsembleError::Linalg(_) => CliError::Runtime(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<irm_markov::MarkovError> for CliError {
    fn from(e: irm_markov::MarkovError) -> Self {
        match e {
            irm_markov::MarkovError::Drift { .. } => CliError::Runtime(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<irm_diagrams::DiagramError> for CliError {
    fn from(e: irm_diagrams::DiagramError) -> Self {
        match e {
            irm_diagrams::DiagramError::Mismatch(_) => CliError::Runtime(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
