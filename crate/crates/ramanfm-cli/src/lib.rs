//! Scenario handling, presets, CSV emission, and parallel grid evaluation
//! for the `ramanfm` command-line tool.

pub mod csvio;
pub mod parallel;
pub mod presets;
pub mod report;
pub mod run;
pub mod scenario;

/// Process exit semantics: 0 success, 1 configuration or schema error,
/// 2 numerical non-convergence, 3 validation failure.
#[derive(Debug)]
pub enum AppError {
    Config(anyhow::Error),
    Numeric(anyhow::Error),
    Validation(String),
}

impl AppError {
    pub fn exit_code(&self) -> u8 {
        match self {
            AppError::Config(_) => 1,
            AppError::Numeric(_) => 2,
            AppError::Validation(_) => 3,
        }
    }

    pub fn config(err: impl Into<anyhow::Error>) -> Self {
        AppError::Config(err.into())
    }

    /// Classify a core-library error: solver non-convergence and resolution
    /// failures are numeric, everything else is configuration.
    pub fn from_core(err: ramanfm::Error) -> Self {
        match err {
            ramanfm::Error::NonConvergence { .. } | ramanfm::Error::UnderResolved { .. } => {
                AppError::Numeric(anyhow::anyhow!(err))
            }
            other => AppError::Config(anyhow::anyhow!(other)),
        }
    }
}

impl std::fmt::Display for AppError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AppError::Config(e) => write!(f, "configuration error: {e:#}"),
            AppError::Numeric(e) => write!(f, "numerical error: {e:#}"),
            AppError::Validation(msg) => write!(f, "validation failed: {msg}"),
        }
    }
}

pub type AppResult<T> = Result<T, AppError>;
