use thiserror::Error;

use crate::spectral::Representation;

pub type Result<T> = std::result::Result<T, SmapError>;

#[derive(Debug, Error)]
pub enum SmapError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// The field reaches the south pole where the chart at (0,0,1) is undefined.
    #[error("chart violation at grid point {index}: 1 + s3 = {margin:e}")]
    ChartViolation { index: usize, margin: f64 },

    #[error("representation mismatch: expected {expected:?}, found {found:?}")]
    RepresentationMismatch {
        expected: Representation,
        found: Representation,
    },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },

    #[error("no contraction at iteration {iteration}: ratio {ratio:e}")]
    NoContraction { iteration: usize, ratio: f64 },

    #[error("maximum iterations ({max_iter}) exceeded; last relative difference {last:e}")]
    MaxIterExceeded { max_iter: usize, last: f64 },

    #[error("inner fixed-point iteration diverged at step {step} after {sweeps} sweeps")]
    InnerDivergence { step: usize, sweeps: usize },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("time window too short: {samples} samples (need at least 16)")]
    WindowTooShort { samples: usize },

    #[error("direction is not aligned with the grid lattice")]
    UnsupportedDirection,

    #[error("empty ensemble")]
    EmptyEnsemble,

    #[error("config error: {0}")]
    Config(String),

    #[error("snapshot format error: {0}")]
    Snapshot(String),

    #[error("validation failure: {0}")]
    ValidationFailure(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl SmapError {
    /// Variant name, used when reporting numeric failures on the command line.
    pub fn name(&self) -> &'static str {
        match self {
            SmapError::InvalidGrid(_) => "InvalidGrid",
            SmapError::ChartViolation { .. } => "ChartViolation",
            SmapError::RepresentationMismatch { .. } => "RepresentationMismatch",
            SmapError::GridMismatch(_) => "GridMismatch",
            SmapError::AxisOutOfRange { .. } => "AxisOutOfRange",
            SmapError::NoContraction { .. } => "NoContraction",
            SmapError::MaxIterExceeded { .. } => "MaxIterExceeded",
            SmapError::InnerDivergence { .. } => "InnerDivergence",
            SmapError::DegenerateInput(_) => "DegenerateInput",
            SmapError::WindowTooShort { .. } => "WindowTooShort",
            SmapError::UnsupportedDirection => "UnsupportedDirection",
            SmapError::EmptyEnsemble => "EmptyEnsemble",
            SmapError::Config(_) => "ConfigError",
            SmapError::Snapshot(_) => "SnapshotError",
            SmapError::ValidationFailure(_) => "ValidationFailure",
            SmapError::Io(_) => "IoError",
            SmapError::Csv(_) => "CsvError",
        }
    }

    /// Process exit code: 2 for configuration problems, 3 for a failed
    /// verification suite, 4 for everything raised by the numerics.
    pub fn exit_code(&self) -> i32 {
        match self {
            SmapError::Config(_) => 2,
            SmapError::ValidationFailure(_) => 3,
            _ => 4,
        }
    }
}
