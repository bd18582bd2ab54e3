use std::path::PathBuf;

use thiserror::Error;

use crate::diagnostic::Diagnostic;

pub type Result<T, E = VrenError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum VrenError {
    #[error("E_ZONE_RANGE: zone {0} is outside 1..=26")]
    ZoneRange(i64),

    /// One or more grammar-level problems; each carries its line number.
    #[error("{} parse error(s), first: {}", .0.len(), .0.first().map(|d| d.to_string()).unwrap_or_default())]
    Parse(Vec<Diagnostic>),

    #[error("E_INVALID_MODEL: {0}")]
    InvalidModel(String),

    #[error("E_SCHEMA: {0}")]
    Schema(String),

    #[error("E_EMPTY_SCOPE: {0}")]
    EmptyScope(String),

    #[error("E_DEGENERATE_LABELS: training labels contain a single class")]
    DegenerateLabels,

    #[error("E_DIM_MISMATCH: expected {expected} features, got {actual}")]
    DimMismatch { expected: usize, actual: usize },

    #[error("E_LENGTH_MISMATCH: {left} predictions vs {right} labels")]
    LengthMismatch { left: usize, right: usize },

    #[error("E_BAD_DISTRIBUTION: {0}")]
    BadDistribution(String),

    #[error("E_INVALID_PERTURBATION: {0}")]
    InvalidPerturbation(String),

    #[error("E_BAD_INDEX: {0}")]
    BadIndex(String),

    #[error("E_BAD_PROFILE: {0}")]
    BadProfile(String),

    #[error("E_LAYOUT_MISMATCH: model layout {found} does not match {expected}")]
    LayoutMismatch { expected: String, found: String },

    #[error("E_IO: {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl VrenError {
    /// Stable diagnostic-style code, used by the CLI and the HTTP error envelope.
    pub fn code(&self) -> &'static str {
        match self {
            VrenError::ZoneRange(_) => "E_ZONE_RANGE",
            VrenError::Parse(diags) => diags.first().map(|d| d.code.as_str()).unwrap_or("E_SYNTAX"),
            VrenError::InvalidModel(_) => "E_INVALID_MODEL",
            VrenError::Schema(_) => "E_SCHEMA",
            VrenError::EmptyScope(_) => "E_EMPTY_SCOPE",
            VrenError::DegenerateLabels => "E_DEGENERATE_LABELS",
            VrenError::DimMismatch { .. } => "E_DIM_MISMATCH",
            VrenError::LengthMismatch { .. } => "E_LENGTH_MISMATCH",
            VrenError::BadDistribution(_) => "E_BAD_DISTRIBUTION",
            VrenError::InvalidPerturbation(_) => "E_INVALID_PERTURBATION",
            VrenError::BadIndex(_) => "E_BAD_INDEX",
            VrenError::BadProfile(_) => "E_BAD_PROFILE",
            VrenError::LayoutMismatch { .. } => "E_LAYOUT_MISMATCH",
            VrenError::Io { .. } => "E_IO",
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        VrenError::Io {
            path: path.into(),
            source,
        }
    }
}
