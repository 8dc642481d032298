use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, RmtError>;

#[derive(Debug, Error)]
pub enum RmtError {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: String,
    },

    #[error("invalid singular-value profile: {0}")]
    InvalidProfile(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("invalid support: {0}")]
    InvalidSupport(String),

    #[error("{routine} failed: leading minor {pivot} is not positive definite (pivot value {value:e})")]
    Decomposition {
        routine: &'static str,
        pivot: usize,
        value: f64,
    },

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("{routine} did not converge ({detail})")]
    Convergence { routine: &'static str, detail: String },

    #[error("{function} is not defined at {value}: {reason}")]
    Domain {
        function: &'static str,
        value: f64,
        reason: String,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("refused: {limit} (requested {requested}, limit {max})")]
    ResourceLimit { limit: &'static str, requested: f64, max: f64 },

    #[error("trial {trial}: {source}")]
    Trial {
        trial: u64,
        #[source]
        source: Box<RmtError>,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

impl RmtError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        RmtError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn param(name: &'static str, value: f64, reason: impl Into<String>) -> Self {
        RmtError::InvalidParameter {
            name,
            value,
            reason: reason.into(),
        }
    }

    /// True for failures of the numerical engines (eigensolvers, Newton, quadrature).
    pub fn is_numerical(&self) -> bool {
        match self {
            RmtError::Convergence { .. } | RmtError::Decomposition { .. } => true,
            RmtError::Trial { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}
