use thiserror::Error;

use crate::crlb::CrlbError;
use crate::estimator::EstimatorError;
use crate::harness::ConfigError;
use crate::topology::TopologyError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Crate-level error, wrapping the per-module error types.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Crlb(#[from] CrlbError),
    #[error(transparent)]
    Estimator(#[from] EstimatorError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}
