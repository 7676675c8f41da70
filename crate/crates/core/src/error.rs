use thiserror::Error;

use crate::model::ConfigError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not converge: estimate {estimate:e}, error bound {error:e}")]
    NonConvergence { estimate: f64, error: f64 },

    #[error("insufficient samples: relative standard error {relative_se:.4} exceeds {limit}")]
    InsufficientSamples { relative_se: f64, limit: f64 },

    #[error("deployment contains no base stations")]
    EmptyDeployment,

    #[error("invalid sweep: {0}")]
    Sweep(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors that stem from numerical non-convergence.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NonConvergence { .. } | Error::InsufficientSamples { .. })
    }
}
