use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the domain of a special function or distribution.
    #[error("domain error: {0}")]
    Domain(String),

    /// Gamma or Weibull shape too small for the Fisher information to exist.
    #[error("shape parameter k = {k} must exceed 2 for the Fisher information to be finite")]
    ShapeDomain { k: f64 },

    /// Sample has zero spread, so no bandwidth (and no density) exists.
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    /// A plug-in functional came out with the wrong sign.
    #[error("bandwidth selection failed: {0}")]
    Bandwidth(String),

    #[error("quadrature did not converge: estimate {estimate:e}, error bound {error_bound:e}")]
    Quadrature { estimate: f64, error_bound: f64 },

    #[error("complexity {0} is below 1 and unreachable in the Fisher-Shannon plane")]
    UnreachableComplexity(f64),

    /// Invalid configuration (window geometry, sweep grid, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// Input data violates a structural invariant.
    #[error("data error: {0}")]
    Data(String),
}
