use thiserror::Error;

/// Error type shared by all modules of the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    Geometry(String),

    #[error("point outside domain: {0}")]
    OutsideDomain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("configuration error: {0}")]
    Config(String),

    /// The set has logarithmic capacity zero (finite point sets, empty sets).
    /// Callers that treat capacity 0 as a legitimate value catch this.
    #[error("polar set: logarithmic capacity is zero")]
    PolarSet,

    #[error("solver did not converge: residual {residual:.3e} after {sweeps} sweeps")]
    NoConvergence { residual: f64, sweeps: usize },

    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;
