use thiserror::Error;

/// Errors produced by the solver pipeline.
#[derive(Error, Debug)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    /// The composed kernel system could not be factorized reliably.
    #[error("conditioning error at q={q}, eps={epsilon}, nx={nx}: {detail}")]
    Conditioning {
        q: f64,
        epsilon: f64,
        nx: usize,
        detail: String,
    },

    #[error("numerical error: {0}")]
    Numerical(String),

    /// Two-point extrapolation called with coincident abscissas.
    #[error("degenerate extrapolation input: {0}")]
    Degenerate(String),

    #[error("fit error: {0}")]
    Fit(String),

    /// Mismatched numerical parameters between quantities that must share them.
    #[error("protocol error: {0}")]
    Protocol(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
