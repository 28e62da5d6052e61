use std::path::PathBuf;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Parameters outside the scattering regime (e.g. E <= m) or other
    /// numeric-domain violations discovered while solving.
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid construction arguments (non-positive mass, bad ranges, ...).
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Elimination hit a pivot below the singularity threshold.
    #[error("singular matching system: pivot magnitude {pivot:.3e} below threshold {threshold:.3e}")]
    SingularMatrix { pivot: f64, threshold: f64 },

    /// Evanescent exponentials would overflow double precision.
    #[error("range overflow: {0}")]
    RangeOverflow(String),

    /// The fixed-step integrator's local truncation estimate exceeded its bound.
    #[error("integration step too large: truncation estimate {estimate:.3e} exceeds {limit:.3e}")]
    StepTooLarge { estimate: f64, limit: f64 },

    /// Fluctuation counting needs a minimum number of samples.
    #[error("too few sweep points: got {got}, need at least {need}")]
    TooFewPoints { got: usize, need: usize },

    /// Every point of a sweep failed to solve.
    #[error("sweep failed at every grid point; first failure: {first}")]
    AllPointsFailed { first: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 1 for argument/usage/io problems,
    /// 2 for numeric-domain failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_)
            | Error::SingularMatrix { .. }
            | Error::RangeOverflow(_)
            | Error::StepTooLarge { .. }
            | Error::AllPointsFailed { .. } => 2,
            Error::InvalidParams(_)
            | Error::TooFewPoints { .. }
            | Error::Io { .. }
            | Error::Json(_) => 1,
        }
    }
}
