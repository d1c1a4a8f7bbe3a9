use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter `{name}` is not finite")]
    NonFinite { name: &'static str },

    #[error("gamma1 sets the unit scale and must be > 0 (got {0})")]
    NonPositiveUnitRate(f64),

    #[error("decay rate `{name}` must be >= 0 (got {value})")]
    NegativeRate { name: &'static str, value: f64 },

    #[error("leading cubic coefficient is zero")]
    DegenerateLeadingCoefficient,

    #[error("quadrature did not converge: estimate {estimate:.3e} with error {error:.3e} after {evaluations} evaluations")]
    NonConvergent {
        estimate: f64,
        error: f64,
        evaluations: usize,
    },

    #[error("steady state does not exist: pole {pole} has no decay")]
    NotDecaying { pole: num_complex::Complex64 },

    #[error("integrator failed at t = {time}: {reason}")]
    IntegratorDivergence { time: f64, reason: String },

    #[error("oracle not converged: a tighter tolerance changed traces by {deviation:.3e} (limit {limit:.3e})")]
    NonConvergedDiscretization { deviation: f64, limit: f64 },

    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid configuration at `{path}`: {message}")]
    ConfigInvalid { path: String, message: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::ConfigInvalid {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Process exit status for this error: 1 for configuration problems,
    /// 2 for everything raised while computing.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ConfigInvalid { .. } => 1,
            _ => 2,
        }
    }
}
