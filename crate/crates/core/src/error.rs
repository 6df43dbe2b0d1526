use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate edge {pledger} -> {lender}")]
    DuplicateEdge { pledger: usize, lender: usize },

    #[error("self-loop on bank {0}")]
    SelfLoop(usize),

    #[error("bank index {index} out of range for a network of {n} banks")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("network must contain at least one bank")]
    EmptyNetwork,

    #[error("invalid degree k={k} for n={n} (need 1 <= k <= n-1)")]
    InvalidDegree { n: usize, k: usize },

    #[error("invalid probability {0} (need 0 <= p <= 1)")]
    InvalidProbability(f64),

    #[error("invalid core-periphery sizes: {0}")]
    InvalidCoreSize(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("singular system: pivot {pivot:e} in column {column}")]
    SingularSystem { column: usize, pivot: f64 },

    #[error("solution residual {residual:e} exceeds bound {bound:e}")]
    IllConditioned { residual: f64, bound: f64 },

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("hoarding equilibrium infeasible for banks {banks:?}")]
    InfeasibleHoarding { banks: Vec<usize> },

    #[error("targeted shock requires a centrality vector")]
    MissingCentrality,

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// True for failures of the numerical machinery rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SingularSystem { .. }
                | Error::IllConditioned { .. }
                | Error::NoConvergence { .. }
        )
    }
}
