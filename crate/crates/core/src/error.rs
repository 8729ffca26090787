use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A physical or configuration parameter is outside its valid domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Grid cannot represent the requested physics.
    #[error("grid error: {0}")]
    Grid(String),

    /// An iterative solver failed to converge. The trace carries the
    /// last recorded figures of merit (energies for relaxation runs).
    #[error("no convergence after {iterations} iterations (last values: {})",
            trace.iter().rev().take(3).map(|v| format!("{v:.6e}")).collect::<Vec<_>>().join(", "))]
    NoConvergence { iterations: usize, trace: Vec<f64> },

    /// Propagation produced non-finite amplitudes; the message records
    /// where and when, for the diagnostic snapshot.
    #[error("numerical blow-up: {0}")]
    Numerical(String),

    /// A frame transformation was applied to data already in that frame.
    #[error("frame error: {0}")]
    Frame(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("snapshot format error: {0}")]
    Snapshot(String),
}

pub type Result<T> = std::result::Result<T, Error>;
