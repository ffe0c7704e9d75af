use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The adaptive integrator ran out of refinement budget.
    #[error(
        "quadrature did not converge: best estimate {best_re:e}{best_im:+e}i, \
         achieved error {achieved:e}, requested {requested:e}"
    )]
    Convergence {
        best_re: f64,
        best_im: f64,
        achieved: f64,
        requested: f64,
    },

    /// The steady-state amplitude was requested exactly on its real pole.
    #[error("on-pole evaluation: resonant wavenumber {kappa}")]
    Singularity { kappa: f64 },

    /// Invalid run configuration.
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
