use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A function was evaluated at (or numerically at) one of its poles.
    #[error("{function}: pole at {at}")]
    Pole { function: &'static str, at: f64 },

    /// An argument lies outside the domain where the formula holds.
    #[error("{function}: {reason} (got {value})")]
    Domain {
        function: &'static str,
        reason: &'static str,
        value: f64,
    },

    #[error("{what}: series did not converge after {terms} terms (tail estimate {tail:e})")]
    NonConvergence {
        what: &'static str,
        terms: usize,
        tail: f64,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate {0}")]
    Degenerate(&'static str),

    #[error("n = {n} exceeds the dense cap of {cap}; use the chebyshev method")]
    DenseCap { n: usize, cap: usize },

    /// The scalar optimiser found no interior minimum. The scan is kept so
    /// callers can report it rather than guess.
    #[error("{what}: {reason}")]
    Optimization {
        what: &'static str,
        reason: String,
        scan: Vec<(f64, f64)>,
    },

    #[error("chebyshev propagation left the estimated spectral bounds (norm drift {drift:e})")]
    SpectralBound { drift: f64 },

    #[error("missing input: {0}")]
    MissingInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Whether the error is numerical (as opposed to I/O or bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Pole { .. }
                | Error::Domain { .. }
                | Error::NonConvergence { .. }
                | Error::Degenerate(_)
                | Error::Optimization { .. }
                | Error::SpectralBound { .. }
        )
    }
}

pub(crate) fn domain(function: &'static str, reason: &'static str, value: f64) -> Error {
    Error::Domain {
        function,
        reason,
        value,
    }
}
