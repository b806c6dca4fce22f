//! Error taxonomy shared by all modules.

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// The drive frequencies (plus the carrier average) admit no common
    /// fundamental within the integer bound and relative tolerance.
    #[error("incommensurable frequencies: {0}")]
    IncommensurableFrequencies(String),

    /// The harmonic cutoff cannot hold the primary coupling stencil.
    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),

    /// A linear system factorization hit a (numerically) zero pivot.
    #[error("singular system: {0}")]
    SingularSystem(String),

    /// The truncation-doubling loop hit its cap without stabilizing.
    #[error("no convergence: {0}")]
    NoConvergence(String),

    /// Adaptive integration drove the step below the useful limit.
    #[error("step underflow at t = {t}")]
    StepUnderflow { t: f64 },

    /// Peak extraction on a spectrum with no positive values.
    #[error("empty spectrum: no positive spectral density")]
    EmptySpectrum,

    /// A linear solve finished but violated its residual contract.
    #[error("residual too large: {0}")]
    ResidualTooLarge(String),

    /// A computed state broke one of its structural invariants.
    #[error("invariant violated: {0}")]
    InvariantViolated(String),

    /// Bad user input (config file, sweep spec, CLI arguments).
    #[error("invalid configuration: {0}")]
    Config(String),

    /// I/O while reading configs or emitting data files.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code the CLI maps this error to: 2 for configuration
    /// problems, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::IncommensurableFrequencies(_) | Error::Io(_) => 2,
            _ => 3,
        }
    }

    /// Wrap with scenario context, preserving the error class.
    pub fn with_context(self, what: &str) -> Error {
        match self {
            Error::IncommensurableFrequencies(m) => {
                Error::IncommensurableFrequencies(format!("{what}: {m}"))
            }
            Error::TruncationTooSmall(m) => Error::TruncationTooSmall(format!("{what}: {m}")),
            Error::SingularSystem(m) => Error::SingularSystem(format!("{what}: {m}")),
            Error::NoConvergence(m) => Error::NoConvergence(format!("{what}: {m}")),
            Error::ResidualTooLarge(m) => Error::ResidualTooLarge(format!("{what}: {m}")),
            Error::InvariantViolated(m) => Error::InvariantViolated(format!("{what}: {m}")),
            Error::Config(m) => Error::Config(format!("{what}: {m}")),
            other => other,
        }
    }
}

/// Crate-wide result alias.
pub type Result<V> = std::result::Result<V, Error>;
