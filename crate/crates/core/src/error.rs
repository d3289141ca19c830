use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, got {got} ({what})")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("support set is empty: no maximal intersection has a finite right endpoint")]
    EmptySupport,

    #[error("E-step undefined for subject {subject}: bracketing hazard mass is zero")]
    ZeroBracketMass { subject: usize },

    #[error("M-step denominator is zero at support point {index}")]
    ZeroRiskSet { index: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("degenerate null fit: every score is zero")]
    DegenerateNullFit,

    #[error("EM iteration {iteration}: {source}")]
    Iteration {
        iteration: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at_iteration(self, iteration: usize) -> Self {
        Error::Iteration {
            iteration,
            source: Box::new(self),
        }
    }

    /// Strips iteration context to expose the underlying failure.
    pub fn root(&self) -> &Error {
        match self {
            Error::Iteration { source, .. } => source.root(),
            other => other,
        }
    }
}
