use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("table too small: need values up to {needed}, table covers {limit}")]
    TableTooSmall { needed: u64, limit: u64 },

    #[error("{a} is not a quadratic residue modulo {p}")]
    NoSquareRoot { a: String, p: String },

    #[error("cannot lift root modulo {p}: {p} divides {a}")]
    CannotLift { a: String, p: String },

    #[error("moduli {0} and {1} are not coprime")]
    NonCoprimeModuli(String, String),

    #[error("resource limit reached: {0}")]
    ResourceLimit(String),

    #[error("eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("construction bug: {0}")]
    ConstructionBug(String),

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),
}

impl Error {
    /// Stable machine-readable name of the error class.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid-argument",
            Error::TableTooSmall { .. } => "table-too-small",
            Error::NoSquareRoot { .. } => "no-square-root",
            Error::CannotLift { .. } => "cannot-lift",
            Error::NonCoprimeModuli(..) => "non-coprime-moduli",
            Error::ResourceLimit(_) => "resource-limit",
            Error::NoConvergence { .. } => "no-convergence",
            Error::ConstructionBug(_) => "construction-bug",
            Error::PreconditionViolation(_) => "precondition-violation",
            Error::InvalidInstance(_) => "invalid-instance",
        }
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
