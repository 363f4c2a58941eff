use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be a positive integer")]
    ZeroModulus,

    #[error("{what} = {value} exceeds the supported bound {bound}")]
    BoundExceeded {
        what: &'static str,
        value: u64,
        bound: u64,
    },

    #[error("{a} is not coprime to {n}")]
    NotCoprime { a: u64, n: u64 },

    #[error("{0} is not squarefree")]
    NotSquarefree(u64),

    #[error("prime {q} divides {h} but not lambda({n})")]
    OutsideLambdaSupport { h: u64, q: u64, n: u64 },

    #[error("sweep needs {requested} order evaluations, budget is {budget}")]
    BudgetExceeded { requested: u128, budget: u128 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An internal consistency check failed (for example, a character sum that
    /// must be rational was not invariant under the Galois action).
    #[error("consistency check failed: {0}")]
    Inconsistent(String),
}

impl Error {
    /// Stable machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroModulus => "zero_modulus",
            Error::BoundExceeded { .. } => "bound_exceeded",
            Error::NotCoprime { .. } => "not_coprime",
            Error::NotSquarefree(_) => "not_squarefree",
            Error::OutsideLambdaSupport { .. } => "outside_lambda_support",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Inconsistent(_) => "inconsistent",
        }
    }
}

pub(crate) fn check_bound(what: &'static str, value: u64, bound: u64) -> Result<()> {
    if value > bound {
        Err(Error::BoundExceeded { what, value, bound })
    } else {
        Ok(())
    }
}
