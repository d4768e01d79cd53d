use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid instance: {0}")]
    Invalid(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("search space of {dof} free values exceeds the budget of {budget} assignments")]
    BudgetExceeded { dof: usize, budget: u64 },

    #[error("{what} is {actual}, above the cap of {limit}")]
    CapExceeded {
        what: &'static str,
        limit: u64,
        actual: u64,
    },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("column {column} of sender {sender} uses message x{message}, which the sender does not hold")]
    SupportViolation {
        sender: usize,
        column: usize,
        message: usize,
    },

    #[error("instance has no coverage profile")]
    NoCoverage,
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
