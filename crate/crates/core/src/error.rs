use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("rotation entry {value} is not a unit mod {p}")]
    MalformedRotation { value: u32, p: u32 },

    #[error("surgery undefined: {0}")]
    SurgeryUndefined(String),

    #[error("invalid connected-sum summand: {0}")]
    InvalidSummand(String),

    #[error("step {index}: {source}")]
    Step {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("no family matches: {0}")]
    NoFamily(String),

    #[error("record fails validation: {0}")]
    InvalidRecord(String),

    #[error("normalization reached an unhandled pattern: {0}")]
    Incomplete(String),

    #[error("parse error at byte {pos}: {message}")]
    Parse { pos: usize, message: String },

    #[error("bad generator indices: {0}")]
    BadIndices(String),

    #[error("the zero vector has no nonzero orbit")]
    ZeroVector,

    #[error("state space of {states} vectors exceeds budget {budget}")]
    BudgetExceeded { states: u128, budget: u64 },

    #[error("invalid gluing scheme: {0}")]
    InvalidScheme(String),

    #[error("invalid action: {0}")]
    InvalidAction(String),

    #[error("surgery plan violates equivariance: {0}")]
    PlanViolation(String),

    #[error("unknown example {0:?}")]
    UnknownExample(String),
}

impl Error {
    pub(crate) fn at_step(self, index: usize) -> Error {
        Error::Step {
            index,
            source: Box::new(self),
        }
    }
}
