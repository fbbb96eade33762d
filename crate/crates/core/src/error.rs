use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different field contexts")]
    MixedContexts,
    #[error("{0} is not an odd prime below 2^32")]
    BadModulus(u64),
    #[error("{0} has no image modulo {1}")]
    BadReduction(String, u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("invalid arguments: {0}")]
    Usage(String),
    #[error("computation refused: needs {required} {unit}, budget is {budget}")]
    Budget { required: u128, budget: u128, unit: &'static str },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("construction invariant violated: {0}")]
    Construction(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}
