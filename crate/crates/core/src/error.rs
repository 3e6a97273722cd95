use thiserror::Error;

/// Errors surfaced by the library. The CLI maps `GuardExceeded` and
/// `SearchSpaceTooLarge` to exit code 3, everything else to exit code 2.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid at this n: {0}")]
    InvalidAtThisN(String),
    #[error("arithmetic overflow: {0}")]
    ArithmeticOverflow(String),
    #[error("search space too large: {0}")]
    SearchSpaceTooLarge(String),
    #[error("guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;
