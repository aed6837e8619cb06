use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("illegal move {src} -> {dst}: {reason}")]
    IllegalMove {
        src: usize,
        dst: usize,
        reason: &'static str,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The search budget ran out before a verdict was reached. This is never a "no".
    #[error("resource limit: explored {explored} states with a budget of {budget}")]
    ResourceLimit { explored: usize, budget: usize },

    #[error("bin {0} is monochrome; it has no border left to remove")]
    BinMonochrome(usize),

    #[error("configuration is not consistent with the initial configuration: {0}")]
    NotConsistent(String),

    #[error("certificate breaks at step {step} (bin {bin})")]
    InvalidCertificate { step: usize, bin: usize },

    #[error("capacity {0} is not supported here (expected 2)")]
    WrongCapacity(usize),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("instance is unsolvable")]
    Unsolvable,

    #[error("invalid trace: {0}")]
    TraceInvalid(String),

    #[error("line {line}: parse error: {msg}")]
    Parse { line: usize, msg: String },

    #[error("line {line}: validation error: {msg}")]
    Validation { line: usize, msg: String },
}
