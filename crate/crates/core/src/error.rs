use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("malformed formula: {0}")]
    Malformed(String),
    #[error("ontic action `{action}` has no successor from state {state}")]
    EmptySuccessor { action: String, state: String },
    #[error("feedbacks of epistemic action `{action}` are not exhaustive: state {witness} satisfies none")]
    NonExhaustive { action: String, witness: String },
    #[error("epistemic action `{0}` has no feedback")]
    NoFeedback(String),
    #[error("initial formula is unsatisfiable")]
    UnsatisfiableInit,
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate declaration of `{0}`")]
    Duplicate(String),
    #[error("too many variables: {0} (at most 64 supported)")]
    TooManyVariables(usize),
    #[error("limit exceeded: {0}")]
    LimitExceeded(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("program does not terminate")]
    NonTerminating,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
