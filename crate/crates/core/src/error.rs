use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed text input; `line` is 1-based.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid machine: {0}")]
    InvalidMachine(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    /// Pr(e) = 0, so Pr(h | e) is undefined.
    #[error("conditional probability undefined: evidence has probability 0")]
    UndefinedConditional,

    #[error("resource guard exceeded: {0}")]
    ResourceLimit(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("unknown value `{value}` for variable `{variable}`")]
    UnknownValue { variable: String, value: String },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
