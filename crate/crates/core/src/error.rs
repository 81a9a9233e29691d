use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("vertex {0} is unreachable from the root")]
    Unreachable(usize),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("{0} is not a designated element")]
    NotDesignated(usize),
    #[error("{0} is not a root")]
    NotRoot(usize),
    #[error("{0} and {1} are already in the same set")]
    SameSet(usize, usize),
    #[error("instance {0} exceeds the size bound")]
    Oversize(usize),
    #[error("label {label} of instance {instance} exceeds the master list")]
    LabelOverflow { instance: usize, label: usize },
    #[error("graph is disconnected")]
    Disconnected,
}

pub type Result<T> = std::result::Result<T, Error>;
