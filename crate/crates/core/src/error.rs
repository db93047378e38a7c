use thiserror::Error;

/// Errors shared across the crate. Budget-limited searches do not use this
/// type: running out of budget is a distinct non-answer reported through
/// [`crate::search::SearchResult`], never an error.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {0} out of range for graph on {1} vertices")]
    VertexOutOfRange(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("{0}")]
    InvalidInput(String),
    #[error("sequence of length {got} is too short, need at least {need}")]
    SequenceTooShort { got: usize, need: usize },
    #[error("graph is bipartite, no odd cycle exists")]
    Bipartite,
    #[error("no path between the given sets")]
    NoPath,
    #[error("wing growth stalled at size {reached} of {target}")]
    GrowthStall { reached: usize, target: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("instance too large for exhaustive check: {0}")]
    TooLarge(String),
    #[error("target window unreachable: {0}")]
    WindowUnreachable(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
