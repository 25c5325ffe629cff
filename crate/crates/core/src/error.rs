use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid graph configuration: {0}")]
    InvalidConfig(String),

    #[error("vertex ({set}, {index}) is outside a graph with {sets} sets of {set_size}")]
    VertexOutOfRange {
        set: usize,
        index: usize,
        sets: usize,
        set_size: usize,
    },

    #[error("vertices in the same set are not adjacent")]
    NotAdjacent,

    #[error("no marked vertices")]
    NoMarkedVertices,

    /// A value outside the domain of a closed-form expression.
    #[error("{0}")]
    Domain(String),

    #[error("operands belong to different invariant subspaces")]
    CaseMismatch,

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("state space of dimension {dimension} exceeds the limit of {limit}")]
    TooLarge { dimension: u64, limit: u64 },

    #[error("schedule has {alphas} alphas and {betas} betas (need t and t+1)")]
    MalformedSchedule { alphas: usize, betas: usize },

    #[error("circuit compilation needs M-1 and N to be powers of two (M={sets}, N={set_size})")]
    NotPowerOfTwo { sets: usize, set_size: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
