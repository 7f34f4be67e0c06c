use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} appears in blocks {first} and {second}")]
    OverlappingBlocks {
        vertex: usize,
        first: usize,
        second: usize,
    },
    #[error("vertex {0} is not covered by any block")]
    UncoveredVertex(usize),
    #[error("block {0} is empty")]
    EmptyBlock(usize),

    #[error("vertices {first} and {second} lie in the same block {block}")]
    SameBlock {
        first: usize,
        second: usize,
        block: usize,
    },
    #[error("vertex {vertex} is adjacent to {neighbor}")]
    NotIndependent { vertex: usize, neighbor: usize },
    #[error("{0} is not a full independent transversal")]
    NotAnIt(String),
    #[error("path elements at index {0} and the next are not adjacent")]
    NotAdjacent(usize),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("enumeration estimate {estimate} exceeds cap {cap}")]
    CapExceeded { estimate: u128, cap: u128 },

    #[error("vertex set is not a K_{{d,d}} component of the graph")]
    NotAComponent,
    #[error("side A is not contained in block {0}")]
    SideNotInBlock(usize),

    #[error("extremal certificate failed at step {step}: {reason}")]
    CertificateFailed { step: u8, reason: String },
    #[error("internal invariant violated: {0}")]
    InvariantViolated(String),

    #[error("particle {0} has a conflict with itself")]
    SelfBlockConflict(usize),
    #[error("spin {spin} out of range (t = {t})")]
    SpinOutOfRange { spin: usize, t: usize },
    #[error("no initial admissible state: {0}")]
    NoInitialState(String),
    #[error("infeasible generator parameters: {0}")]
    InfeasibleParameters(String),

    #[error("schema error: {0}")]
    Schema(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::InvariantViolated(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::PreconditionViolated(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Process exit code: 1 bad input, 2 precondition, 3 internal failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::PreconditionViolated(_)
            | Error::CapExceeded { .. }
            | Error::NoInitialState(_) => 2,
            Error::CertificateFailed { .. }
            | Error::InvariantViolated(_)
            | Error::NotAdjacent(_)
            | Error::NotAComponent
            | Error::SideNotInBlock(_) => 3,
            _ => 1,
        }
    }
}
