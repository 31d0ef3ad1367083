use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid point configuration: {0}")]
    Configuration(String),

    #[error("invalid triangulation: {0}")]
    Triangulation(String),

    #[error("invalid symmetry: {0}")]
    Symmetry(String),

    #[error("group order exceeds bound {bound}")]
    GroupTooLarge { bound: usize },

    #[error("configuration is not a Cayley configuration")]
    NotCayley,

    #[error("missing monomial with exponent {0:?}")]
    Support(Vec<u32>),

    #[error("subdivision is not a triangulation: cell {cell:?} has {size} points")]
    NotTriangulation { cell: Vec<usize>, size: usize },

    #[error("triangulation is not unimodular: cell {cell:?} has normalized volume {volume}")]
    NotUnimodular { cell: Vec<usize>, volume: u64 },

    #[error("{0}")]
    Domain(String),

    #[error("limit exceeded: {0}")]
    Limit(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("checkpoint does not match this run: {0}")]
    CheckpointMismatch(String),

    #[error("corrupt checkpoint: {0}")]
    CorruptCheckpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
