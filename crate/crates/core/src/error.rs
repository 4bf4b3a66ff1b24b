use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a hypergraph on {n} vertices")]
    VertexOutOfRange { vertex: u32, n: u32 },

    #[error("tuple {0:?} repeats a vertex")]
    NotASet(Vec<u32>),

    #[error("subset {0:?} is not strictly increasing")]
    InvalidSubset(Vec<u32>),

    #[error("invalid arguments: {0}")]
    InvalidArguments(String),

    #[error("hypergraph has no edges")]
    NoEdges,

    #[error("density {num}/{den} exceeds 1")]
    InvalidDensity { num: String, den: String },

    #[error("no complete {k}-partite witness with parts of size {t} found")]
    WitnessNotFound { k: usize, t: u64 },

    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),

    #[error("instance with {n} vertices exceeds the brute-force cap of {cap} for k = {k}")]
    InstanceTooLarge { n: u32, k: usize, cap: u32 },

    #[error("binom({n}, {k}) does not fit in a 64-bit edge index")]
    IndexOverflow { n: u32, k: usize },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArguments(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::InternalInvariantViolation(msg.into())
    }
}
