use thiserror::Error;

/// Errors raised by the instance model and the shared predicates.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoreError {
    #[error("capacity list has {got} entries, expected {expected}")]
    CapacityLength { expected: usize, got: usize },
    #[error("capacity < 1 for agent {0}")]
    ZeroCapacity(String),
    #[error("duplicate agent {0}")]
    DuplicateAgent(String),
    #[error("unknown agent index {0}")]
    UnknownAgentIndex(usize),
    #[error("self-loop at agent {0}")]
    SelfLoop(String),
    #[error("duplicate edge {0} {1}")]
    DuplicateEdge(String, String),
    #[error("value table has {got} entries, expected {expected}")]
    ValueLength { expected: usize, got: usize },
    #[error("value on edge {0} is negative or not finite")]
    InvalidValue(String),
    #[error("order table has {got} entries, expected {expected}")]
    OrderLength { expected: usize, got: usize },
    #[error("order of agent {0} is not a permutation of its neighbors")]
    NotAPermutation(String),
    #[error("agent {0} has no preference order")]
    MissingOrder(String),
    #[error("rank out of range: {rank} for agent {agent} of degree {degree}")]
    RankOutOfRange { agent: String, rank: u32, degree: usize },
    #[error("duplicate rank {rank} at agent {agent} (already used by {edge})")]
    DuplicateRank { agent: String, rank: u32, edge: String },
    #[error("unknown edge id {0}")]
    UnknownEdge(usize),
    #[error("not a q-matching: capacity exceeded at agent {0}")]
    NotQMatching(String),
    #[error("preferences describe a different graph")]
    GraphMismatch,
}
