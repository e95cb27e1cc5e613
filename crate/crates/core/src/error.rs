use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("entry ({row}, {col}) is not an integer")]
    NonIntegral { row: usize, col: usize },

    #[error("target vector is not in the span of the basis")]
    Unsolvable,

    #[error("basis is linearly dependent (rank {rank} < {expected})")]
    RankDeficient { rank: usize, expected: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("even lattice required")]
    OddLattice,

    #[error("size budget exceeded: dimension {dim} > budget {budget}")]
    Budget { dim: usize, budget: usize },

    /// An identity that must hold by construction failed; always a bug.
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}
