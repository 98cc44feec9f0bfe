use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid seed: {0}")]
    InvalidSeed(String),

    /// The hyperplane constraint of a generic-point request is itself excluded.
    #[error("constraint hyperplane is contained in an avoided hyperplane")]
    ConstraintConflict,

    #[error("order mismatch: {0} vs {1}")]
    OrderMismatch(u32, u32),

    #[error("negative power of a series whose constant term is not a unit")]
    NonUnit,

    #[error("exponent offset {0} does not lie in the monoid P")]
    NotInMonoid(String),

    #[error("invalid wall: {0}")]
    InvalidWall(String),

    #[error("non-transversal path: {0}")]
    NonTransversalPath(String),

    #[error("completion is only implemented in rank <= 2, got rank {0}")]
    UnsupportedRank(usize),

    #[error("completion failed: {0}")]
    Completion(String),

    #[error("non-generic endpoint: {0}")]
    NonGenericEndpoint(String),

    #[error("invalid fan: {0}")]
    InvalidFan(String),

    #[error("inconsistent fan: {0}")]
    InconsistentFan(String),

    #[error("non-transversal crossing: {0}")]
    NonTransversalCrossing(String),

    #[error("index {0} is frozen")]
    FrozenIndex(usize),

    #[error("inexact Laurent division")]
    InexactDivision,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
