use thiserror::Error;

/// Errors produced by word arithmetic, ball construction, matchings, and I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// A Coxeter matrix failed validation (shape, symmetry, diagonal, bond
    /// range, or generator names).
    #[error("invalid Coxeter matrix: {0}")]
    InvalidMatrix(String),

    /// A word referenced a generator that does not exist in the ambient matrix.
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    /// Exact reduction would have to explore more braid-closure nodes than the
    /// configured budget allows.
    #[error("word too long for exact reduction at this budget ({limit} nodes)")]
    BudgetExceeded { limit: u64 },

    /// An exhaustive isomorphism search ran past its backtracking budget.
    #[error("isomorphism search exceeded its budget ({limit} backtrack nodes)")]
    SearchBudget { limit: u64 },

    /// The query needs elements beyond the ball bound.
    #[error("ball too small: {0}")]
    BallTooSmall(String),

    /// An element was expected inside the ball but is not there.
    #[error("element `{0}` is outside the ball")]
    OutOfBall(String),

    /// Interval endpoints are incomparable.
    #[error("empty interval: `{low}` is not below `{high}`")]
    EmptyInterval { low: String, high: String },

    /// Matching extension found two distinct upward candidates sharing one
    /// coatom set. This contradicts a structural fact about coatom sets and is
    /// treated as an internal bug signal, never silently resolved.
    #[error("ambiguous candidate above `{element}`: {candidates:?} share its coatom set")]
    AmbiguousCandidate {
        element: String,
        candidates: Vec<String>,
    },

    /// A Z-set was requested at an element with an unmatched coatom.
    #[error("unresolved coatom `{0}`")]
    UnresolvedCoatom(String),

    /// A rank-3 configuration fits none of the catalogued scenarios.
    #[error("scenario not covered: {0}")]
    ScenarioNotCovered(String),

    /// Malformed user input (words, flags, config or corpus files).
    #[error("{0}")]
    Input(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
