use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A trace references an arm outside `[K]` or has the wrong length.
    #[error("invalid trace: {0}")]
    InvalidTrace(String),

    #[error("degenerate instance: {0}")]
    DegenerateInstance(String),

    /// Gap cap `max_i Δ_i ≤ √K` or a similar admissibility constraint failed.
    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("infeasible grid: {0}")]
    InfeasibleGrid(String),

    /// Explicit grid rejected; `index` is the 0-based position of the first bad endpoint.
    #[error("invalid grid at index {index}: {reason}")]
    InvalidGrid { index: usize, reason: String },

    /// A policy returned a plan that does not fill its batch.
    #[error("policy contract violated: {0}")]
    PolicyContract(String),

    /// Internal invariant broken (signals a planner bug, never bad input).
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
