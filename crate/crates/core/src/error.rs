use thiserror::Error;

/// Rule violations and malformed inputs in the game engine and its players.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("invalid game config: {0}")]
    InvalidConfig(String),
    #[error("neighbor {d} out of range (d_count = {d_count})")]
    NeighborOutOfRange { d: usize, d_count: usize },
    #[error("vertex presented out of order: expected u{expected}, got u{got}")]
    OutOfOrder { expected: usize, got: usize },
    #[error("round {round}: chosen element {d} is not a neighbor of the presented vertex")]
    NotANeighbor { round: usize, d: usize },
    #[error("round {round}: chose {size} elements but alpha = {alpha}")]
    OverCapacity { round: usize, size: usize, alpha: usize },
    #[error("bipartite parts differ in size: |U| = {u_count}, |D| = {d_count}")]
    UnbalancedParts { u_count: usize, d_count: usize },
    #[error("transcript is inconsistent: {0}")]
    CorruptTranscript(String),
    #[error("adversary invariant violated: {0}")]
    AdversaryInvariant(String),
    #[error("scheduler '{scheduler}' broke the rules: {source}")]
    SchedulerViolation { scheduler: String, source: Box<GameError> },
    #[error("{0}")]
    Unsupported(String),
}

/// Errors from the analytic side (system of inequalities, LP closed forms).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("solution x = {x:?} is infeasible for n = {n}, alpha = {alpha}")]
    Infeasible { n: i64, alpha: i64, x: Vec<i64> },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}
