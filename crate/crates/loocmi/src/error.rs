use thiserror::Error;

/// Error type shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    /// An exact enumeration would exceed the configured term budget.
    #[error("budget exceeded: operation requires {required} terms, budget is {budget}")]
    Budget { required: u128, budget: u64 },

    /// The learner cannot expose the exact law this operation needs.
    #[error("learner capability: {0}")]
    Capability(String),

    #[error("non-realizable input: {0}")]
    NonRealizable(String),

    /// No bounded-out-degree orientation exists for the requested degree cap.
    #[error("orientation infeasible: {0}")]
    Infeasible(String),

    /// Encoder margin too narrow for the payload it must carry.
    #[error("capacity: {0}")]
    Capacity(String),

    /// Config validation reports every problem found, not just the first.
    #[error("invalid config: {}", .0.join("; "))]
    Config(Vec<String>),
}

pub type Result<T> = std::result::Result<T, Error>;
