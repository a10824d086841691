use thiserror::Error;

/// Errors raised by the library.
///
/// Observation and good indices are zero-based in the variants; the
/// `Display` output numbers them from one, matching how datasets are
/// written on disk.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("price of good {} at observation {} is not strictly positive", good + 1, obs + 1)]
    NonpositivePrice { obs: usize, good: usize },

    #[error("quantity of good {} at observation {} is negative", good + 1, obs + 1)]
    NegativeQuantity { obs: usize, good: usize },

    #[error("bundle at observation {} is the zero vector", obs + 1)]
    ZeroBundle { obs: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("efficiency coefficient at observation {} must lie in (0, 1]", obs + 1)]
    InvalidEfficiency { obs: usize },

    #[error("tolerance must be strictly positive")]
    InvalidTolerance,

    #[error("bundle has {found} goods, dataset has {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{observations} observations exceed the brute-force cap of {cap}")]
    TooLarge { observations: usize, cap: usize },

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error("waste target at observation {} is unreachable on the budget line", obs + 1)]
    InfeasibleWaste { obs: usize },

    #[error("Afriat inequality ({}, {}) fails after construction", t + 1, s + 1)]
    InequalityViolated { t: usize, s: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
