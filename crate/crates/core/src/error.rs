//! Error type shared by all modules.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of the truncated-operator laboratory.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// A precondition on an argument value was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Two values that must share dimension/cutoff/space do not.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// An index or degree exceeds the truncation data.
    #[error("out of range: {0}")]
    OutOfRange(String),

    /// A point or parameter lies outside the domain of validity
    /// (e.g. ‖a‖ ≥ 1, or a denominator condition fails).
    #[error("out of domain: {0}")]
    OutOfDomain(String),

    /// The affine denominator is identically singular (d = 0).
    #[error("singular denominator: d = 0")]
    SingularDenominator,

    /// The map denominator vanishes at the requested evaluation point.
    #[error("singular point: denominator vanishes at the evaluation point")]
    SingularPoint,

    /// A polar decomposition was requested for a numerically singular
    /// truncation.
    #[error("not invertible: smallest singular value {sigma_min:.3e} <= tolerance {tol:.3e}")]
    NotInvertible { sigma_min: f64, tol: f64 },

    /// A linear symbol with operator norm above 1 cannot induce a self-map.
    #[error("not a self-map: {0}")]
    NotASelfMap(String),

    /// The real-parameter constructor was called with a nonreal parameter.
    #[error("wrong variant: {0}")]
    WrongVariant(String),

    /// Two operators do not live over the same space.
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),
}
