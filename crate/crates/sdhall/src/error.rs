use thiserror::Error;

/// Crate-wide error type.  Every failure is a hard error: suites either
/// verify an identity exactly or abort with a reason.
#[derive(Debug, Error)]
pub enum Error {
    /// Two coefficients from different `Q(sqrt(q))` contexts were combined.
    #[error("coefficient context mismatch: q={0} vs q={1}")]
    ContextMismatch(u32, u32),

    /// An enumeration would exceed the configured budget.
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// A computation left the enumerated truncation of the algebra.
    #[error("truncation exceeded: {0}")]
    Truncation(String),

    /// Bad user-supplied configuration (CLI flags, quiver files, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// Internal invariant violation; always a bug.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
