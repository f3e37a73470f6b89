use crate::Nat;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while computing or verifying z-values.
///
/// Several variants are counterexample signals rather than operational
/// failures: `ScanBoundViolation`, `BackendMismatch`, `FormMismatch` and
/// `IterationCapExceeded` each report data that would falsify a law the
/// implementation relies on, and are surfaced rather than masked.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A configured effort budget or scan limit was exceeded. Never a silent
    /// fallback: the caller learns exactly which resource ran out.
    #[error("resource exceeded: {what} (limit {limit})")]
    ResourceExceeded { what: String, limit: String },

    /// The brute-force scan found no Fibonacci multiple of `n` within `2n`
    /// steps. That bound holds for every positive integer, so this is a
    /// counterexample report, not a crash.
    #[error("no Fibonacci multiple of {n} within 2n scan steps; z(n) <= 2n violated")]
    ScanBoundViolation { n: Nat },

    /// Oracle and fast backends disagreed. Carries both values; this is a
    /// test-failure signal, not a recoverable condition.
    #[error("backend mismatch for n={n}: oracle={oracle}, fast={fast}")]
    BackendMismatch { n: Nat, oracle: Nat, fast: Nat },

    /// Cross-checked fixed-point test: `z(n) = n` disagreed with the
    /// `5^k` / `12·5^k` form classifier.
    #[error("fixed-point form mismatch for n={n}: z(n)=n is {by_z}, form classifier says {by_form}")]
    FormMismatch { n: Nat, by_z: bool, by_form: bool },

    /// A trajectory failed to reach a fixed point within the iteration cap.
    /// Carries the partial chain as counterexample-candidate evidence.
    #[error("no fixed point within {cap} iterations starting from {start} (partial chain has {} entries)", partial.len())]
    IterationCapExceeded {
        start: Nat,
        cap: u32,
        partial: Vec<Nat>,
    },

    /// No integer with the requested fixed point order inside the search range.
    #[error("no n <= {search_limit} with fixed point order {k}")]
    NotFound { k: u32, search_limit: Nat },

    /// Precondition violation: bad argument for the operation.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A persisted cache file did not parse.
    #[error("cache file line {line}: {message}")]
    CacheParse { line: usize, message: String },

    /// A persisted cache entry parsed but failed validation.
    #[error("cache entry p={p} e={e} z={z} rejected: {reason}")]
    CacheEntry { p: Nat, e: u32, z: Nat, reason: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// A short machine-parsable tag for the diagnostic stream.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ResourceExceeded { .. } => "resource-exceeded",
            Error::ScanBoundViolation { .. } => "scan-bound-violation",
            Error::BackendMismatch { .. } => "backend-mismatch",
            Error::FormMismatch { .. } => "form-mismatch",
            Error::IterationCapExceeded { .. } => "iteration-cap-exceeded",
            Error::NotFound { .. } => "not-found",
            Error::InvalidInput(_) => "invalid-input",
            Error::CacheParse { .. } => "cache-parse",
            Error::CacheEntry { .. } => "cache-entry",
            Error::Io(_) => "io",
        }
    }
}
