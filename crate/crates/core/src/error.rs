use thiserror::Error;

/// Errors surfaced by the engine.
///
/// Precondition violations carry enough context to identify the offending
/// input; they are never silently swallowed into wrong answers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("size mismatch: |mu| = {0} but |nu| = {1}")]
    SizeMismatch(usize, usize),

    #[error("series constant term must be {expected}, found {found}")]
    BadConstantTerm { expected: String, found: String },

    #[error("group element shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("energy cutoff {cutoff} insufficient: operator product needs {needed}")]
    CutoffInsufficient { cutoff: i64, needed: i64 },

    #[error("congruence violated: argument {arg} must be {residue} mod {modulus}")]
    CongruenceViolation { arg: i64, residue: i64, modulus: i64 },

    #[error("monodromy tuple does not sum to zero in R")]
    UnbalancedMonodromy,

    #[error("unstable moduli requested: {0}; use the closed-form conventions instead")]
    Unstable(String),

    #[error("brute-force budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("cache i/o: {0}")]
    CacheIo(String),
}
