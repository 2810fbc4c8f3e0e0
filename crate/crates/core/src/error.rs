use thiserror::Error;

/// Unified error type for the toolkit.
///
/// Budgeted procedures never guess: when an enumeration bound, a recursion
/// depth or an iteration cap is hit, the corresponding variant is returned
/// with enough context to diagnose which oracle was starved.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("unknown generator `{name}` for group {group}")]
    UnknownGenerator { name: String, group: String },

    #[error("unsupported backend for {op}: {detail}")]
    UnsupportedBackend { op: &'static str, detail: String },

    #[error("coset transversal incomplete: index exceeds bound {bound} and completeness was demanded")]
    InfiniteIndexUnbounded { bound: usize },

    #[error("graph of groups is disconnected")]
    Disconnected,

    #[error("edge map on edge {edge} is not injective: {detail}")]
    NonInjectiveEdgeMap { edge: usize, detail: String },

    #[error("substitution attachment for edge {edge} is unwitnessed or fails verification: {detail}")]
    AttachmentUnwitnessed { edge: usize, detail: String },

    #[error("oracle truncation in {context} (budget {budget})")]
    OracleTruncation { context: String, budget: usize },

    #[error("budget exhausted in {context}")]
    BudgetExhausted { context: String },

    #[error("no common fixed vertex found within radius {radius} although ellipticity is certified")]
    FixedVertexSearchExhausted { radius: usize },

    #[error("generator `{witness}` does not leave the computed axis invariant")]
    AxisNotInvariant { witness: String },

    #[error("edge inversion detected on the invariant line; subdivide the action first")]
    InversionDetected,

    #[error("pair of splittings is not hyperbolic-hyperbolic: {detail}")]
    NotHyperbolicPair { detail: String },

    #[error("cocycle condition violated at incidence pair ({a}, {b})")]
    CocycleViolation { a: usize, b: usize },

    #[error("track is not locally separating")]
    NonSeparating,

    #[error("square pruning blocked: {detail}")]
    NotAForest { detail: String },

    #[error("square stabilizers disagree up to available conjugacy checks: {detail}")]
    FiberMismatch { detail: String },

    #[error("boundary piece classification inconclusive: element order bound {bound} reached")]
    ClassificationInconclusive { bound: u64 },

    #[error("iteration cap exceeded in {context} (cap {cap})")]
    CapExceeded { context: String, cap: usize },

    #[error("fingerprint budget exceeded: presentation has {gens} generators (budget {budget})")]
    FingerprintBudget { gens: usize, budget: usize },

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn truncation(context: impl Into<String>, budget: usize) -> Self {
        Error::OracleTruncation { context: context.into(), budget }
    }
}
