use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("number of colors k = {0} is not supported (need k >= 3)")]
    UnsupportedK(u32),

    #[error("edge state {state} is outside 1..={max}")]
    InvalidEdgeState { state: u32, max: u32 },

    #[error("row index {index} out of range for {len} configurations")]
    IndexOutOfRange { index: u64, len: u64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension {dim} exceeds the dense budget of {budget}")]
    BudgetExceeded { dim: u64, budget: u64 },

    #[error("search space of {what} exceeds budget ({size} > {budget})")]
    SearchBudgetExceeded { what: &'static str, size: u128, budget: u128 },

    #[error("power iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: u64, residual: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("integer overflow in exact arithmetic")]
    Overflow,

    #[error("edge {edge} violates e1 + e2 = 0 mod k: states {first} and {second}")]
    ConjugateViolation { edge: String, first: u32, second: u32 },

    #[error("vertex {vertex} violates the zero-sum rule: states {states:?}")]
    VertexViolation { vertex: String, states: Vec<u32> },

    #[error("edge {edge} closes a cycle with nonzero net state; no consistent coloring exists")]
    Holonomy { edge: String },

    #[error("least-squares design matrix is rank deficient ({0})")]
    RankDeficient(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_k(k: u32) -> Result<()> {
    if k < 3 {
        Err(Error::UnsupportedK(k))
    } else {
        Ok(())
    }
}
