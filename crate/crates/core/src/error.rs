use thiserror::Error;

/// Errors shared by state construction, file parsing, criterion evaluation,
/// and threshold search.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its documented range.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// A state or basis file does not match the documented JSON schema.
    #[error("malformed input: {0}")]
    Parse(String),

    /// An operator entry breaks Hermitian structure.
    #[error("non-Hermitian input: {0}")]
    NonHermitian(String),

    #[error("trace must be 1 within {tol:e}, got {trace}")]
    Trace { trace: f64, tol: f64 },

    #[error("norm must be 1 within {tol:e}, got {norm}")]
    Norm { norm: f64, tol: f64 },

    #[error("dimension mismatch: expected {expected} qubits, got {actual}")]
    DimensionMismatch { expected: u32, actual: u32 },

    #[error("duplicate basis state {0}")]
    DuplicateState(String),

    /// A noise family whose criterion value decreases somewhere on the grid;
    /// bisection refuses to run on it.
    #[error(
        "criterion value is not nondecreasing in a: value({a_lo}) = {v_lo} \
         exceeds value({a_hi}) = {v_hi}"
    )]
    NonMonotone { a_lo: f64, v_lo: f64, a_hi: f64, v_hi: f64 },

    /// Closed-form threshold denominator is not positive: the criterion cannot
    /// detect this family at any noise level.
    #[error("criterion cannot detect in this regime: {0}")]
    Undetectable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
