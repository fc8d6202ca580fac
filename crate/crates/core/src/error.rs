//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by matrix primitives, channel algebra, SDP solves and the
/// mitigation protocol.
#[derive(Debug, Error)]
pub enum Error {
    /// Operand shapes are incompatible with the requested operation.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A square matrix was required.
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    /// Input deviates from Hermitian symmetry beyond the given tolerance.
    #[error("matrix is not Hermitian: max |A - A^dag| entry = {deviation:.3e} (tol {tol:.3e})")]
    NotHermitian { deviation: f64, tol: f64 },

    /// The operation requires a Hermitian- and trace-preserving map.
    #[error("map is not HPTP: {0}")]
    NotHptp(String),

    /// The map has no (well-conditioned) linear inverse.
    #[error("map is not invertible: condition number {cond:.3e} exceeds limit {limit:.3e}")]
    NotInvertible { cond: f64, limit: f64 },

    /// A parameter is outside its documented range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A state, observable or decomposition fails its validity checks.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The cone solver failed to return a usable solution.
    #[error("solver failure: {0}")]
    Solver(String),

    /// The SDP was reported infeasible (the problems built here are always
    /// feasible for valid inputs, so this indicates a malformed problem).
    #[error("problem reported infeasible")]
    Infeasible,

    /// Exhaustive enumeration was requested beyond the supported size.
    #[error("enumeration limit exceeded: {0}")]
    TooLarge(String),
}

pub type Result<T> = std::result::Result<T, Error>;
