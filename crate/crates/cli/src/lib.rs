//! Library side of the `qpd` binary: file formats and the exit-code error
//! type, exposed so integration tests drive the same parsing and
//! serialization paths as the executable.

pub mod formats;

/// Exit code for property-verification failures.
pub const VERIFY_FAILURE: u8 = 1;
/// Exit code for unreadable or malformed input files.
pub const PARSE: u8 = 2;
/// Exit code for well-formed input that violates a domain contract.
pub const DOMAIN: u8 = 3;
/// Exit code for cone-solver failures.
pub const SOLVER: u8 = 4;
/// Exit code for channels with no well-conditioned inverse.
pub const NOT_INVERTIBLE: u8 = 5;

/// Error carrying its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn new(code: u8, message: String) -> Self {
        Self { code, message }
    }

    /// Domain-level rejection of otherwise well-formed input.
    pub fn domain(err: qpd::Error) -> Self {
        Self::new(DOMAIN, err.to_string())
    }

    /// Map core errors onto the documented exit codes.
    pub fn from_core(err: qpd::Error) -> Self {
        let code = match &err {
            qpd::Error::NotInvertible { .. } => NOT_INVERTIBLE,
            qpd::Error::Solver(_) | qpd::Error::Infeasible => SOLVER,
            _ => DOMAIN,
        };
        Self::new(code, err.to_string())
    }
}
