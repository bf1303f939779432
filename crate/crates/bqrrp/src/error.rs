//! Error type shared across the crate.

use std::fmt;

#[derive(Debug)]
pub enum Error {
    /// Operand shapes do not conform.
    DimensionMismatch {
        op: &'static str,
        expected: (usize, usize),
        got: (usize, usize),
    },
    /// A triangular solve hit an exactly zero diagonal entry.
    SingularDiagonal { index: usize },
    /// Cholesky found a non-positive pivot; `index` is the first failing position.
    CholeskyBreakdown { index: usize },
    /// A pivot vector is not a permutation (duplicate or out-of-range entry).
    InvalidPermutation { index: usize, value: usize, len: usize },
    /// Vector lengths do not match.
    LengthMismatch { expected: usize, got: usize },
    /// Driver configuration violates an invariant.
    Config(String),
    /// The Jacobi SVD did not reach the target tolerance.
    SvdNonConvergence { achieved: f64, sweeps: usize },
    /// Matrix file is malformed.
    BadFormat(String),
    Io(std::io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { op, expected, got } => write!(
                f,
                "{op}: dimension mismatch, expected {}x{}, got {}x{}",
                expected.0, expected.1, got.0, got.1
            ),
            Error::SingularDiagonal { index } => {
                write!(f, "singular triangular factor: zero diagonal at index {index}")
            }
            Error::CholeskyBreakdown { index } => {
                write!(f, "cholesky breakdown: non-positive pivot at index {index}")
            }
            Error::InvalidPermutation { index, value, len } => write!(
                f,
                "invalid permutation: entry {value} at index {index} (length {len})"
            ),
            Error::LengthMismatch { expected, got } => {
                write!(f, "length mismatch: expected {expected}, got {got}")
            }
            Error::Config(msg) => write!(f, "invalid configuration: {msg}"),
            Error::SvdNonConvergence { achieved, sweeps } => write!(
                f,
                "jacobi svd did not converge after {sweeps} sweeps (max cosine {achieved:.3e})"
            ),
            Error::BadFormat(msg) => write!(f, "bad matrix file: {msg}"),
            Error::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
