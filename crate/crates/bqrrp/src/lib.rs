//! Blocked randomized QR with column pivoting.
//!
//! The driver processes b columns per iteration: a Gaussian sketch decides
//! the pivots cheaply, a tall unpivoted QR factors the permuted panel, the
//! transposed Q-factor sweeps the trailing matrix, and a deterministic
//! update refreshes the sketch without re-sampling. Everything lands in
//! the storage of the input matrix; the output format (R above the
//! diagonal, reflectors below, tau, one-based pivots) matches LAPACK's
//! pivoted QR so downstream consumers need no conversion.
//!
//! Subroutines are pluggable: the wide pivoted QRCP on the sketch (LU-based
//! or greedy reference), the panel QR (Householder or preconditioned
//! Cholesky QR with Householder reconstruction), and the column
//! permutation (sequential swaps or gather).

pub mod blas;
pub mod chol;
pub mod driver;
pub mod error;
pub mod flops;
pub mod householder;
pub mod io;
pub mod lu;
pub mod matgen;
pub mod matrix;
pub mod pivot;
pub mod qr_tall;
pub mod qrcp;
pub mod qrcp_wide;
pub mod quality;
mod rng;
pub mod sketch;
pub mod svd;

pub mod bench;

pub use driver::{
    bqrrp_factor, explicit_q, reconstruct_residual, sample_update, tri_rank, BqrrpConfig,
    BqrrpOutput, Diagnostics, IterationTimings, PanelVariant, PermVariant, WideVariant,
};
pub use error::{Error, Result};
pub use matrix::{DenseMatrix, MatMut, MatRef, UNIT_ROUNDOFF};
pub use pivot::PivotVector;
