//! C ABI over the bqrrp driver: opaque factorization handles, integer
//! status codes, and caller-owned output buffers. The matching header is
//! generated into `include/bqrrp.h` at build time.

use bqrrp::driver::{
    bqrrp_factor, explicit_q, reconstruct_residual, BqrrpConfig, BqrrpOutput, PanelVariant,
    PermVariant, WideVariant,
};
use bqrrp::{DenseMatrix, Error};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BqrrpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    SingularMatrix = 4,
    CholeskyBreakdown = 5,
    ConfigError = 6,
    NumericalError = 7,
    InternalError = 8,
}

/// Panel QR selection for `bqrrp_config`.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BqrrpPanel {
    Householder = 0,
    CholeskyQr = 1,
}

/// Wide QRCP selection for `bqrrp_config`.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BqrrpWide {
    LuQr = 0,
    Reference = 1,
}

/// Column permutation selection for `bqrrp_config`.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BqrrpPerm {
    Sequential = 0,
    Gather = 1,
}

/// Driver configuration. Obtain defaults from `bqrrp_config_default` and
/// override fields as needed.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct BqrrpCConfig {
    pub block: u64,
    pub gamma: f64,
    pub panel: BqrrpPanel,
    pub wide: BqrrpWide,
    pub perm: BqrrpPerm,
    pub rank_tol_factor: f64,
    pub seed: u64,
}

/// Opaque factorization result; free with `bqrrp_free`.
pub struct BqrrpFactorization {
    out: BqrrpOutput,
}

fn status_of(e: &Error) -> BqrrpStatus {
    match e {
        Error::DimensionMismatch { .. } | Error::LengthMismatch { .. } => {
            BqrrpStatus::DimensionMismatch
        }
        Error::SingularDiagonal { .. } => BqrrpStatus::SingularMatrix,
        Error::CholeskyBreakdown { .. } => BqrrpStatus::CholeskyBreakdown,
        Error::InvalidPermutation { .. } => BqrrpStatus::InvalidArgument,
        Error::Config(_) => BqrrpStatus::ConfigError,
        Error::SvdNonConvergence { .. } => BqrrpStatus::NumericalError,
        Error::BadFormat(_) | Error::Io(_) => BqrrpStatus::InvalidArgument,
    }
}

/// Default configuration: block 64, gamma 1, Householder panel, LU-based
/// wide QRCP, sequential permutation, seed 0.
#[no_mangle]
pub extern "C" fn bqrrp_config_default() -> BqrrpCConfig {
    BqrrpCConfig {
        block: 64,
        gamma: 1.0,
        panel: BqrrpPanel::Householder,
        wide: BqrrpWide::LuQr,
        perm: BqrrpPerm::Sequential,
        rank_tol_factor: 1.0,
        seed: 0,
    }
}

fn to_rust_config(c: &BqrrpCConfig) -> BqrrpConfig {
    BqrrpConfig {
        block: c.block as usize,
        gamma: c.gamma,
        panel_variant: match c.panel {
            BqrrpPanel::Householder => PanelVariant::Hqr,
            BqrrpPanel::CholeskyQr => PanelVariant::Cqr,
        },
        wide_variant: match c.wide {
            BqrrpWide::LuQr => WideVariant::Luqr,
            BqrrpWide::Reference => WideVariant::Ref,
        },
        perm_variant: match c.perm {
            BqrrpPerm::Sequential => PermVariant::Sequential,
            BqrrpPerm::Gather => PermVariant::Gather,
        },
        rank_tol_factor: c.rank_tol_factor,
        seed: c.seed,
    }
}

/// Factors an m-by-n column-major matrix. On success `*out_handle` owns
/// the result.
///
/// # Safety
/// `data` must point to at least `rows * cols` doubles; `out_handle` must
/// be a valid pointer. The input buffer is copied, not retained.
#[no_mangle]
pub unsafe extern "C" fn bqrrp_factor_dense(
    data: *const f64,
    rows: u64,
    cols: u64,
    config: *const BqrrpCConfig,
    out_handle: *mut *mut BqrrpFactorization,
) -> BqrrpStatus {
    if data.is_null() || out_handle.is_null() {
        return BqrrpStatus::NullPointer;
    }
    let cfg = if config.is_null() { bqrrp_config_default() } else { *config };
    let len = match (rows as usize).checked_mul(cols as usize) {
        Some(l) => l,
        None => return BqrrpStatus::InvalidArgument,
    };
    let slice = std::slice::from_raw_parts(data, len);
    let result = catch_unwind(AssertUnwindSafe(|| {
        let m = DenseMatrix::from_col_major(rows as usize, cols as usize, slice.to_vec())?;
        bqrrp_factor(m, &to_rust_config(&cfg))
    }));
    match result {
        Ok(Ok(out)) => {
            *out_handle = Box::into_raw(Box::new(BqrrpFactorization { out }));
            BqrrpStatus::Ok
        }
        Ok(Err(e)) => status_of(&e),
        Err(_) => BqrrpStatus::InternalError,
    }
}

/// Releases a factorization handle. A null handle is a no-op.
///
/// # Safety
/// `handle` must come from `bqrrp_factor_dense` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn bqrrp_free(handle: *mut BqrrpFactorization) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Inferred numerical rank; 0 for a null handle.
///
/// # Safety
/// `handle` must be live or null.
#[no_mangle]
pub unsafe extern "C" fn bqrrp_rank(handle: *const BqrrpFactorization) -> u64 {
    if handle.is_null() {
        return 0;
    }
    (*handle).out.rank as u64
}

/// Rows of the factored matrix; 0 for a null handle.
///
/// # Safety
/// `handle` must be live or null.
#[no_mangle]
pub unsafe extern "C" fn bqrrp_rows(handle: *const BqrrpFactorization) -> u64 {
    if handle.is_null() {
        return 0;
    }
    (*handle).out.factored.rows() as u64
}

/// Columns of the factored matrix; 0 for a null handle.
///
/// # Safety
/// `handle` must be live or null.
#[no_mangle]
pub unsafe extern "C" fn bqrrp_cols(handle: *const BqrrpFactorization) -> u64 {
    if handle.is_null() {
        return 0;
    }
    (*handle).out.factored.cols() as u64
}

/// Copies the in-place factored storage (R above the diagonal, reflector
/// tails below) into a caller buffer of rows*cols doubles, column-major.
///
/// # Safety
/// `out` must hold rows*cols doubles.
#[no_mangle]
pub unsafe extern "C" fn bqrrp_factored_matrix(
    handle: *const BqrrpFactorization,
    out: *mut f64,
) -> BqrrpStatus {
    if handle.is_null() || out.is_null() {
        return BqrrpStatus::NullPointer;
    }
    let f = &(*handle).out.factored;
    std::ptr::copy_nonoverlapping(f.as_slice().as_ptr(), out, f.as_slice().len());
    BqrrpStatus::Ok
}

/// Copies the explicit upper-trapezoid R (rank-by-cols, column-major,
/// zeros below the diagonal) into a caller buffer.
///
/// # Safety
/// `out` must hold rank*cols doubles.
#[no_mangle]
pub unsafe extern "C" fn bqrrp_r_factor(
    handle: *const BqrrpFactorization,
    out: *mut f64,
) -> BqrrpStatus {
    if handle.is_null() || out.is_null() {
        return BqrrpStatus::NullPointer;
    }
    let r = (*handle).out.r_factor();
    std::ptr::copy_nonoverlapping(r.as_slice().as_ptr(), out, r.as_slice().len());
    BqrrpStatus::Ok
}

/// Copies the reflector scalar factors (length min(rows, cols)).
///
/// # Safety
/// `out` must hold min(rows, cols) doubles.
#[no_mangle]
pub unsafe extern "C" fn bqrrp_tau(
    handle: *const BqrrpFactorization,
    out: *mut f64,
) -> BqrrpStatus {
    if handle.is_null() || out.is_null() {
        return BqrrpStatus::NullPointer;
    }
    let tau = &(*handle).out.tau;
    std::ptr::copy_nonoverlapping(tau.as_ptr(), out, tau.len());
    BqrrpStatus::Ok
}

/// Copies the one-based pivot vector (length cols).
///
/// # Safety
/// `out` must hold cols 64-bit integers.
#[no_mangle]
pub unsafe extern "C" fn bqrrp_pivots(
    handle: *const BqrrpFactorization,
    out: *mut i64,
) -> BqrrpStatus {
    if handle.is_null() || out.is_null() {
        return BqrrpStatus::NullPointer;
    }
    for (i, &v) in (*handle).out.pivots.as_one_based().iter().enumerate() {
        *out.add(i) = v as i64;
    }
    BqrrpStatus::Ok
}

/// Builds the leading `ncols` columns of the explicit orthonormal factor
/// into a caller buffer of rows*ncols doubles, column-major.
///
/// # Safety
/// `out` must hold rows*ncols doubles.
#[no_mangle]
pub unsafe extern "C" fn bqrrp_explicit_q(
    handle: *const BqrrpFactorization,
    ncols: u64,
    out: *mut f64,
) -> BqrrpStatus {
    if handle.is_null() || out.is_null() {
        return BqrrpStatus::NullPointer;
    }
    let result = catch_unwind(AssertUnwindSafe(|| explicit_q(&(*handle).out, ncols as usize)));
    match result {
        Ok(Ok(q)) => {
            std::ptr::copy_nonoverlapping(q.as_slice().as_ptr(), out, q.as_slice().len());
            BqrrpStatus::Ok
        }
        Ok(Err(e)) => status_of(&e),
        Err(_) => BqrrpStatus::InternalError,
    }
}

/// Relative reconstruction residual of the factorization against the
/// original column-major matrix it was computed from.
///
/// # Safety
/// `original` must hold rows*cols doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bqrrp_residual(
    handle: *const BqrrpFactorization,
    original: *const f64,
    out: *mut f64,
) -> BqrrpStatus {
    if handle.is_null() || original.is_null() || out.is_null() {
        return BqrrpStatus::NullPointer;
    }
    let h = &(*handle).out;
    let rows = h.factored.rows();
    let cols = h.factored.cols();
    let slice = std::slice::from_raw_parts(original, rows * cols);
    let result = catch_unwind(AssertUnwindSafe(|| {
        let m = DenseMatrix::from_col_major(rows, cols, slice.to_vec())?;
        reconstruct_residual(&m, h)
    }));
    match result {
        Ok(Ok(res)) => {
            *out = res;
            BqrrpStatus::Ok
        }
        Ok(Err(e)) => status_of(&e),
        Err(_) => BqrrpStatus::InternalError,
    }
}

/// Static descriptive string for a status code.
#[no_mangle]
pub extern "C" fn bqrrp_status_message(status: BqrrpStatus) -> *const std::os::raw::c_char {
    let msg: &'static [u8] = match status {
        BqrrpStatus::Ok => b"ok\0",
        BqrrpStatus::NullPointer => b"null pointer argument\0",
        BqrrpStatus::InvalidArgument => b"invalid argument\0",
        BqrrpStatus::DimensionMismatch => b"dimension mismatch\0",
        BqrrpStatus::SingularMatrix => b"singular triangular factor\0",
        BqrrpStatus::CholeskyBreakdown => b"cholesky breakdown\0",
        BqrrpStatus::ConfigError => b"invalid configuration\0",
        BqrrpStatus::NumericalError => b"numerical diagnostic\0",
        BqrrpStatus::InternalError => b"internal error\0",
    };
    msg.as_ptr() as *const std::os::raw::c_char
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_colmajor(rows: usize, cols: usize, seed: u64) -> Vec<f64> {
        bqrrp::matgen::gen_gaussian(rows, cols, seed).as_slice().to_vec()
    }

    #[test]
    fn factor_query_and_free() {
        let (rows, cols) = (48usize, 32usize);
        let data = gaussian_colmajor(rows, cols, 11);
        let cfg = bqrrp_config_default();
        let mut handle: *mut BqrrpFactorization = std::ptr::null_mut();
        let cfg = BqrrpCConfig { block: 16, ..cfg };
        let status = unsafe {
            bqrrp_factor_dense(data.as_ptr(), rows as u64, cols as u64, &cfg, &mut handle)
        };
        assert_eq!(status, BqrrpStatus::Ok);
        assert!(!handle.is_null());
        unsafe {
            assert_eq!(bqrrp_rank(handle), 32);
            assert_eq!(bqrrp_rows(handle), 48);
            assert_eq!(bqrrp_cols(handle), 32);

            let mut pivots = vec![0i64; cols];
            assert_eq!(bqrrp_pivots(handle, pivots.as_mut_ptr()), BqrrpStatus::Ok);
            let mut seen = vec![false; cols];
            for &p in &pivots {
                assert!((1..=cols as i64).contains(&p));
                assert!(!seen[(p - 1) as usize]);
                seen[(p - 1) as usize] = true;
            }

            let mut tau = vec![0.0f64; rows.min(cols)];
            assert_eq!(bqrrp_tau(handle, tau.as_mut_ptr()), BqrrpStatus::Ok);

            let mut residual = f64::NAN;
            assert_eq!(bqrrp_residual(handle, data.as_ptr(), &mut residual), BqrrpStatus::Ok);
            assert!(residual <= 1e-12, "residual {residual}");

            bqrrp_free(handle);
        }
    }

    #[test]
    fn null_and_config_errors() {
        let mut handle: *mut BqrrpFactorization = std::ptr::null_mut();
        let status = unsafe {
            bqrrp_factor_dense(std::ptr::null(), 4, 4, std::ptr::null(), &mut handle)
        };
        assert_eq!(status, BqrrpStatus::NullPointer);

        let data = gaussian_colmajor(4, 4, 1);
        let cfg = BqrrpCConfig { block: 64, ..bqrrp_config_default() }; // d > m
        let status =
            unsafe { bqrrp_factor_dense(data.as_ptr(), 4, 4, &cfg, &mut handle) };
        assert_eq!(status, BqrrpStatus::ConfigError);
        unsafe { bqrrp_free(std::ptr::null_mut()) };
    }

    #[test]
    fn explicit_q_is_orthonormal_through_the_abi() {
        let (rows, cols) = (24usize, 24usize);
        let data = gaussian_colmajor(rows, cols, 21);
        let cfg = BqrrpCConfig { block: 8, ..bqrrp_config_default() };
        let mut handle: *mut BqrrpFactorization = std::ptr::null_mut();
        unsafe {
            assert_eq!(
                bqrrp_factor_dense(data.as_ptr(), rows as u64, cols as u64, &cfg, &mut handle),
                BqrrpStatus::Ok
            );
            let mut q = vec![0.0f64; rows * rows];
            assert_eq!(bqrrp_explicit_q(handle, rows as u64, q.as_mut_ptr()), BqrrpStatus::Ok);
            for i in 0..rows {
                for j in 0..rows {
                    let mut dot = 0.0;
                    for t in 0..rows {
                        dot += q[t + i * rows] * q[t + j * rows];
                    }
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((dot - want).abs() <= 1e-12);
                }
            }
            bqrrp_free(handle);
        }
    }

    #[test]
    fn status_messages_are_nul_terminated() {
        for s in [BqrrpStatus::Ok, BqrrpStatus::ConfigError, BqrrpStatus::InternalError] {
            let p = bqrrp_status_message(s);
            assert!(!p.is_null());
            let cstr = unsafe { std::ffi::CStr::from_ptr(p) };
            assert!(!cstr.to_str().unwrap().is_empty());
        }
    }
}
