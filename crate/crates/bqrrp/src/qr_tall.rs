//! Unpivoted QR of the current permuted panel: the plain Householder path
//! and the preconditioned Cholesky-QR path with Householder reconstruction.
//!
//! The Cholesky path truncates to the estimated block rank k, right-solves
//! against the sketch's leading triangle, orthogonalizes via Gram/Cholesky,
//! converts the explicit factor back to reflectors plus a sign vector, and
//! undoes the preconditioning to recover R11. A Cholesky breakdown falls
//! back to the Householder path on the saved panel.

use crate::blas::{syrk_into, trmm_upper_left, trsm, Diag, Side, Trans, UpLo};
use crate::chol::cholesky;
use crate::error::{Error, Result};
use crate::householder::{qr_unpivoted, DEFAULT_PANEL};
use crate::matrix::{DenseMatrix, MatMut, MatRef};

/// +-1 signs emitted by the Householder reconstruction.
#[derive(Clone, Debug)]
pub struct SignVector(Vec<f64>);

impl SignVector {
    pub fn new(entries: Vec<f64>) -> Self {
        assert!(entries.iter().all(|&v| v == 1.0 || v == -1.0), "entries must be +-1");
        SignVector(entries)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// panel <- panel * R^{-1} for the upper-triangular k-by-k `r_sk11`
/// (only its upper triangle is read). `panel` must already be sliced to
/// its leading k columns.
pub fn precondition(panel: MatMut<'_>, r_sk11: MatRef<'_>) -> Result<()> {
    trsm(Side::Right, UpLo::Upper, Trans::No, Diag::NonUnit, r_sk11, panel)
}

/// Cholesky QR: on return `m_pre` holds the explicit orthonormal factor
/// and `r_chol` (k-by-k) the triangular factor. Fails with the breakdown
/// index when the Gram matrix is not numerically positive definite.
pub fn cholqr(m_pre: MatMut<'_>, mut r_chol: MatMut<'_>) -> Result<()> {
    syrk_into(m_pre.rb(), r_chol.rb_mut())?;
    cholesky(r_chol.rb_mut())?;
    trsm(Side::Right, UpLo::Upper, Trans::No, Diag::NonUnit, r_chol.rb(), m_pre)
}

/// Converts an explicit matrix with near-orthonormal columns into k
/// reflectors stored below its unit diagonal, plus the sign vector D:
/// H_1 ... H_k e_j = D(j) * Q(:, j). The space on/above the diagonal is
/// left holding factorization by-products.
pub fn householder_reconstruct(mut q: MatMut<'_>, tau: &mut [f64]) -> SignVector {
    let m = q.rows();
    let k = q.cols();
    assert!(k <= m, "explicit factor cannot be wide");
    assert!(tau.len() >= k);
    let mut signs = Vec::with_capacity(k);
    for j in 0..k {
        // Shift the diagonal away from zero; the sign choice keeps the
        // elimination pivot at magnitude >= 1 for orthonormal input.
        let s = if q.get(j, j) >= 0.0 { -1.0 } else { 1.0 };
        signs.push(s);
        let d = q.get(j, j) - s;
        q.set(j, j, d);
        {
            let col = q.col_mut(j);
            for v in &mut col[j + 1..m] {
                *v /= d;
            }
        }
        let (lead, mut rest) = q.rb_mut().split_at_col(j + 1);
        let multipliers = lead.rb();
        let mult = &multipliers.col(j)[j + 1..m];
        for c in 0..k - j - 1 {
            let col = rest.col_mut(c);
            let w = col[j];
            if w != 0.0 {
                crate::blas::axpy(-w, mult, &mut col[j + 1..m]);
            }
        }
        tau[j] = -d * s;
    }
    SignVector(signs)
}

/// R11 = diag(D) * R_chol * triu(R_sk): undoes the preconditioning. The
/// signs ride on the rows of R_chol so that Q_curr * R11 rebuilds the
/// panel under the reconstruction convention Q_curr(:, 0:k) = Q_chol diag(D).
/// Only the upper trapezoid of `r_sk` is read.
pub fn unprecondition(r_chol: MatRef<'_>, d: &SignVector, r_sk: MatRef<'_>) -> DenseMatrix {
    let k = r_chol.rows();
    let bw = r_sk.cols();
    assert_eq!(r_chol.cols(), k);
    assert_eq!(d.len(), k);
    let mut scaled = DenseMatrix::zeros(k, k);
    for j in 0..k {
        for i in 0..=j {
            scaled.set(i, j, r_chol.get(i, j) * d.as_slice()[i]);
        }
    }
    let mut out = DenseMatrix::zeros(k, bw);
    copy_upper_trapezoid(r_sk, out.view_mut());
    trmm_upper_left(scaled.view(), out.view_mut());
    out
}

fn copy_upper_trapezoid(src: MatRef<'_>, mut dst: MatMut<'_>) {
    let k = dst.rows();
    let bw = dst.cols();
    for c in 0..bw {
        let upto = k.min(c + 1);
        for r in 0..upto {
            dst.set(r, c, src.get(r, c));
        }
        for r in upto..k {
            dst.set(r, c, 0.0);
        }
    }
}

/// Householder QR over the full panel; all columns get reflectors even
/// when only k of them are used downstream.
pub fn qr_tall_hqr(panel: MatMut<'_>, tau: &mut [f64]) {
    qr_unpivoted(panel, tau, DEFAULT_PANEL);
}

/// Scratch for the Cholesky panel path, sized once per driver run.
pub struct TallWorkspace {
    gram: DenseMatrix,
    r11: DenseMatrix,
    backup: DenseMatrix,
}

impl TallWorkspace {
    /// `max_rows` panel rows, `b` block columns.
    pub fn new(max_rows: usize, b: usize) -> Self {
        TallWorkspace {
            gram: DenseMatrix::zeros(b, b),
            r11: DenseMatrix::zeros(b, b),
            backup: DenseMatrix::zeros(max_rows, b),
        }
    }
}

/// Outcome flag for the Cholesky path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CqrOutcome {
    pub used_fallback: bool,
}

/// Cholesky QR with dependencies on a panel: precondition, orthogonalize,
/// reconstruct reflectors, undo the preconditioning into the panel's upper
/// trapezoid. On Cholesky breakdown, restores the saved panel and falls
/// back to the Householder path.
pub fn qr_tall_cqr(
    mut panel: MatMut<'_>,
    r_sk: MatRef<'_>,
    k: usize,
    tau: &mut [f64],
    ws: &mut TallWorkspace,
) -> Result<CqrOutcome> {
    let rows = panel.rows();
    let bw = panel.cols();
    assert!(k >= 1 && k <= bw && k <= rows, "block rank out of range");
    assert!(r_sk.rows() >= k && r_sk.cols() >= bw, "sketch triangle too small");
    assert!(tau.len() >= bw.min(rows), "one factor per reflector");

    ws.backup.sub_mut(0, 0, rows, k).copy_from(panel.sub(0, 0, rows, k));

    let r_sk11 = r_sk.sub(0, 0, k, k);
    let orthogonalize = precondition(panel.sub_mut(0, 0, rows, k), r_sk11)
        .and_then(|()| cholqr(panel.sub_mut(0, 0, rows, k), ws.gram.sub_mut(0, 0, k, k)));
    match orthogonalize {
        Ok(()) => {}
        Err(Error::CholeskyBreakdown { .. }) | Err(Error::SingularDiagonal { .. }) => {
            panel.sub_mut(0, 0, rows, k).copy_from(ws.backup.sub(0, 0, rows, k));
            qr_tall_hqr(panel, tau);
            return Ok(CqrOutcome { used_fallback: true });
        }
        Err(e) => return Err(e),
    }

    let d = householder_reconstruct(panel.sub_mut(0, 0, rows, k), &mut tau[..k]);

    // R11 = diag(D) R_chol triu(R_sk(0:k, 0:bw)), staged through the r11
    // buffer and copied into the panel's upper trapezoid (the reflectors
    // below the diagonal must stay).
    {
        let mut gram = ws.gram.sub_mut(0, 0, k, k);
        for i in 0..k {
            if d.as_slice()[i] < 0.0 {
                for j in i..k {
                    let v = gram.get(i, j);
                    gram.set(i, j, -v);
                }
            }
        }
    }
    {
        let mut r11 = ws.r11.sub_mut(0, 0, k, bw);
        copy_upper_trapezoid(r_sk.sub(0, 0, k, bw), r11.rb_mut());
        trmm_upper_left(ws.gram.sub(0, 0, k, k), r11.rb_mut());
        for c in 0..bw {
            let upto = k.min(c + 1);
            for r in 0..upto {
                panel.set(r, c, r11.get(r, c));
            }
        }
    }
    Ok(CqrOutcome { used_fallback: false })
}

/// One reflector at a time: y <- H_1 ... H_k e_j, used by round-trip tests.
pub fn reflector_product_column(v: MatRef<'_>, tau: &[f64], col: usize) -> Vec<f64> {
    let m = v.rows();
    let k = tau.len();
    let mut y = vec![0.0; m];
    y[col] = 1.0;
    for j in (0..k).rev() {
        let t = tau[j];
        if t == 0.0 {
            continue;
        }
        let vj = v.col(j);
        let mut s = y[j];
        for i in j + 1..m {
            s += vj[i] * y[i];
        }
        s *= t;
        y[j] -= s;
        for i in j + 1..m {
            y[i] -= s * vj[i];
        }
    }
    y
}
