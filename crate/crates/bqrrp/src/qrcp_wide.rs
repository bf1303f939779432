//! Column-pivoted QR for wide sketch panels behind one interface: the
//! fast path retrieves pivots from a row-pivoted LU of the transpose and
//! finishes with unpivoted QR; the reference path delegates to the greedy
//! QRCP oracle. Both overwrite the panel with the upper-trapezoid R
//! (reflector tails stay below the diagonal, unused by the caller) and
//! return the one-based gather pivots.

use crate::error::Result;
use crate::householder::{qr_unpivoted, DEFAULT_PANEL};
use crate::lu::lu_in_place;
use crate::matrix::{DenseMatrix, MatMut};
use crate::pivot::{col_perm_sequential_consuming, piv_lu_to_qr, PivotVector};
use crate::qrcp::qrcp_reference;

/// Reusable buffers sized once for the widest panel: a cols-by-rows
/// transpose target, row-swap storage, and a tau scratch for the
/// discarded sketch Q.
pub struct WideWorkspace {
    trans: DenseMatrix,
    swaps: Vec<usize>,
    tau: Vec<f64>,
}

impl WideWorkspace {
    /// `d` sketch rows, up to `n` panel columns.
    pub fn new(d: usize, n: usize) -> Self {
        WideWorkspace {
            trans: DenseMatrix::zeros(n, d),
            swaps: vec![0; n.min(d).max(1)],
            tau: vec![0.0; d.max(1)],
        }
    }
}

/// LU-based wide QRCP: transpose-copy, row-pivoted LU for the pivots,
/// permute, then unpivoted QR for R.
pub fn qrcp_wide_luqr(mut m_sk: MatMut<'_>, ws: &mut WideWorkspace) -> Result<PivotVector> {
    let d = m_sk.rows();
    let w = m_sk.cols();
    let mut trans = ws.trans.sub_mut(0, 0, w, d);
    crate::blas::transpose_into(m_sk.rb(), trans.rb_mut())?;
    let npiv = w.min(d);
    lu_in_place(trans.rb_mut(), &mut ws.swaps[..npiv]);
    let j_qr = piv_lu_to_qr(&ws.swaps[..npiv], w)?;
    let mut scrambled = j_qr.clone();
    col_perm_sequential_consuming(m_sk.rb_mut(), &mut scrambled)?;
    qr_unpivoted(m_sk, &mut ws.tau[..d.min(w)], DEFAULT_PANEL);
    Ok(j_qr)
}

/// Reference wide QRCP: greedy column-norm pivoting, identical return
/// shape to the LU-based path.
pub fn qrcp_wide_ref(m_sk: MatMut<'_>, ws: &mut WideWorkspace) -> Result<PivotVector> {
    let k = m_sk.rows().min(m_sk.cols());
    Ok(qrcp_reference(m_sk, &mut ws.tau[..k]))
}
