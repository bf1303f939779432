//! One-sided Jacobi singular values: cyclic column rotations until every
//! off-diagonal Gram cosine is at or below 1e-15, then sorted column
//! norms. High relative accuracy on graded matrices, which is exactly what
//! the pivot-quality harness needs.

use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, MatRef};

const COSINE_TOL: f64 = 1e-15;
const MAX_SWEEPS: usize = 30;

/// Descending singular values of `m`.
pub fn jacobi_svd_values(m: MatRef<'_>) -> Result<Vec<f64>> {
    let mut w = m.to_owned();
    let n = w.cols();
    if n == 0 {
        return Ok(Vec::new());
    }

    let mut worst = 0.0f64;
    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        worst = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                let (app, aqq, apq) = gram_entries(&w, p, q);
                if app == 0.0 || aqq == 0.0 {
                    continue;
                }
                let cosine = apq.abs() / (app.sqrt() * aqq.sqrt());
                worst = worst.max(cosine);
                if cosine <= COSINE_TOL {
                    continue;
                }
                // Two-sided Jacobi rotation on the 2x2 Gram block.
                let zeta = (aqq - app) / (2.0 * apq);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_columns(&mut w, p, q, c, s);
            }
        }
        if worst <= COSINE_TOL {
            converged = true;
            break;
        }
    }
    if !converged && worst > COSINE_TOL {
        return Err(Error::SvdNonConvergence { achieved: worst, sweeps: MAX_SWEEPS });
    }

    let mut values: Vec<f64> = (0..n)
        .map(|j| w.view().col(j).iter().map(|v| v * v).sum::<f64>().sqrt())
        .collect();
    values.sort_by(|a, b| b.partial_cmp(a).expect("norms are finite"));
    // A wide input has at most `rows` nonzero singular values.
    if w.rows() < n {
        values.truncate(w.rows());
    }
    Ok(values)
}

fn gram_entries(w: &DenseMatrix, p: usize, q: usize) -> (f64, f64, f64) {
    let cp = w.view();
    let colp = cp.col(p);
    let colq = cp.col(q);
    let mut app = 0.0;
    let mut aqq = 0.0;
    let mut apq = 0.0;
    for i in 0..colp.len() {
        app += colp[i] * colp[i];
        aqq += colq[i] * colq[i];
        apq += colp[i] * colq[i];
    }
    (app, aqq, apq)
}

fn rotate_columns(w: &mut DenseMatrix, p: usize, q: usize, c: f64, s: f64) {
    let rows = w.rows();
    for i in 0..rows {
        let vp = w.get(i, p);
        let vq = w.get(i, q);
        w.set(i, p, c * vp - s * vq);
        w.set(i, q, s * vp + c * vq);
    }
}
