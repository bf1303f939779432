//! Upper Cholesky factorization G = R^T R, failing with the index of the
//! first non-positive pivot (the factorization of the leading principal
//! submatrix up to that point is still valid, matching POTRF behavior).

use crate::error::{Error, Result};
use crate::matrix::MatMut;

/// Factors the symmetric `g` in place: upper triangle becomes R, strictly
/// lower triangle is zeroed. On failure the index of the offending pivot
/// is reported.
pub fn cholesky(mut g: MatMut<'_>) -> Result<()> {
    let k = g.rows();
    assert_eq!(g.cols(), k, "cholesky needs a square input");
    for j in 0..k {
        let mut d = g.get(j, j);
        for t in 0..j {
            let v = g.get(t, j);
            d -= v * v;
        }
        if d <= 0.0 || !d.is_finite() {
            return Err(Error::CholeskyBreakdown { index: j });
        }
        let rjj = d.sqrt();
        g.set(j, j, rjj);
        for c in j + 1..k {
            let mut s = g.get(j, c);
            for t in 0..j {
                s -= g.get(t, j) * g.get(t, c);
            }
            g.set(j, c, s / rjj);
        }
        for i in j + 1..k {
            g.set(i, j, 0.0);
        }
    }
    Ok(())
}
