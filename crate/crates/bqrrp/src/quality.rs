//! Pivot-quality metrics over an explicit R factor.

use crate::matrix::MatRef;

/// f(i) = ||R(i:, i:)||_F for i in 0..min(rows, cols), computed in one
/// reverse pass over a running sum of squares.
pub fn trailing_frobenius_profile(r: MatRef<'_>) -> Vec<f64> {
    let n = r.rows().min(r.cols());
    if n == 0 {
        return Vec::new();
    }
    let mut sq = vec![0.0f64; n];
    let mut acc = 0.0f64;
    for i in (0..n).rev() {
        // Entries entering the submatrix when its corner moves to (i, i):
        // row i from column i on, and column i below row i.
        for j in i..r.cols() {
            let v = r.get(i, j);
            acc += v * v;
        }
        for ii in i + 1..r.rows() {
            let v = r.get(ii, i);
            acc += v * v;
        }
        sq[i] = acc;
    }
    sq.into_iter().map(f64::sqrt).collect()
}

/// q(i) = |R(i, i)| / sigma_i. Zero-over-zero is 1 by convention; a zero
/// sigma under a nonzero diagonal maps to +infinity.
pub fn diag_over_sigma(r: MatRef<'_>, sigma: &[f64]) -> Vec<f64> {
    let n = r.rows().min(r.cols());
    assert!(sigma.len() >= n, "need a singular value per diagonal entry");
    (0..n)
        .map(|i| {
            let d = r.get(i, i).abs();
            let s = sigma[i];
            if s == 0.0 {
                if d == 0.0 {
                    1.0
                } else {
                    f64::INFINITY
                }
            } else {
                d / s
            }
        })
        .collect()
}
