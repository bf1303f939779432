//! Partially pivoted LU. Growth-tolerant reference implementation: an
//! exactly-zero pivot column is recorded and elimination continues, since
//! rank-deficient sketches must survive the factorization.

use crate::matrix::{DenseMatrix, MatMut};

/// Unit-lower L and upper U packed in one buffer, with the one-based
/// row-swap list `ipiv` (row i was interchanged with row `ipiv[i] - 1`).
pub struct LuFactorization {
    pub factors: DenseMatrix,
    pub ipiv: Vec<usize>,
}

/// In-place LU with partial pivoting; `ipiv` must hold min(rows, cols)
/// entries on return.
pub fn lu_in_place(mut a: MatMut<'_>, ipiv: &mut [usize]) {
    let m = a.rows();
    let n = a.cols();
    let k = m.min(n);
    assert!(ipiv.len() >= k, "ipiv too short");
    for j in 0..k {
        // Pivot: largest magnitude on or below the diagonal.
        let mut piv = j;
        let mut best = a.get(j, j).abs();
        for i in j + 1..m {
            let v = a.get(i, j).abs();
            if v > best {
                best = v;
                piv = i;
            }
        }
        ipiv[j] = piv + 1;
        if best == 0.0 {
            // Singular column: record the no-swap and move on.
            ipiv[j] = j + 1;
            continue;
        }
        if piv != j {
            for c in 0..n {
                let col = a.col_mut(c);
                col.swap(j, piv);
            }
        }
        let d = a.get(j, j);
        {
            let col = a.col_mut(j);
            for v in &mut col[j + 1..m] {
                *v /= d;
            }
        }
        // Trailing update, column by column.
        let (lead, mut rest) = a.rb_mut().split_at_col(j + 1);
        let lj = lead.rb();
        let multipliers = &lj.col(j)[j + 1..m];
        for c in 0..n - j - 1 {
            let col = rest.col_mut(c);
            let w = col[j];
            if w != 0.0 {
                crate::blas::axpy(-w, multipliers, &mut col[j + 1..m]);
            }
        }
    }
}

/// Consumes `a`, returning the packed factorization.
pub fn lu_partial_pivot(mut a: DenseMatrix) -> LuFactorization {
    let k = a.rows().min(a.cols());
    let mut ipiv = vec![0; k];
    lu_in_place(a.view_mut(), &mut ipiv);
    LuFactorization { factors: a, ipiv }
}
