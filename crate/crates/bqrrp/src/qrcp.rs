//! Column-norm-greedy Householder QR with column pivoting. This is the
//! reference oracle the randomized driver is compared against: strictly
//! level-2, one column at a time, with safeguarded norm downdating.

use crate::householder::house_gen;
use crate::matrix::MatMut;
use crate::pivot::PivotVector;

/// In place: R on/above the diagonal, reflector tails below, scalar
/// factors in `tau[..min(m, n)]`. Returns the one-based gather pivots.
/// At each step the column of maximal updated 2-norm is swapped to the
/// front; ties break toward the lowest index.
pub fn qrcp_reference(mut a: MatMut<'_>, tau: &mut [f64]) -> PivotVector {
    let m = a.rows();
    let n = a.cols();
    let kmax = m.min(n);
    assert!(tau.len() >= kmax);
    let mut jpvt: Vec<usize> = (1..=n).collect();

    // Partial column norms and the value at the last full recomputation.
    let mut norms: Vec<f64> = (0..n).map(|j| norm2(a.rb().col(j))).collect();
    let mut ref_norms = norms.clone();

    for step in 0..kmax {
        // Greedy pivot among trailing columns.
        let mut best = step;
        for j in step + 1..n {
            if norms[j] > norms[best] {
                best = j;
            }
        }
        if best != step {
            a.swap_cols(step, best);
            norms.swap(step, best);
            ref_norms.swap(step, best);
            jpvt.swap(step, best);
        }

        let t = house_gen(&mut a.col_mut(step)[step..]);
        tau[step] = t;

        if t != 0.0 && step + 1 < n {
            let (vcols, mut rest) = a.rb_mut().split_at_col(step + 1);
            let v = &vcols.col(step)[step..];
            for c in 0..n - step - 1 {
                let col = &mut rest.col_mut(c)[step..];
                let mut s = col[0];
                for i in 1..v.len() {
                    s += v[i] * col[i];
                }
                s *= t;
                col[0] -= s;
                for i in 1..v.len() {
                    col[i] -= s * v[i];
                }
            }
        }

        // Downdate trailing norms; recompute from scratch when cancellation
        // eats more than half the digits.
        for j in step + 1..n {
            if norms[j] == 0.0 {
                continue;
            }
            let h = a.get(step, j) / norms[j];
            let rest = (1.0 - h * h).max(0.0);
            let downd = norms[j] * rest.sqrt();
            if downd * downd <= crate::matrix::UNIT_ROUNDOFF.sqrt() * ref_norms[j] * ref_norms[j] {
                let fresh = norm2(&a.rb().col(j)[step + 1..]);
                norms[j] = fresh;
                ref_norms[j] = fresh;
            } else {
                norms[j] = downd;
            }
        }
    }
    PivotVector::from_one_based(jpvt).expect("pivot bookkeeping preserves the permutation")
}

fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}
