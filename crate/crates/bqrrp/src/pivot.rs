//! Pivot vectors in LAPACK gather semantics and the two column-permutation
//! kernels: sequential in-place swaps and the scatter-free parallel gather.
//!
//! Gather semantics, one-based: if J(j) = i + 1, column j of the permuted
//! matrix was column i of the original.

use crate::error::{Error, Result};
use crate::matrix::{MatMut, MatRef};

/// One-based permutation vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PivotVector {
    entries: Vec<usize>,
}

impl PivotVector {
    pub fn identity(n: usize) -> Self {
        PivotVector { entries: (1..=n).collect() }
    }

    /// Validates that `entries` is a permutation of 1..=n.
    pub fn from_one_based(entries: Vec<usize>) -> Result<Self> {
        let n = entries.len();
        let mut seen = vec![false; n];
        for (idx, &v) in entries.iter().enumerate() {
            if v < 1 || v > n || seen[v - 1] {
                return Err(Error::InvalidPermutation { index: idx, value: v, len: n });
            }
            seen[v - 1] = true;
        }
        Ok(PivotVector { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn as_one_based(&self) -> &[usize] {
        &self.entries
    }

    /// Zero-based source index of output position `j`.
    #[inline]
    pub fn source(&self, j: usize) -> usize {
        self.entries[j] - 1
    }

    /// J^{-1}: the permutation that undoes this one.
    pub fn inverse(&self) -> PivotVector {
        let n = self.entries.len();
        let mut inv = vec![0usize; n];
        for (j, &v) in self.entries.iter().enumerate() {
            inv[v - 1] = j + 1;
        }
        PivotVector { entries: inv }
    }
}

/// Converts an LU row-swap list (row i interchanged with row `swaps[i] - 1`,
/// applied in ascending order) into a gather pivot vector of length n.
pub fn piv_lu_to_qr(swaps: &[usize], n: usize) -> Result<PivotVector> {
    if swaps.len() > n {
        return Err(Error::LengthMismatch { expected: n, got: swaps.len() });
    }
    for (i, &s) in swaps.iter().enumerate() {
        if s < 1 || s > n {
            return Err(Error::InvalidPermutation { index: i, value: s, len: n });
        }
    }
    let mut j: Vec<usize> = (1..=n).collect();
    for (i, &s) in swaps.iter().enumerate() {
        j.swap(i, s - 1);
    }
    Ok(PivotVector { entries: j })
}

/// Permutes columns of `m` in place by repeated swaps; O(1) extra matrix
/// storage. The caller's pivot vector is left untouched (an internal copy
/// is consumed).
pub fn col_perm_sequential(m: MatMut<'_>, j: &PivotVector) -> Result<()> {
    if j.len() != m.cols() {
        return Err(Error::LengthMismatch { expected: m.cols(), got: j.len() });
    }
    let mut work = j.clone();
    col_perm_sequential_consuming(m, &mut work)
}

/// The in-place swap loop itself; consumes (scrambles) `j`.
pub(crate) fn col_perm_sequential_consuming(mut m: MatMut<'_>, j: &mut PivotVector) -> Result<()> {
    let n = m.cols();
    let jv = &mut j.entries;
    for i in 0..n {
        let target = jv[i] - 1;
        m.swap_cols(i, target);
        // The column displaced from position i now sits at `target`; point
        // the live entry that wanted it there. Only the unprocessed tail
        // can hold a live claim.
        let want = i + 1;
        if let Some(idx) = jv[i..].iter().position(|&v| v == want) {
            jv[i + idx] = target + 1;
        }
    }
    Ok(())
}

/// Gathers columns of `m` into `scratch`: scratch(:, j) = m(:, J(j) - 1).
/// Iterations of the column loop are independent; `m` is untouched.
pub fn col_perm_gather(m: MatRef<'_>, j: &PivotVector, mut scratch: MatMut<'_>) -> Result<()> {
    if scratch.rows() != m.rows() || scratch.cols() != m.cols() {
        return Err(Error::DimensionMismatch {
            op: "col_perm_gather",
            expected: (m.rows(), m.cols()),
            got: (scratch.rows(), scratch.cols()),
        });
    }
    if j.len() != m.cols() {
        return Err(Error::LengthMismatch { expected: m.cols(), got: j.len() });
    }
    for c in 0..m.cols() {
        scratch.col_mut(c).copy_from_slice(m.col(j.source(c)));
    }
    Ok(())
}

/// Permutes an integer tail in place: tail(j) <- old tail(J_local(j) - 1).
/// `j_local` is consumed as scratch; no copy is made.
pub fn vec_perm(tail: &mut [usize], j_local: &mut PivotVector) -> Result<()> {
    if tail.len() != j_local.len() {
        return Err(Error::LengthMismatch { expected: tail.len(), got: j_local.len() });
    }
    let n = tail.len();
    let jv = &mut j_local.entries;
    for i in 0..n {
        let target = jv[i] - 1;
        tail.swap(i, target);
        let want = i + 1;
        if let Some(idx) = jv[i..].iter().position(|&v| v == want) {
            jv[i + idx] = target + 1;
        }
    }
    Ok(())
}
