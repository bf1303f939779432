//! Gaussian sketching operators. The operator is never materialized: each
//! entry is a pure function of (seed, row, col), generated on the fly while
//! streaming over the input, and regenerated identically on demand.

use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, MatMut, MatRef};
use crate::rng::{normal_at, tagged_seed, STREAM_SKETCH};

/// A d-by-m operator with i.i.d. mean-zero variance-one normal entries,
/// fully determined by (seed, d, m).
#[derive(Clone, Copy, Debug)]
pub struct GaussianSketchOp {
    d: usize,
    m: usize,
    seed: u64,
}

impl GaussianSketchOp {
    pub fn new(d: usize, m: usize, seed: u64) -> Self {
        GaussianSketchOp { d, m, seed }
    }

    pub fn rows(&self) -> usize {
        self.d
    }

    pub fn cols(&self) -> usize {
        self.m
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        normal_at(tagged_seed(self.seed, STREAM_SKETCH), i as u64, j as u64)
    }

    /// Explicit d-by-m realization; test and inspection aid.
    pub fn materialize(&self) -> DenseMatrix {
        let mut s = DenseMatrix::zeros(self.d, self.m);
        for j in 0..self.m {
            for i in 0..self.d {
                s.set(i, j, self.entry(i, j));
            }
        }
        s
    }
}

/// M_sk <- S * M without forming S: one pass over the rows of M, with a
/// d-length column of S regenerated per row.
pub fn sketch_apply_into(s: &GaussianSketchOp, m: MatRef<'_>, mut out: MatMut<'_>) -> Result<()> {
    if s.cols() != m.rows() {
        return Err(Error::DimensionMismatch {
            op: "sketch_apply",
            expected: (s.cols(), m.cols()),
            got: (m.rows(), m.cols()),
        });
    }
    if out.rows() != s.rows() || out.cols() != m.cols() {
        return Err(Error::DimensionMismatch {
            op: "sketch_apply",
            expected: (s.rows(), m.cols()),
            got: (out.rows(), out.cols()),
        });
    }
    out.fill(0.0);
    let d = s.rows();
    let mut s_col = vec![0.0; d];
    for p in 0..m.rows() {
        for (i, v) in s_col.iter_mut().enumerate() {
            *v = s.entry(i, p);
        }
        for j in 0..m.cols() {
            let w = m.get(p, j);
            if w != 0.0 {
                crate::blas::axpy(w, &s_col, out.col_mut(j));
            }
        }
    }
    Ok(())
}

pub fn sketch_apply(s: &GaussianSketchOp, m: MatRef<'_>) -> Result<DenseMatrix> {
    let mut out = DenseMatrix::zeros(s.rows(), m.cols());
    sketch_apply_into(s, m, out.view_mut())?;
    Ok(out)
}
