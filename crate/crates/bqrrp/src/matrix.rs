//! Column-major dense matrix storage with zero-copy strided views.
//!
//! `DenseMatrix` owns its buffer; `MatRef`/`MatMut` are borrowed windows
//! (row offset, column offset, rows, cols) over a parent buffer with an
//! explicit leading dimension. Columns are contiguous slices, which every
//! kernel in this crate leans on.

use crate::error::{Error, Result};

/// Unit roundoff for f64 (half the machine epsilon).
pub const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

/// Owned column-major matrix. The leading dimension equals `rows`.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i + i * n] = 1.0;
        }
        m
    }

    /// Leading `cols` columns of the m-by-m identity.
    pub fn eye(rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows.min(cols) {
            m.data[i + i * rows] = 1.0;
        }
        m
    }

    pub fn from_col_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch { expected: rows * cols, got: data.len() });
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    /// Builds from row slices; convenient for literals in tests.
    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let nr = rows.len();
        let nc = if nr == 0 { 0 } else { rows[0].len() };
        let mut m = Self::zeros(nr, nc);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), nc, "ragged rows");
            for (j, &v) in r.iter().enumerate() {
                m.data[i + j * nr] = v;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r + c * self.rows]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r + c * self.rows] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn view(&self) -> MatRef<'_> {
        MatRef { rows: self.rows, cols: self.cols, stride: self.rows, data: &self.data }
    }

    pub fn view_mut(&mut self) -> MatMut<'_> {
        MatMut { rows: self.rows, cols: self.cols, stride: self.rows, data: &mut self.data }
    }

    pub fn sub(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> MatRef<'_> {
        self.view().into_sub(r0, c0, rows, cols)
    }

    pub fn sub_mut(&mut self, r0: usize, c0: usize, rows: usize, cols: usize) -> MatMut<'_> {
        self.view_mut().into_sub(r0, c0, rows, cols)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.view().frobenius_norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.view().max_abs()
    }
}

/// Immutable window over a column-major buffer.
#[derive(Clone, Copy)]
pub struct MatRef<'a> {
    rows: usize,
    cols: usize,
    stride: usize,
    data: &'a [f64],
}

impl<'a> MatRef<'a> {
    pub fn from_raw(data: &'a [f64], rows: usize, cols: usize, stride: usize) -> Self {
        assert!(stride >= rows.max(1));
        if cols > 0 {
            assert!(data.len() >= (cols - 1) * stride + rows);
        }
        MatRef { rows, cols, stride, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn stride(&self) -> usize {
        self.stride
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r + c * self.stride]
    }

    /// Column `c` as a contiguous slice.
    #[inline]
    pub fn col(&self, c: usize) -> &[f64] {
        debug_assert!(c < self.cols);
        &self.data[c * self.stride..c * self.stride + self.rows]
    }

    pub fn into_sub(self, r0: usize, c0: usize, rows: usize, cols: usize) -> MatRef<'a> {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols, "sub out of range");
        let start = r0 + c0 * self.stride;
        let end = if cols == 0 || rows == 0 { start } else { start + (cols - 1) * self.stride + rows };
        MatRef { rows, cols, stride: self.stride, data: &self.data[start..end] }
    }

    pub fn sub(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> MatRef<'a> {
        self.into_sub(r0, c0, rows, cols)
    }

    pub fn to_owned(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.rows, self.cols);
        for c in 0..self.cols {
            out.data[c * self.rows..(c + 1) * self.rows].copy_from_slice(self.col(c));
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        let mut s = 0.0;
        for c in 0..self.cols {
            for &v in self.col(c) {
                s += v * v;
            }
        }
        s.sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        let mut s: f64 = 0.0;
        for c in 0..self.cols {
            for &v in self.col(c) {
                s = s.max(v.abs());
            }
        }
        s
    }
}

/// Mutable window over a column-major buffer. A view never writes outside
/// its declared window; disjoint column splits borrow-check as disjoint.
pub struct MatMut<'a> {
    rows: usize,
    cols: usize,
    stride: usize,
    data: &'a mut [f64],
}

impl<'a> MatMut<'a> {
    pub fn from_raw(data: &'a mut [f64], rows: usize, cols: usize, stride: usize) -> Self {
        assert!(stride >= rows.max(1));
        if cols > 0 {
            assert!(data.len() >= (cols - 1) * stride + rows);
        }
        MatMut { rows, cols, stride, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn stride(&self) -> usize {
        self.stride
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r + c * self.stride]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r + c * self.stride] = v;
    }

    #[inline]
    pub fn col(&self, c: usize) -> &[f64] {
        debug_assert!(c < self.cols);
        &self.data[c * self.stride..c * self.stride + self.rows]
    }

    #[inline]
    pub fn col_mut(&mut self, c: usize) -> &mut [f64] {
        debug_assert!(c < self.cols);
        &mut self.data[c * self.stride..c * self.stride + self.rows]
    }

    /// Reborrow as an immutable view.
    pub fn rb(&self) -> MatRef<'_> {
        MatRef { rows: self.rows, cols: self.cols, stride: self.stride, data: self.data }
    }

    /// Reborrow mutably (shorter lifetime).
    pub fn rb_mut(&mut self) -> MatMut<'_> {
        MatMut { rows: self.rows, cols: self.cols, stride: self.stride, data: self.data }
    }

    pub fn into_sub(self, r0: usize, c0: usize, rows: usize, cols: usize) -> MatMut<'a> {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols, "sub out of range");
        let start = r0 + c0 * self.stride;
        let end = if cols == 0 || rows == 0 { start } else { start + (cols - 1) * self.stride + rows };
        MatMut { rows, cols, stride: self.stride, data: &mut self.data[start..end] }
    }

    pub fn sub_mut(&mut self, r0: usize, c0: usize, rows: usize, cols: usize) -> MatMut<'_> {
        self.rb_mut().into_sub(r0, c0, rows, cols)
    }

    pub fn sub(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> MatRef<'_> {
        self.rb().into_sub(r0, c0, rows, cols)
    }

    /// Splits into columns `[0, mid)` and `[mid, cols)`; the two halves are
    /// independently mutable.
    pub fn split_at_col(self, mid: usize) -> (MatMut<'a>, MatMut<'a>) {
        assert!(mid <= self.cols);
        // The buffer ends with the last column's rows, short of a full
        // stride; clamp so an empty right half is representable.
        let cut = (mid * self.stride).min(self.data.len());
        let (left, right) = self.data.split_at_mut(cut);
        (
            MatMut { rows: self.rows, cols: mid, stride: self.stride, data: left },
            MatMut { rows: self.rows, cols: self.cols - mid, stride: self.stride, data: right },
        )
    }

    pub fn fill(&mut self, v: f64) {
        for c in 0..self.cols {
            self.col_mut(c).fill(v);
        }
    }

    pub fn copy_from(&mut self, src: MatRef<'_>) {
        assert_eq!((self.rows, self.cols), (src.rows(), src.cols()), "copy_from shape");
        for c in 0..self.cols {
            self.col_mut(c).copy_from_slice(src.col(c));
        }
    }

    /// Swaps the entirety of two columns.
    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        debug_assert!(a < self.cols && b < self.cols);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let (left, right) = self.data.split_at_mut(hi * self.stride);
        let ca = &mut left[lo * self.stride..lo * self.stride + self.rows];
        let cb = &mut right[..self.rows];
        ca.swap_with_slice(cb);
    }
}
