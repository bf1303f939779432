//! Reference Level-3 kernels: cache-blocked triple loops over contiguous
//! columns, no external BLAS. `BQRRP_THREADS` caps internal parallelism
//! (default 1); parallel runs split output columns so results are bitwise
//! identical to the sequential kernel.

use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, MatMut, MatRef};
use std::sync::OnceLock;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Trans {
    No,
    Yes,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum UpLo {
    Upper,
    Lower,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Diag {
    NonUnit,
    Unit,
}

pub fn kernel_threads() -> usize {
    static THREADS: OnceLock<usize> = OnceLock::new();
    *THREADS.get_or_init(|| {
        std::env::var("BQRRP_THREADS")
            .ok()
            .and_then(|s| s.parse::<usize>().ok())
            .filter(|&t| t >= 1)
            .unwrap_or(1)
    })
}

fn dims_after(t: Trans, m: MatRef<'_>) -> (usize, usize) {
    match t {
        Trans::No => (m.rows(), m.cols()),
        Trans::Yes => (m.cols(), m.rows()),
    }
}

/// C <- alpha * op(A) * op(B) + beta * C.
pub fn gemm(
    alpha: f64,
    a: MatRef<'_>,
    transa: Trans,
    b: MatRef<'_>,
    transb: Trans,
    beta: f64,
    mut c: MatMut<'_>,
) -> Result<()> {
    let (m, ka) = dims_after(transa, a);
    let (kb, n) = dims_after(transb, b);
    if ka != kb || c.rows() != m || c.cols() != n {
        return Err(Error::DimensionMismatch {
            op: "gemm",
            expected: (m, n),
            got: (c.rows(), c.cols()),
        });
    }

    if beta == 0.0 {
        c.fill(0.0);
    } else if beta != 1.0 {
        for j in 0..n {
            for v in c.col_mut(j) {
                *v *= beta;
            }
        }
    }
    if alpha == 0.0 || ka == 0 || m == 0 || n == 0 {
        return Ok(());
    }

    let threads = kernel_threads().min(n.max(1));
    if threads <= 1 {
        gemm_accumulate(alpha, a, transa, b, transb, c.rb_mut(), 0);
        return Ok(());
    }

    // Split output columns across threads; each chunk is computed by the
    // identical sequential kernel, so results do not depend on thread count.
    let chunk = n.div_ceil(threads);
    let mut panels: Vec<(usize, MatMut<'_>)> = Vec::new();
    let mut rest = c;
    let mut start = 0;
    while start < n {
        let w = chunk.min(n - start);
        let (head, tail) = rest.split_at_col(w);
        panels.push((start, head));
        rest = tail;
        start += w;
    }
    std::thread::scope(|scope| {
        for (col0, panel) in panels {
            let bpan = match transb {
                Trans::No => b.sub(0, col0, ka, panel.cols()),
                Trans::Yes => b.sub(col0, 0, panel.cols(), ka),
            };
            scope.spawn(move || {
                gemm_accumulate(alpha, a, transa, bpan, transb, panel, 0);
            });
        }
    });
    Ok(())
}

fn gemm_accumulate(
    alpha: f64,
    a: MatRef<'_>,
    transa: Trans,
    b: MatRef<'_>,
    transb: Trans,
    mut c: MatMut<'_>,
    _tag: usize,
) {
    let n = c.cols();
    let k = match transa {
        Trans::No => a.cols(),
        Trans::Yes => a.rows(),
    };
    match (transa, transb) {
        (Trans::No, Trans::No) => {
            // c(:,j) += alpha * sum_p a(:,p) b(p,j). Four output columns
            // at a time so each A column streams once per quad.
            let mut j = 0;
            while j + 4 <= n {
                let (head, _) = c.rb_mut().split_at_col(j + 4);
                let quad = head.into_sub(0, j, a.rows(), 4);
                let (mut q0, rest) = quad.split_at_col(1);
                let (mut q1, rest) = rest.split_at_col(1);
                let (mut q2, mut q3) = rest.split_at_col(1);
                for p in 0..k {
                    let w0 = alpha * b.get(p, j);
                    let w1 = alpha * b.get(p, j + 1);
                    let w2 = alpha * b.get(p, j + 2);
                    let w3 = alpha * b.get(p, j + 3);
                    axpy4(
                        a.col(p),
                        w0,
                        q0.col_mut(0),
                        w1,
                        q1.col_mut(0),
                        w2,
                        q2.col_mut(0),
                        w3,
                        q3.col_mut(0),
                    );
                }
                j += 4;
            }
            while j < n {
                let cj = c.col_mut(j);
                for p in 0..k {
                    let w = alpha * b.get(p, j);
                    if w != 0.0 {
                        axpy(w, a.col(p), cj);
                    }
                }
                j += 1;
            }
        }
        (Trans::Yes, Trans::No) => {
            // c(i,j) += alpha * dot(a(:,i), b(:,j)); four dots per A-column
            // pass.
            let m = c.rows();
            let mut j = 0;
            while j + 4 <= n {
                let (b0, b1, b2, b3) = (b.col(j), b.col(j + 1), b.col(j + 2), b.col(j + 3));
                for i in 0..m {
                    let ai = a.col(i);
                    let (d0, d1, d2, d3) = dot4(ai, b0, b1, b2, b3);
                    c.set(i, j, c.get(i, j) + alpha * d0);
                    c.set(i, j + 1, c.get(i, j + 1) + alpha * d1);
                    c.set(i, j + 2, c.get(i, j + 2) + alpha * d2);
                    c.set(i, j + 3, c.get(i, j + 3) + alpha * d3);
                }
                j += 4;
            }
            while j < n {
                let bj = b.col(j);
                for i in 0..m {
                    let d = dot(a.col(i), bj);
                    let v = c.get(i, j) + alpha * d;
                    c.set(i, j, v);
                }
                j += 1;
            }
        }
        (Trans::No, Trans::Yes) => {
            for j in 0..n {
                let cj = c.col_mut(j);
                for p in 0..k {
                    let w = alpha * b.get(j, p);
                    if w != 0.0 {
                        axpy(w, a.col(p), cj);
                    }
                }
            }
        }
        (Trans::Yes, Trans::Yes) => {
            let m = c.rows();
            for j in 0..n {
                for i in 0..m {
                    let ai = a.col(i);
                    let mut d = 0.0;
                    for p in 0..k {
                        d += ai[p] * b.get(j, p);
                    }
                    let v = c.get(i, j) + alpha * d;
                    c.set(i, j, v);
                }
            }
        }
    }
}

#[inline]
pub(crate) fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// One pass over `x` feeding four independent axpys.
#[allow(clippy::too_many_arguments)]
#[inline]
fn axpy4(
    x: &[f64],
    w0: f64,
    y0: &mut [f64],
    w1: f64,
    y1: &mut [f64],
    w2: f64,
    y2: &mut [f64],
    w3: f64,
    y3: &mut [f64],
) {
    let len = x.len();
    let (y0, y1, y2, y3) = (&mut y0[..len], &mut y1[..len], &mut y2[..len], &mut y3[..len]);
    for i in 0..len {
        let xi = x[i];
        y0[i] += w0 * xi;
        y1[i] += w1 * xi;
        y2[i] += w2 * xi;
        y3[i] += w3 * xi;
    }
}

#[inline]
pub(crate) fn dot(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    let mut s = 0.0;
    for (xi, yi) in x.iter().zip(y) {
        s += xi * yi;
    }
    s
}

/// One pass over `x` against four right-hand columns.
#[inline]
fn dot4(x: &[f64], y0: &[f64], y1: &[f64], y2: &[f64], y3: &[f64]) -> (f64, f64, f64, f64) {
    let len = x.len();
    let (y0, y1, y2, y3) = (&y0[..len], &y1[..len], &y2[..len], &y3[..len]);
    let (mut s0, mut s1, mut s2, mut s3) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..len {
        let xi = x[i];
        s0 += xi * y0[i];
        s1 += xi * y1[i];
        s2 += xi * y2[i];
        s3 += xi * y3[i];
    }
    (s0, s1, s2, s3)
}

/// Solves op(A) X = B (left) or X op(A) = B (right) in place of B.
/// Only the triangle named by `uplo` is referenced; with `Diag::Unit` the
/// diagonal is taken as ones. A zero diagonal entry in non-unit mode is an
/// error naming the index.
pub fn trsm(
    side: Side,
    uplo: UpLo,
    trans: Trans,
    diag: Diag,
    a: MatRef<'_>,
    mut b: MatMut<'_>,
) -> Result<()> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::DimensionMismatch {
            op: "trsm",
            expected: (n, n),
            got: (a.rows(), a.cols()),
        });
    }
    let need = match side {
        Side::Left => b.rows(),
        Side::Right => b.cols(),
    };
    if need != n {
        return Err(Error::DimensionMismatch {
            op: "trsm",
            expected: (n, n),
            got: (b.rows(), b.cols()),
        });
    }
    if diag == Diag::NonUnit {
        for i in 0..n {
            if a.get(i, i) == 0.0 {
                return Err(Error::SingularDiagonal { index: i });
            }
        }
    }

    // Effective orientation: transposing flips the triangle.
    let upper = match (uplo, trans) {
        (UpLo::Upper, Trans::No) | (UpLo::Lower, Trans::Yes) => true,
        _ => false,
    };
    let at = |i: usize, j: usize| -> f64 {
        match trans {
            Trans::No => a.get(i, j),
            Trans::Yes => a.get(j, i),
        }
    };

    match side {
        Side::Left => {
            // Solve T x = b per column; T upper -> backward, lower -> forward.
            let ncols = b.cols();
            for cidx in 0..ncols {
                let col = b.col_mut(cidx);
                if upper {
                    for i in (0..n).rev() {
                        let mut s = col[i];
                        for j in i + 1..n {
                            s -= at(i, j) * col[j];
                        }
                        col[i] = if diag == Diag::Unit { s } else { s / at(i, i) };
                    }
                } else {
                    for i in 0..n {
                        let mut s = col[i];
                        for j in 0..i {
                            s -= at(i, j) * col[j];
                        }
                        col[i] = if diag == Diag::Unit { s } else { s / at(i, i) };
                    }
                }
            }
        }
        Side::Right => {
            // X T = B: column j of X depends on previous (upper) or later
            // (lower) solved columns; axpy over contiguous columns of B.
            if upper {
                for j in 0..n {
                    let (done, rest) = b.rb_mut().split_at_col(j);
                    let done = done.rb();
                    let rows = done.rows();
                    let mut xj = rest.into_sub(0, 0, rows, 1);
                    for t in 0..j {
                        let w = at(t, j);
                        if w != 0.0 {
                            axpy(-w, done.col(t), xj.col_mut(0));
                        }
                    }
                    if diag == Diag::NonUnit {
                        let d = at(j, j);
                        for v in xj.col_mut(0) {
                            *v /= d;
                        }
                    }
                }
            } else {
                for j in (0..n).rev() {
                    let (mut head, tail) = b.rb_mut().split_at_col(j + 1);
                    let tail = tail.rb();
                    for t in j + 1..n {
                        let w = at(t, j);
                        if w != 0.0 {
                            axpy(-w, tail.col(t - j - 1), head.col_mut(j));
                        }
                    }
                    if diag == Diag::NonUnit {
                        let d = at(j, j);
                        for v in head.col_mut(j) {
                            *v /= d;
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// B <- A * B with A upper-triangular (non-unit); in place, top-down.
pub(crate) fn trmm_upper_left(a: MatRef<'_>, mut b: MatMut<'_>) {
    let k = a.rows();
    assert_eq!(a.cols(), k);
    assert_eq!(b.rows(), k);
    for j in 0..b.cols() {
        let col = b.col_mut(j);
        for i in 0..k {
            let mut s = a.get(i, i) * col[i];
            for t in i + 1..k {
                s += a.get(i, t) * col[t];
            }
            col[i] = s;
        }
    }
}

/// Writes G = A^T A into `g` (k-by-k). One triangle is computed and
/// mirrored, so G is symmetric to the bit.
pub fn syrk_into(a: MatRef<'_>, mut g: MatMut<'_>) -> Result<()> {
    let k = a.cols();
    if g.rows() != k || g.cols() != k {
        return Err(Error::DimensionMismatch { op: "syrk", expected: (k, k), got: (g.rows(), g.cols()) });
    }
    for j in 0..k {
        let aj = a.col(j);
        for i in 0..=j {
            let v = dot(a.col(i), aj);
            g.set(i, j, v);
            g.set(j, i, v);
        }
    }
    Ok(())
}

/// G = A^T A in a fresh buffer.
pub fn syrk(a: MatRef<'_>) -> DenseMatrix {
    let mut g = DenseMatrix::zeros(a.cols(), a.cols());
    syrk_into(a, g.view_mut()).expect("square output");
    g
}

pub fn transpose_into(m: MatRef<'_>, mut out: MatMut<'_>) -> Result<()> {
    if out.rows() != m.cols() || out.cols() != m.rows() {
        return Err(Error::DimensionMismatch {
            op: "transpose",
            expected: (m.cols(), m.rows()),
            got: (out.rows(), out.cols()),
        });
    }
    const BLK: usize = 64;
    for c0 in (0..m.cols()).step_by(BLK) {
        let cw = BLK.min(m.cols() - c0);
        for r0 in (0..m.rows()).step_by(BLK) {
            let rw = BLK.min(m.rows() - r0);
            for c in c0..c0 + cw {
                for r in r0..r0 + rw {
                    out.set(c, r, m.get(r, c));
                }
            }
        }
    }
    Ok(())
}

/// M^T in a fresh buffer; M untouched.
pub fn transpose_copy(m: MatRef<'_>) -> DenseMatrix {
    let mut out = DenseMatrix::zeros(m.cols(), m.rows());
    transpose_into(m, out.view_mut()).expect("fresh buffer");
    out
}
