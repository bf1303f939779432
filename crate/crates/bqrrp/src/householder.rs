//! Householder reflectors, blocked unpivoted QR, and compact-WY
//! application of the implicit Q factor.
//!
//! Reflectors follow the sign convention beta = -sign(x_0) * ||x||_2 with
//! sign(0) = +1, so every tau is 0 or lies in [1, 2] and R-diagonal signs
//! are deterministic.

use crate::blas::{dot, gemm, Trans};
use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, MatMut, MatRef};

/// Default internal panel width for the blocked QR and block application.
pub const DEFAULT_PANEL: usize = 32;

/// Generates a reflector for `x`: on return `x[0]` holds beta, `x[1..]`
/// the tail of v (its head is an implicit 1), and tau is returned.
/// (I - tau v v^T) x = beta e_1 with beta = -sign(x\[0\]) ||x||.
pub fn house_gen(x: &mut [f64]) -> f64 {
    assert!(!x.is_empty(), "empty reflector target");
    let x0 = x[0];
    let tail_norm_sq: f64 = x[1..].iter().map(|v| v * v).sum();
    if tail_norm_sq == 0.0 {
        if x0 >= 0.0 {
            // Already aligned with +e1 (covers the zero vector: tau=0, beta=0).
            return 0.0;
        }
        // Flip sign with a trivial reflector: v = e1, tau = 2, beta = -x0.
        x[0] = -x0;
        return 2.0;
    }
    let norm = (x0 * x0 + tail_norm_sq).sqrt();
    let beta = if x0 >= 0.0 { -norm } else { norm };
    let scale = x0 - beta;
    for v in &mut x[1..] {
        *v /= scale;
    }
    x[0] = beta;
    (beta - x0) / beta
}

/// Packed reflectors: unit-lower-trapezoid V below the diagonal of `v`
/// plus the scalar factors. Entries of `v` on/above the diagonal are
/// ignored.
#[derive(Clone, Copy)]
pub struct ReflectorBlock<'a> {
    v: MatRef<'a>,
    tau: &'a [f64],
}

impl<'a> ReflectorBlock<'a> {
    pub fn new(v: MatRef<'a>, tau: &'a [f64]) -> Self {
        assert!(tau.len() <= v.cols().min(v.rows()), "more factors than reflectors");
        ReflectorBlock { v, tau }
    }

    pub fn count(&self) -> usize {
        self.tau.len()
    }

    pub fn rows(&self) -> usize {
        self.v.rows()
    }

    pub fn host(&self) -> MatRef<'a> {
        self.v
    }

    pub fn tau(&self) -> &'a [f64] {
        self.tau
    }
}

/// Blocked Householder QR in place: R lands on/above the diagonal, the
/// reflector tails below it, scalar factors in `tau[..min(m, n)]`.
pub fn qr_unpivoted(mut a: MatMut<'_>, tau: &mut [f64], panel: usize) {
    let m = a.rows();
    let n = a.cols();
    let kmax = m.min(n);
    assert!(tau.len() >= kmax, "tau too short");
    assert!(panel >= 1);
    if kmax == 0 {
        return;
    }
    let nb = panel.min(kmax);
    let mut work = BlockWork::new(m, nb, n);

    let mut j = 0;
    while j < kmax {
        let w = nb.min(kmax - j);
        // Factor the panel unblocked.
        {
            let mut pan = a.sub_mut(j, j, m - j, w);
            panel_qr(pan.rb_mut(), &mut tau[j..j + w]);
        }
        // Compact-WY trailing update: C <- (I - V T V^T)^T C.
        if j + w < n {
            let (left, mut trail) = a.rb_mut().split_at_col(j + w);
            let v = left.rb().into_sub(j, j, m - j, w);
            let mut trail = trail.sub_mut(j, 0, m - j, n - j - w);
            work.load(v, &tau[j..j + w]);
            work.apply(Trans::Yes, trail.rb_mut());
        }
        j += w;
    }
}

/// Unblocked panel factorization.
fn panel_qr(mut a: MatMut<'_>, tau: &mut [f64]) {
    let m = a.rows();
    let w = a.cols();
    for j in 0..w.min(m) {
        let t = house_gen(&mut a.col_mut(j)[j..]);
        tau[j] = t;
        if t != 0.0 && j + 1 < w {
            // Apply H_j to the remaining panel columns.
            let (vcol, mut rest) = a.rb_mut().split_at_col(j + 1);
            let v = &vcol.col(j)[j..];
            for c in 0..w - j - 1 {
                let col = &mut rest.col_mut(c)[j..];
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
    }
}

/// Scratch for block application: an explicit copy of the current V panel
/// (unit diagonal written out), the triangular T factor, and the W
/// intermediate. Reused across blocks.
struct BlockWork {
    v: DenseMatrix,
    t: DenseMatrix,
    w: DenseMatrix,
    vk: usize,
    vrows: usize,
}

impl BlockWork {
    fn new(max_rows: usize, nb: usize, max_cols: usize) -> Self {
        BlockWork {
            v: DenseMatrix::zeros(max_rows, nb),
            t: DenseMatrix::zeros(nb, nb),
            w: DenseMatrix::zeros(nb, max_cols),
            vk: 0,
            vrows: 0,
        }
    }

    /// Copies the unit-lower-trapezoid block out of `v` and forms T with
    /// the forward columnwise recurrence.
    fn load(&mut self, v: MatRef<'_>, tau: &[f64]) {
        let rows = v.rows();
        let k = tau.len();
        self.vk = k;
        self.vrows = rows;
        let vstride = self.v.rows();
        for c in 0..k {
            let dst = &mut self.v.as_mut_slice()[c * vstride..c * vstride + rows];
            dst[..c].fill(0.0);
            dst[c] = 1.0;
            dst[c + 1..rows].copy_from_slice(&v.col(c)[c + 1..rows]);
        }
        // T(0:i, i) = -tau_i * T(0:i, 0:i) * (V^T v_i); T(i, i) = tau_i.
        for i in 0..k {
            let vi = &self.v.as_slice()[i * vstride..i * vstride + rows];
            for c in 0..i {
                let vc = &self.v.as_slice()[c * vstride..c * vstride + rows];
                self.t.set(c, i, dot(vc, vi));
            }
            let ti = tau[i];
            // Triangular matvec in place of column i of T: top-down, so
            // each row reads only not-yet-overwritten entries below it.
            for r in 0..i {
                let mut s = 0.0;
                for c in r..i {
                    s += self.t.get(r, c) * self.t.get(c, i);
                }
                self.t.set(r, i, -ti * s);
            }
            self.t.set(i, i, ti);
        }
    }

    /// C <- (I - V T V^T)^(T?) C using the loaded block.
    fn apply(&mut self, trans: Trans, c: MatMut<'_>) {
        let k = self.vk;
        let rows = self.vrows;
        if k == 0 || c.cols() == 0 {
            return;
        }
        debug_assert_eq!(c.rows(), rows);
        let v = self.v.sub(0, 0, rows, k);
        let mut w = self.w.sub_mut(0, 0, k, c.cols());
        // W = V^T C
        gemm(1.0, v, Trans::Yes, c.rb(), Trans::No, 0.0, w.rb_mut()).expect("conformable");
        // W <- op(T) W
        let t = self.t.sub(0, 0, k, k);
        for j in 0..w.cols() {
            let col = w.col_mut(j);
            match trans {
                Trans::Yes => {
                    // T^T is lower triangular: bottom-up accumulation.
                    for i in (0..k).rev() {
                        let mut s = 0.0;
                        for r in 0..=i {
                            s += t.get(r, i) * col[r];
                        }
                        col[i] = s;
                    }
                }
                Trans::No => {
                    for i in 0..k {
                        let mut s = 0.0;
                        for r in i..k {
                            s += t.get(i, r) * col[r];
                        }
                        col[i] = s;
                    }
                }
            }
        }
        // C <- C - V W
        gemm(-1.0, v, Trans::No, w.rb(), Trans::No, 1.0, c).expect("conformable");
    }
}

/// C <- Q^T C = H_k ... H_1 C, blocked WY form.
pub fn apply_qt(q: &ReflectorBlock<'_>, c: MatMut<'_>) -> Result<()> {
    apply_block(q, Trans::Yes, c)
}

/// C <- Q C = H_1 ... H_k C.
pub fn apply_q(q: &ReflectorBlock<'_>, c: MatMut<'_>) -> Result<()> {
    apply_block(q, Trans::No, c)
}

fn apply_block(q: &ReflectorBlock<'_>, trans: Trans, mut c: MatMut<'_>) -> Result<()> {
    let m = q.rows();
    if c.rows() != m {
        return Err(Error::DimensionMismatch {
            op: "apply_q",
            expected: (m, c.cols()),
            got: (c.rows(), c.cols()),
        });
    }
    let k = q.count();
    if k == 0 || c.cols() == 0 {
        return Ok(());
    }
    let nb = DEFAULT_PANEL.min(k);
    let mut work = BlockWork::new(m, nb, c.cols());
    let blocks: Vec<usize> = (0..k).step_by(nb).collect();
    let order: Box<dyn Iterator<Item = usize>> = match trans {
        Trans::Yes => Box::new(blocks.into_iter()),
        Trans::No => Box::new(blocks.into_iter().rev()),
    };
    for j in order {
        let w = nb.min(k - j);
        let v = q.host().sub(j, j, m - j, w);
        work.load(v, &q.tau()[j..j + w]);
        work.apply(trans, c.sub_mut(j, 0, m - j, c.cols()));
    }
    Ok(())
}

/// Applies the reflectors to the leading `ncols` identity columns,
/// yielding an explicit orthonormal m-by-ncols factor.
pub fn build_explicit_q(q: &ReflectorBlock<'_>, ncols: usize) -> Result<DenseMatrix> {
    if ncols > q.rows() {
        return Err(Error::DimensionMismatch {
            op: "explicit_q",
            expected: (q.rows(), q.rows()),
            got: (q.rows(), ncols),
        });
    }
    let mut e = DenseMatrix::eye(q.rows(), ncols);
    apply_q(q, e.view_mut())?;
    Ok(e)
}
