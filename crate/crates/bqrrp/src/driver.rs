//! The blocked randomized QRCP driver: sketch once, then per block run
//! pivoted QRCP on the sketch, the rank gate, one merged column
//! permutation, panel QR, the transposed-Q application, and the
//! deterministic sample update, all in the storage of the input matrix
//! plus small workspace buffers. Output layout matches the standard LAPACK pivoted-QR
//! contract: R on/above the diagonal, reflectors below, scalar factors
//! and a one-based pivot vector alongside.

use crate::blas::{gemm, trsm, Diag, Side, Trans, UpLo};
use crate::error::{Error, Result};
use crate::householder::{apply_qt, build_explicit_q, ReflectorBlock};
use crate::matrix::{DenseMatrix, MatMut, MatRef, UNIT_ROUNDOFF};
use crate::pivot::{col_perm_gather, col_perm_sequential_consuming, vec_perm, PivotVector};
use crate::qr_tall::{qr_tall_cqr, qr_tall_hqr, TallWorkspace};
use crate::qrcp_wide::{qrcp_wide_luqr, qrcp_wide_ref, WideWorkspace};
use crate::sketch::{sketch_apply_into, GaussianSketchOp};
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PanelVariant {
    /// Householder QR over the full panel.
    Hqr,
    /// Preconditioned Cholesky QR with Householder reconstruction.
    Cqr,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WideVariant {
    /// Pivots from row-pivoted LU of the transposed sketch, R from
    /// unpivoted QR.
    Luqr,
    /// Greedy column-norm QRCP on the sketch.
    Ref,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PermVariant {
    /// In-place column swaps, O(1) extra matrix storage.
    Sequential,
    /// Gather into a scratch buffer, column loop independent.
    Gather,
}

#[derive(Clone, Debug)]
pub struct BqrrpConfig {
    /// Block size b.
    pub block: usize,
    /// Sampling factor; sketch rows d = ceil(gamma * b).
    pub gamma: f64,
    pub panel_variant: PanelVariant,
    pub wide_variant: WideVariant,
    pub perm_variant: PermVariant,
    /// Scales the rank-gate threshold tol * u * max(d, w) * |R_sk(0,0)|.
    pub rank_tol_factor: f64,
    pub seed: u64,
}

impl Default for BqrrpConfig {
    fn default() -> Self {
        BqrrpConfig {
            block: 64,
            gamma: 1.0,
            panel_variant: PanelVariant::Hqr,
            wide_variant: WideVariant::Luqr,
            perm_variant: PermVariant::Sequential,
            rank_tol_factor: 1.0,
            seed: 0,
        }
    }
}

impl BqrrpConfig {
    pub fn with_block(block: usize) -> Self {
        BqrrpConfig { block, ..Default::default() }
    }

    /// Effective sketch row count and any configuration warnings.
    /// Oversampling buys nothing under the LU-based wide QRCP, so gamma is
    /// pinned to 1 there.
    fn resolve(&self, rows: usize) -> Result<(usize, Vec<String>)> {
        if self.block < 1 {
            return Err(Error::Config("block size must be at least 1".into()));
        }
        if !(self.gamma >= 1.0) {
            return Err(Error::Config(format!("gamma must be >= 1, got {}", self.gamma)));
        }
        if !(self.rank_tol_factor > 0.0) {
            return Err(Error::Config("rank_tol_factor must be positive".into()));
        }
        let mut warnings = Vec::new();
        let gamma_eff = if self.wide_variant == WideVariant::Luqr && self.gamma > 1.0 {
            warnings.push(format!(
                "gamma={} ignored: the LU-based wide QRCP pins gamma to 1",
                self.gamma
            ));
            1.0
        } else {
            self.gamma
        };
        let d = (gamma_eff * self.block as f64).ceil() as usize;
        if d > rows {
            return Err(Error::Config(format!(
                "sketch rows d={d} exceed matrix rows m={rows}"
            )));
        }
        Ok((d, warnings))
    }
}

/// Wall-clock nanoseconds per subroutine for one driver iteration.
#[derive(Clone, Copy, Debug, Default)]
pub struct IterationTimings {
    pub qrcp_wide: u64,
    pub tri_rank: u64,
    pub col_perm: u64,
    pub qr_tall: u64,
    pub apply_trans_q: u64,
    pub sample_update: u64,
    pub other: u64,
}

#[derive(Clone, Debug, Default)]
pub struct Diagnostics {
    pub per_iteration: Vec<IterationTimings>,
    pub total_ns: u64,
    /// Iterations where the Cholesky panel path fell back to Householder.
    pub fallback_iterations: Vec<usize>,
    pub warnings: Vec<String>,
}

pub struct BqrrpOutput {
    /// Inferred numerical rank l.
    pub rank: usize,
    /// R on/above the diagonal for the first `rank` rows; reflector tails
    /// below the diagonal of the first `rank` columns.
    pub factored: DenseMatrix,
    /// Scalar reflector factors, length min(m, n); entries beyond `rank`
    /// are zero.
    pub tau: Vec<f64>,
    /// One-based gather pivots, length n.
    pub pivots: PivotVector,
    pub diagnostics: Diagnostics,
}

impl BqrrpOutput {
    /// The implicit Q: `rank` reflectors over the factored storage.
    pub fn reflectors(&self) -> ReflectorBlock<'_> {
        ReflectorBlock::new(
            self.factored.sub(0, 0, self.factored.rows(), self.rank),
            &self.tau[..self.rank],
        )
    }

    /// Explicit upper-trapezoid R (rank-by-n, zeros below the diagonal).
    pub fn r_factor(&self) -> DenseMatrix {
        let n = self.factored.cols();
        let mut r = DenseMatrix::zeros(self.rank, n);
        for c in 0..n {
            for row in 0..self.rank.min(c + 1) {
                r.set(row, c, self.factored.get(row, c));
            }
        }
        r
    }
}

/// Largest prefix of the sketch triangle whose diagonal clears the
/// relative threshold tol * u * max(d, w) * |R(0,0)|; scanning stops at
/// the first failure.
pub fn tri_rank(r_sk: MatRef<'_>, k_max: usize, tol_factor: f64) -> usize {
    if k_max == 0 {
        return 0;
    }
    let head = r_sk.get(0, 0).abs();
    if !(head > 0.0) {
        return 0;
    }
    let dim = r_sk.rows().max(r_sk.cols()) as f64;
    let threshold = tol_factor * UNIT_ROUNDOFF * dim * head;
    let mut k = 0;
    while k < k_max {
        if r_sk.get(k, k).abs() > threshold {
            k += 1;
        } else {
            break;
        }
    }
    k
}

/// In-place sketch refresh for the next iteration: the leading block of
/// the window becomes triu(R_sk11) R11^{-1} (sub-diagonal zeroed), the
/// trailing top block becomes R_sk12 - triu(R_sk11) R11^{-1} R12, and the
/// trailing bottom block keeps R_sk22 with its sub-diagonal zeroed.
pub fn sample_update(
    m_sk_window: MatMut<'_>,
    r11: MatRef<'_>,
    r12: MatRef<'_>,
    block: usize,
) -> Result<()> {
    let d = m_sk_window.rows();
    let w = m_sk_window.cols();
    if r11.rows() != block || r11.cols() != block {
        return Err(Error::DimensionMismatch {
            op: "sample_update",
            expected: (block, block),
            got: (r11.rows(), r11.cols()),
        });
    }
    if w < block || r12.rows() != block || r12.cols() != w - block {
        return Err(Error::DimensionMismatch {
            op: "sample_update",
            expected: (block, w.saturating_sub(block)),
            got: (r12.rows(), r12.cols()),
        });
    }
    let (mut lead, mut trail) = m_sk_window.split_at_col(block);

    // X = triu(R_sk11) R11^{-1} over R_sk11's space, sub-diagonal zeroed
    // first so the solve sees the triangle, not reflector leftovers.
    for c in 0..block {
        for r in c + 1..d {
            lead.set(r, c, 0.0);
        }
    }
    trsm(Side::Right, UpLo::Upper, Trans::No, Diag::NonUnit, r11, lead.sub_mut(0, 0, block, block))?;

    // Top of the trailing window: R_sk12 - X R12.
    let x = lead.sub(0, 0, block, block);
    gemm(-1.0, x, Trans::No, r12, Trans::No, 1.0, trail.sub_mut(0, 0, block, w - block))?;

    // Bottom of the trailing window: clear below the trapezoid diagonal.
    if d > block {
        for c in 0..w - block {
            for r in (block + c + 1)..d {
                trail.set(r, c, 0.0);
            }
        }
    }
    Ok(())
}

/// Factors `m` in place. See the module docs for the loop structure.
pub fn bqrrp_factor(m: DenseMatrix, cfg: &BqrrpConfig) -> Result<BqrrpOutput> {
    let started = Instant::now();
    let rows = m.rows();
    let n = m.cols();
    if rows == 0 || n == 0 {
        return Err(Error::Config("input must have at least one row and column".into()));
    }
    let (d, warnings) = cfg.resolve(rows)?;
    let minmn = rows.min(n);

    let mut mat = m;
    let mut tau = vec![0.0; minmn];
    let mut j_out: Vec<usize> = (1..=n).collect();
    let mut diagnostics = Diagnostics { warnings, ..Default::default() };

    let sketch_op = GaussianSketchOp::new(d, rows, cfg.seed);
    let mut m_sk = DenseMatrix::zeros(d, n);
    sketch_apply_into(&sketch_op, mat.view(), m_sk.view_mut())?;

    let mut wide_ws = WideWorkspace::new(d, n);
    let mut tall_ws = match cfg.panel_variant {
        PanelVariant::Cqr => Some(TallWorkspace::new(rows, cfg.block)),
        PanelVariant::Hqr => None,
    };
    let mut gather_scratch = match cfg.perm_variant {
        PermVariant::Gather => Some(DenseMatrix::zeros(rows, n)),
        PermVariant::Sequential => None,
    };

    let iters = n.div_ceil(cfg.block);

    for i in 0..iters {
        let iter_start = Instant::now();
        let mut timings = IterationTimings::default();
        let s = i * cfg.block;
        let c = n.min((i + 1) * cfg.block);
        let w = n - s;
        let k_max = cfg.block.min(w).min(rows - s);
        debug_assert!(k_max >= 1, "row-exhausted iterations terminate earlier");

        // Pivoted QRCP on the current sketch window.
        let t0 = Instant::now();
        let mut j_sk = {
            let window = m_sk.sub_mut(0, s, d, w);
            match cfg.wide_variant {
                WideVariant::Luqr => qrcp_wide_luqr(window, &mut wide_ws)?,
                WideVariant::Ref => qrcp_wide_ref(window, &mut wide_ws)?,
            }
        };
        timings.qrcp_wide = t0.elapsed().as_nanos() as u64;

        let t0 = Instant::now();
        let k = tri_rank(m_sk.sub(0, s, d, w), k_max, cfg.rank_tol_factor);
        timings.tri_rank = t0.elapsed().as_nanos() as u64;

        // One permutation of M(:, s:) covers both the computed R rows and
        // the working submatrix; then fold the local pivots into J.
        let t0 = Instant::now();
        match cfg.perm_variant {
            PermVariant::Sequential => {
                let mut scrambled = j_sk.clone();
                col_perm_sequential_consuming(mat.sub_mut(0, s, rows, w), &mut scrambled)?;
            }
            PermVariant::Gather => {
                let scratch = gather_scratch.as_mut().expect("allocated for gather runs");
                let mut window = scratch.sub_mut(0, 0, rows, w);
                col_perm_gather(mat.sub(0, s, rows, w), &j_sk, window.rb_mut())?;
                mat.sub_mut(0, s, rows, w).copy_from(window.rb());
            }
        }
        vec_perm(&mut j_out[s..], &mut j_sk)?;
        timings.col_perm = t0.elapsed().as_nanos() as u64;

        // Early exit: an all-zero leading panel column means the trailing
        // matrix is numerically exhausted.
        if mat.sub(s, s, rows - s, 1).max_abs() == 0.0 || k == 0 {
            timings.other =
                (iter_start.elapsed().as_nanos() as u64).saturating_sub(timings_named(&timings));
            diagnostics.per_iteration.push(timings);
            diagnostics.total_ns = started.elapsed().as_nanos() as u64;
            return finish(mat, tau, j_out, s, diagnostics);
        }

        // Panel QR on M(s:, s:c).
        let t0 = Instant::now();
        {
            let panel_cols = c - s;
            let tau_panel = &mut tau[s..(s + panel_cols.min(rows - s)).min(minmn)];
            match cfg.panel_variant {
                PanelVariant::Hqr => {
                    qr_tall_hqr(mat.sub_mut(s, s, rows - s, panel_cols), tau_panel);
                }
                PanelVariant::Cqr => {
                    let ws = tall_ws.as_mut().expect("allocated for cqr runs");
                    let (mut m_cols, m_sk_ro) = (mat.view_mut(), m_sk.view());
                    let panel = m_cols.sub_mut(s, s, rows - s, panel_cols);
                    let r_sk = m_sk_ro.into_sub(0, s, d, panel_cols);
                    let outcome = qr_tall_cqr(panel, r_sk, k, tau_panel, ws)?;
                    if outcome.used_fallback {
                        diagnostics.fallback_iterations.push(i);
                    }
                }
            }
        }
        timings.qr_tall = t0.elapsed().as_nanos() as u64;

        let terminal = i == iters - 1 || k < k_max || s + k == rows;
        if terminal {
            // Reflectors beyond k were computed but are not part of Q.
            for t in tau.iter_mut().take((s + (c - s).min(rows - s)).min(minmn)).skip(s + k) {
                *t = 0.0;
            }
        }

        // Apply Q^T across the trailing columns; the first k rows become
        // R12, the rest the next working submatrix.
        let t0 = Instant::now();
        if c < n {
            let (left, right) = mat.view_mut().split_at_col(c);
            let q = ReflectorBlock::new(left.rb().into_sub(s, s, rows - s, k), &tau[s..s + k]);
            apply_qt(&q, right.into_sub(s, 0, rows - s, n - c))?;
        }
        timings.apply_trans_q = t0.elapsed().as_nanos() as u64;

        if terminal {
            timings.other =
                (iter_start.elapsed().as_nanos() as u64).saturating_sub(timings_named(&timings));
            diagnostics.per_iteration.push(timings);
            diagnostics.total_ns = started.elapsed().as_nanos() as u64;
            return finish(mat, tau, j_out, s + k, diagnostics);
        }

        // Deterministic sketch refresh (full-rank iterations only).
        let t0 = Instant::now();
        {
            let window = m_sk.sub_mut(0, s, d, w);
            let r11 = mat.sub(s, s, cfg.block, cfg.block);
            let r12 = mat.sub(s, c, cfg.block, n - c);
            sample_update(window, r11, r12, cfg.block)?;
        }
        timings.sample_update = t0.elapsed().as_nanos() as u64;

        timings.other =
            (iter_start.elapsed().as_nanos() as u64).saturating_sub(timings_named(&timings));
        diagnostics.per_iteration.push(timings);
    }
    unreachable!("the final iteration always terminates the loop");
}

fn timings_named(t: &IterationTimings) -> u64 {
    t.qrcp_wide + t.tri_rank + t.col_perm + t.qr_tall + t.apply_trans_q + t.sample_update
}

fn finish(
    factored: DenseMatrix,
    tau: Vec<f64>,
    j_out: Vec<usize>,
    rank: usize,
    diagnostics: Diagnostics,
) -> Result<BqrrpOutput> {
    let pivots = PivotVector::from_one_based(j_out)
        .expect("pivot bookkeeping preserves the permutation");
    Ok(BqrrpOutput { rank, factored, tau, pivots, diagnostics })
}

/// Applies the `rank` reflectors to the leading `ncols` identity columns.
pub fn explicit_q(out: &BqrrpOutput, ncols: usize) -> Result<DenseMatrix> {
    build_explicit_q(&out.reflectors(), ncols)
}

/// || M_orig(:, J) - Q(:, 0:l) R(0:l, :) ||_F / || M_orig ||_F, with the
/// zero matrix mapping to 0 by convention.
pub fn reconstruct_residual(m_orig: &DenseMatrix, out: &BqrrpOutput) -> Result<f64> {
    if m_orig.rows() != out.factored.rows() || m_orig.cols() != out.factored.cols() {
        return Err(Error::DimensionMismatch {
            op: "reconstruct_residual",
            expected: (out.factored.rows(), out.factored.cols()),
            got: (m_orig.rows(), m_orig.cols()),
        });
    }
    let norm = m_orig.frobenius_norm();
    if norm == 0.0 {
        return Ok(0.0);
    }
    let rows = m_orig.rows();
    let n = m_orig.cols();
    let l = out.rank;
    let mut rebuilt = DenseMatrix::zeros(rows, n);
    if l > 0 {
        let q = explicit_q(out, l)?;
        let r = out.r_factor();
        gemm(1.0, q.view(), Trans::No, r.view(), Trans::No, 0.0, rebuilt.view_mut())?;
    }
    let mut err = 0.0f64;
    for c in 0..n {
        let src = out.pivots.source(c);
        for row in 0..rows {
            let diff = rebuilt.get(row, c) - m_orig.get(row, src);
            err += diff * diff;
        }
    }
    Ok(err.sqrt() / norm)
}
