//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (run with `-- --nocapture` to see them on success). Criteria run
//! serially under a shared lock; the storage criterion additionally uses
//! the counting allocator below to measure peak live auxiliary memory.

use bqrrp::driver::{
    bqrrp_factor, explicit_q, reconstruct_residual, sample_update, BqrrpConfig, PanelVariant,
    PermVariant,
};
use bqrrp::matgen::{gen_gaussian, gen_kahan, KahanParams, KahanVariant};
use bqrrp::matrix::UNIT_ROUNDOFF;
use bqrrp::pivot::{col_perm_gather, col_perm_sequential, piv_lu_to_qr, PivotVector};
use bqrrp::quality::{diag_over_sigma, trailing_frobenius_profile};
use bqrrp::DenseMatrix;
use std::alloc::{GlobalAlloc, Layout, System};
use std::sync::atomic::{AtomicIsize, Ordering};
use std::sync::{Mutex, MutexGuard, PoisonError};
use std::time::Instant;

// ---------------------------------------------------------------------
// Counting allocator: tracks live bytes and the peak since the last reset.

static LIVE: AtomicIsize = AtomicIsize::new(0);
static PEAK: AtomicIsize = AtomicIsize::new(0);

struct CountingAlloc;

unsafe impl GlobalAlloc for CountingAlloc {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        let p = System.alloc(layout);
        if !p.is_null() {
            let live = LIVE.fetch_add(layout.size() as isize, Ordering::SeqCst)
                + layout.size() as isize;
            PEAK.fetch_max(live, Ordering::SeqCst);
        }
        p
    }

    unsafe fn dealloc(&self, p: *mut u8, layout: Layout) {
        LIVE.fetch_sub(layout.size() as isize, Ordering::SeqCst);
        System.dealloc(p, layout);
    }

    unsafe fn realloc(&self, p: *mut u8, layout: Layout, new_size: usize) -> *mut u8 {
        let q = System.realloc(p, layout, new_size);
        if !q.is_null() {
            let delta = new_size as isize - layout.size() as isize;
            let live = LIVE.fetch_add(delta, Ordering::SeqCst) + delta;
            PEAK.fetch_max(live, Ordering::SeqCst);
        }
        q
    }
}

#[global_allocator]
static ALLOC: CountingAlloc = CountingAlloc;

// ---------------------------------------------------------------------

static GATE: Mutex<()> = Mutex::new(());

fn lock() -> MutexGuard<'static, ()> {
    GATE.lock().unwrap_or_else(PoisonError::into_inner)
}

fn criterion<F: FnOnce() -> Result<String, String>>(name: &str, f: F) {
    let _g = lock();
    match f() {
        Ok(detail) => println!("[PASS] {name}: {detail}"),
        Err(detail) => {
            println!("[FAIL] {name}: {detail}");
            panic!("{name}: {detail}");
        }
    }
}

fn orthogonality_error(out: &bqrrp::BqrrpOutput) -> Result<f64, String> {
    let m = out.factored.rows();
    let q = explicit_q(out, m).map_err(|e| e.to_string())?;
    let g = bqrrp::blas::syrk(q.view());
    let mut err = 0.0f64;
    for j in 0..m {
        for i in 0..m {
            let want = if i == j { 1.0 } else { 0.0 };
            err += (g.get(i, j) - want).powi(2);
        }
    }
    Ok(err.sqrt())
}

/// Reconstruction suite over shapes, block sizes, and both panel and
/// permutation variants.
#[test]
fn acceptance_reconstruction_suite() {
    criterion("reconstruction-suite", || {
        let started = Instant::now();
        let mut worst_res = 0.0f64;
        let mut worst_orth = 0.0f64;
        let mut runs = 0usize;
        for &(m, n) in &[(256usize, 256usize), (256, 64), (64, 256), (100, 100)] {
            let m0 = gen_gaussian(m, n, (m * 1000 + n) as u64);
            for &b in &[8usize, 16, 32, 64] {
                if b > m {
                    continue; // d = b must not exceed the row count
                }
                for panel in [PanelVariant::Hqr, PanelVariant::Cqr] {
                    for perm in [PermVariant::Sequential, PermVariant::Gather] {
                        let cfg = BqrrpConfig {
                            block: b,
                            panel_variant: panel,
                            perm_variant: perm,
                            seed: 11,
                            ..Default::default()
                        };
                        let out = bqrrp_factor(m0.clone(), &cfg).map_err(|e| e.to_string())?;
                        if PivotVector::from_one_based(out.pivots.as_one_based().to_vec())
                            .is_err()
                        {
                            return Err(format!("invalid permutation at {m}x{n} b={b}"));
                        }
                        let res = reconstruct_residual(&m0, &out).map_err(|e| e.to_string())?;
                        let orth = orthogonality_error(&out)?;
                        if res > 1e-11 {
                            return Err(format!(
                                "residual {res:.3e} > 1e-11 at {m}x{n} b={b} {panel:?} {perm:?}"
                            ));
                        }
                        if orth > 1e-11 {
                            return Err(format!(
                                "orthogonality {orth:.3e} > 1e-11 at {m}x{n} b={b} {panel:?} {perm:?}"
                            ));
                        }
                        worst_res = worst_res.max(res);
                        worst_orth = worst_orth.max(orth);
                        runs += 1;
                    }
                }
            }
        }
        let secs = started.elapsed().as_secs_f64();
        if secs >= 60.0 {
            return Err(format!("suite took {secs:.1}s, budget is 60s"));
        }
        Ok(format!(
            "{runs} runs, worst residual {worst_res:.2e}, worst orthogonality {worst_orth:.2e}, {secs:.1}s"
        ))
    });
}

/// (a) single-panel collapse, (b) sequential vs gather permutation,
/// (c) LU swap replay vs pivot conversion, (d) the dense sample-update
/// bracket.
#[test]
fn acceptance_oracle_equivalence() {
    criterion("oracle-equivalence", || {
        let u = UNIT_ROUNDOFF;

        // (a) b >= n: the driver's R is the unpivoted QR of the permuted
        // input, elementwise within 8u on a small-integer matrix.
        let (m, n) = (48usize, 24usize);
        let mut m0 = DenseMatrix::zeros(m, n);
        let g = gen_gaussian(m, n, 404);
        for c in 0..n {
            for r in 0..m {
                m0.set(r, c, (3.0 * g.get(r, c)).round().clamp(-6.0, 6.0));
            }
        }
        for block in [n, n + 8] {
            let cfg = BqrrpConfig { block, seed: 7, ..Default::default() };
            let out = bqrrp_factor(m0.clone(), &cfg).map_err(|e| e.to_string())?;
            let mut permuted = DenseMatrix::zeros(m, n);
            col_perm_gather(m0.view(), &out.pivots, permuted.view_mut())
                .map_err(|e| e.to_string())?;
            let mut tau = vec![0.0; n];
            bqrrp::householder::qr_unpivoted(permuted.view_mut(), &mut tau, 32);
            for c in 0..n {
                for r in 0..=c.min(out.rank - 1) {
                    let a = out.factored.get(r, c);
                    let b = permuted.get(r, c);
                    if (a - b).abs() > 8.0 * u * b.abs().max(1.0) {
                        return Err(format!(
                            "single-panel R mismatch at ({r},{c}) b={block}: {a} vs {b}"
                        ));
                    }
                }
            }
        }

        // (b) sequential == gather: exhaustive n <= 6 plus 200 random n <= 8.
        for n in 1..=6usize {
            for perm in permutations(n) {
                let j = PivotVector::from_one_based(perm).map_err(|e| e.to_string())?;
                let mat = gen_gaussian(3, n, n as u64 + 50);
                let mut seq = mat.clone();
                col_perm_sequential(seq.view_mut(), &j).map_err(|e| e.to_string())?;
                let mut gat = DenseMatrix::zeros(3, n);
                col_perm_gather(mat.view(), &j, gat.view_mut()).map_err(|e| e.to_string())?;
                for c in 0..n {
                    if seq.view().col(c) != gat.view().col(c) {
                        return Err(format!("perm mismatch n={n} J={:?}", j.as_one_based()));
                    }
                }
            }
        }
        let mut rng_state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            rng_state ^= rng_state << 13;
            rng_state ^= rng_state >> 7;
            rng_state ^= rng_state << 17;
            rng_state
        };
        for _ in 0..200 {
            let n = 1 + (next() % 8) as usize;
            let mut order: Vec<usize> = (1..=n).collect();
            for i in (1..n).rev() {
                let j = (next() % (i as u64 + 1)) as usize;
                order.swap(i, j);
            }
            let j = PivotVector::from_one_based(order).map_err(|e| e.to_string())?;
            let mat = gen_gaussian(4, n, next());
            let mut seq = mat.clone();
            col_perm_sequential(seq.view_mut(), &j).map_err(|e| e.to_string())?;
            let mut gat = DenseMatrix::zeros(4, n);
            col_perm_gather(mat.view(), &j, gat.view_mut()).map_err(|e| e.to_string())?;
            for c in 0..n {
                if seq.view().col(c) != gat.view().col(c) {
                    return Err("random perm mismatch".to_string());
                }
            }
        }

        // (c) pivot conversion composed with gather reproduces the swap
        // replay on the identity, exhaustive over swap lists n <= 6. The
        // LU swaps act on rows of the transposed sketch, i.e. on columns
        // of the sketch, so the replay applies them to identity columns.
        for n in 1..=6usize {
            let mut swaps = vec![0usize; n];
            enumerate_swap_lists(n, 0, &mut swaps, &mut |swaps| {
                let mut p = DenseMatrix::identity(n);
                for (i, &s) in swaps.iter().enumerate() {
                    p.view_mut().swap_cols(i, s - 1);
                }
                let j = piv_lu_to_qr(swaps, n).expect("valid swap list");
                let mut gathered = DenseMatrix::zeros(n, n);
                col_perm_gather(DenseMatrix::identity(n).view(), &j, gathered.view_mut())
                    .expect("shapes match");
                for c in 0..n {
                    for r in 0..n {
                        assert_eq!(
                            gathered.get(r, c),
                            p.get(r, c),
                            "swap replay mismatch n={n} swaps={swaps:?}"
                        );
                    }
                }
            });
        }

        // (d) sample_update against the dense bracket on 100 random
        // instances.
        for trial in 0..100u64 {
            sample_update_oracle_once(trial)?;
        }

        Ok("single-panel, permutation, swap-replay, and sample-update oracles agree".to_string())
    });
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 1 {
        return vec![vec![1]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n);
            out.push(q);
        }
    }
    out
}

/// All LAPACK-valid swap lists: swaps[i] in i+1..=n.
fn enumerate_swap_lists(
    n: usize,
    at: usize,
    swaps: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    if at == n {
        visit(swaps);
        return;
    }
    for s in at + 1..=n {
        swaps[at] = s;
        enumerate_swap_lists(n, at + 1, swaps, visit);
    }
}

fn sample_update_oracle_once(trial: u64) -> Result<(), String> {
    let (d, b, n) = (8usize, 4usize, 24usize);
    let mut window = gen_gaussian(d, n, 7000 + trial);
    let mut r11 = DenseMatrix::zeros(b, b);
    let g = gen_gaussian(b, b, 8000 + trial);
    for j in 0..b {
        for i in 0..=j {
            r11.set(i, j, if i == j { 2.0 + g.get(i, j).abs() } else { g.get(i, j) });
        }
    }
    let r12 = gen_gaussian(b, n - b, 9000 + trial);

    let mut sk11 = DenseMatrix::zeros(b, b);
    for j in 0..b {
        for i in 0..=j {
            sk11.set(i, j, window.get(i, j));
        }
    }
    let sk12 = window.sub(0, b, b, n - b).to_owned();
    let mut x = sk11.clone();
    bqrrp::blas::trsm(
        bqrrp::blas::Side::Right,
        bqrrp::blas::UpLo::Upper,
        bqrrp::blas::Trans::No,
        bqrrp::blas::Diag::NonUnit,
        r11.view(),
        x.view_mut(),
    )
    .map_err(|e| e.to_string())?;
    let mut expect = sk12.clone();
    bqrrp::blas::gemm(
        -1.0,
        x.view(),
        bqrrp::blas::Trans::No,
        r12.view(),
        bqrrp::blas::Trans::No,
        1.0,
        expect.view_mut(),
    )
    .map_err(|e| e.to_string())?;

    sample_update(window.view_mut(), r11.view(), r12.view(), b).map_err(|e| e.to_string())?;

    let scale = expect
        .max_abs()
        .max(sk12.max_abs())
        .max(x.max_abs() * r12.max_abs() * b as f64);
    let tol = 8.0 * UNIT_ROUNDOFF * scale;
    for c in 0..n - b {
        for r in 0..b {
            let got = window.get(r, b + c);
            if (got - expect.get(r, c)).abs() > tol {
                return Err(format!(
                    "sample_update trial {trial} ({r},{c}): {got} vs {}",
                    expect.get(r, c)
                ));
            }
        }
    }
    Ok(())
}

/// Cholesky-QR and Householder panel paths both meet the residual bound on
/// sketch-preconditioned panels; reconstruction round-trips.
#[test]
fn acceptance_panel_path_equivalence() {
    criterion("panel-path-equivalence", || {
        let (m, b) = (256usize, 16usize);
        let residual_bound = 100.0 * m as f64 * UNIT_ROUNDOFF;
        let round_trip_bound = 50.0 * m as f64 * UNIT_ROUNDOFF;
        let mut worst = 0.0f64;
        for trial in 0..100u64 {
            // Oversampled sketch (gamma = 2) keeps the preconditioner's
            // condition number tail in check across 100 trials.
            let d = 2 * b;
            let panel0 = gen_gaussian(m, b, 5000 + trial);
            let s = bqrrp::sketch::GaussianSketchOp::new(d, m, 6000 + trial);
            let mut sk = bqrrp::sketch::sketch_apply(&s, panel0.view()).map_err(|e| e.to_string())?;
            let mut wws = bqrrp::qrcp_wide::WideWorkspace::new(d, b);
            let j = bqrrp::qrcp_wide::qrcp_wide_luqr(sk.view_mut(), &mut wws)
                .map_err(|e| e.to_string())?;
            let mut panel = DenseMatrix::zeros(m, b);
            col_perm_gather(panel0.view(), &j, panel.view_mut()).map_err(|e| e.to_string())?;
            let permuted = panel.clone();

            let mut cqr_panel = panel.clone();
            let mut tau_c = vec![0.0; b];
            let mut ws = bqrrp::qr_tall::TallWorkspace::new(m, b);
            let outcome = bqrrp::qr_tall::qr_tall_cqr(
                cqr_panel.view_mut(),
                sk.sub(0, 0, b, b),
                b,
                &mut tau_c,
                &mut ws,
            )
            .map_err(|e| e.to_string())?;
            if outcome.used_fallback {
                return Err(format!("unexpected fallback at trial {trial}"));
            }
            let res_c = panel_residual(&permuted, &cqr_panel, &tau_c, b)?;

            let mut hqr_panel = panel;
            let mut tau_h = vec![0.0; b];
            bqrrp::qr_tall::qr_tall_hqr(hqr_panel.view_mut(), &mut tau_h);
            let res_h = panel_residual(&permuted, &hqr_panel, &tau_h, b)?;

            if res_c > residual_bound || res_h > residual_bound {
                return Err(format!(
                    "trial {trial}: cqr {res_c:.3e} / hqr {res_h:.3e} exceed {residual_bound:.3e}"
                ));
            }
            worst = worst.max(res_c).max(res_h);
        }

        // Reconstruction round-trip on random orthonormal factors.
        for trial in 0..20u64 {
            let mut g = gen_gaussian(m, b, 1234 + trial);
            let mut tau0 = vec![0.0; b];
            bqrrp::householder::qr_unpivoted(g.view_mut(), &mut tau0, 32);
            let q0 = bqrrp::householder::build_explicit_q(
                &bqrrp::householder::ReflectorBlock::new(g.view(), &tau0),
                b,
            )
            .map_err(|e| e.to_string())?;
            let mut q = q0.clone();
            let mut tau_r = vec![0.0; b];
            let d = bqrrp::qr_tall::householder_reconstruct(q.view_mut(), &mut tau_r);
            for j in 0..b {
                let y = bqrrp::qr_tall::reflector_product_column(q.view(), &tau_r, j);
                let sj = d.as_slice()[j];
                let mut err = 0.0f64;
                for i in 0..m {
                    err += (y[i] - sj * q0.get(i, j)).powi(2);
                }
                if err.sqrt() > round_trip_bound {
                    return Err(format!(
                        "round trip col {j} trial {trial}: {:.3e} > {round_trip_bound:.3e}",
                        err.sqrt()
                    ));
                }
            }
        }
        Ok(format!("100 panels within {residual_bound:.2e} (worst {worst:.2e}), round-trips hold"))
    });
}

fn panel_residual(
    panel0: &DenseMatrix,
    factored: &DenseMatrix,
    tau: &[f64],
    k: usize,
) -> Result<f64, String> {
    let rows = panel0.rows();
    let bw = panel0.cols();
    let q = bqrrp::householder::ReflectorBlock::new(factored.view(), &tau[..k]);
    let qe = bqrrp::householder::build_explicit_q(&q, k).map_err(|e| e.to_string())?;
    let mut r = DenseMatrix::zeros(k, bw);
    for c in 0..bw {
        for rr in 0..k.min(c + 1) {
            r.set(rr, c, factored.get(rr, c));
        }
    }
    let mut back = DenseMatrix::zeros(rows, bw);
    bqrrp::blas::gemm(
        1.0,
        qe.view(),
        bqrrp::blas::Trans::No,
        r.view(),
        bqrrp::blas::Trans::No,
        0.0,
        back.view_mut(),
    )
    .map_err(|e| e.to_string())?;
    let mut err = 0.0f64;
    for c in 0..bw {
        for rr in 0..rows {
            err += (back.get(rr, c) - panel0.get(rr, c)).powi(2);
        }
    }
    Ok(err.sqrt() / panel0.frobenius_norm())
}

/// Synthetic rank-r inputs terminate with rank in [r, r + b] and a small
/// residual on the leading columns.
#[test]
fn acceptance_rank_deficiency() {
    criterion("rank-deficiency", || {
        let (m, n, b) = (128usize, 128usize, 32usize);
        for &r in &[0usize, b / 2, 3 * b / 2] {
            let m0 = if r == 0 {
                DenseMatrix::zeros(m, n)
            } else {
                let left = gen_gaussian(m, r, 100 + r as u64);
                let right = gen_gaussian(r, n, 200 + r as u64);
                let mut prod = DenseMatrix::zeros(m, n);
                bqrrp::blas::gemm(
                    1.0,
                    left.view(),
                    bqrrp::blas::Trans::No,
                    right.view(),
                    bqrrp::blas::Trans::No,
                    0.0,
                    prod.view_mut(),
                )
                .map_err(|e| e.to_string())?;
                prod
            };
            let out = bqrrp_factor(m0.clone(), &BqrrpConfig { block: b, ..Default::default() })
                .map_err(|e| e.to_string())?;
            if r == 0 && out.rank != 0 {
                return Err(format!("zero matrix gave rank {}", out.rank));
            }
            if out.rank < r || out.rank > r + b {
                return Err(format!("rank {} outside [{r}, {}]", out.rank, r + b));
            }
            let res = leading_column_residual(&m0, &out)?;
            if res > 1e-10 {
                return Err(format!("leading-column residual {res:.3e} at r={r}"));
            }
        }
        Ok("ranks land in [r, r+b] with small leading residuals".to_string())
    });
}

fn leading_column_residual(m0: &DenseMatrix, out: &bqrrp::BqrrpOutput) -> Result<f64, String> {
    let l = out.rank;
    if l == 0 {
        return Ok(0.0);
    }
    let rows = m0.rows();
    let q = explicit_q(out, l).map_err(|e| e.to_string())?;
    let r = out.r_factor();
    let mut rebuilt = DenseMatrix::zeros(rows, l);
    bqrrp::blas::gemm(
        1.0,
        q.view(),
        bqrrp::blas::Trans::No,
        r.sub(0, 0, l, l),
        bqrrp::blas::Trans::No,
        0.0,
        rebuilt.view_mut(),
    )
    .map_err(|e| e.to_string())?;
    let mut err = 0.0f64;
    for c in 0..l {
        let src = out.pivots.source(c);
        for rr in 0..rows {
            err += (rebuilt.get(rr, c) - m0.get(rr, src)).powi(2);
        }
    }
    Ok(err.sqrt() / m0.frobenius_norm())
}

/// Kahan-matrix pivot quality against the greedy reference, plus the
/// theoretical lower bound on the reference's diagonal ratios.
#[test]
fn acceptance_pivot_quality_kahan() {
    criterion("pivot-quality-kahan", || {
        let started = Instant::now();
        let n = 256usize;
        let kahan = gen_kahan(KahanParams::new(n, 10.0, 1.2), KahanVariant::Classical);
        let sigma = bqrrp::svd::jacobi_svd_values(kahan.view()).map_err(|e| e.to_string())?;

        let mut ref_fac = kahan.clone();
        let mut tau_ref = vec![0.0; n];
        let _ = bqrrp::qrcp::qrcp_reference(ref_fac.view_mut(), &mut tau_ref);
        let r_ref = upper_of(&ref_fac, n);
        let profile_ref = trailing_frobenius_profile(r_ref.view());

        // Lower bound (n(n+1)/2)^{-1/2} on |R(i,i)| / sigma_i for the
        // reference factorization.
        let q_ref = diag_over_sigma(r_ref.view(), &sigma);
        let bound = ((n * (n + 1)) as f64 / 2.0).powf(-0.5);
        for (i, &qi) in q_ref.iter().enumerate() {
            if !(qi >= bound) {
                return Err(format!("reference q({i}) = {qi:.3e} below {bound:.3e}"));
            }
        }

        let mut medians = Vec::new();
        for &b in &[16usize, 256] {
            let cfg = BqrrpConfig { block: b, seed: 3, ..Default::default() };
            let out = bqrrp_factor(kahan.clone(), &cfg).map_err(|e| e.to_string())?;
            let r_bq = out.r_factor();
            let profile_bq = trailing_frobenius_profile(r_bq.view());
            let cutoff = (0.9 * n as f64) as usize;
            if profile_bq.len() < cutoff {
                return Err(format!(
                    "b={b}: rank {} leaves only {} profile entries",
                    out.rank,
                    profile_bq.len()
                ));
            }
            let mut ratios: Vec<f64> = (0..cutoff)
                .map(|i| profile_ref[i] / profile_bq[i])
                .collect();
            ratios.sort_by(|a, b| a.partial_cmp(b).expect("finite ratios"));
            let median = ratios[ratios.len() / 2];
            if !(0.5..=2.0).contains(&median) {
                return Err(format!("b={b}: median trailing ratio {median:.3} outside [0.5, 2]"));
            }
            medians.push((b, median));
        }
        let secs = started.elapsed().as_secs_f64();
        if secs >= 120.0 {
            return Err(format!("took {secs:.1}s, budget is 120s"));
        }
        Ok(format!("medians {medians:?}, reference ratios above {bound:.2e}, {secs:.1}s"))
    });
}

fn upper_of(factored: &DenseMatrix, rank: usize) -> DenseMatrix {
    let n = factored.cols();
    let rows = rank.min(factored.rows());
    let mut r = DenseMatrix::zeros(rows, n);
    for c in 0..n {
        for i in 0..rows.min(c + 1) {
            r.set(i, c, factored.get(i, c));
        }
    }
    r
}

/// Peak live auxiliary allocation during a 512x512 factorization stays
/// under the workspace budget d*m + 2*d*n + 2*b^2 + 4*n + b plus slack.
#[test]
fn acceptance_storage_bound() {
    criterion("storage-bound", || {
        let (m, n, b) = (512usize, 512usize, 64usize);
        let d = b; // gamma = 1
        let input = gen_gaussian(m, n, 99);
        let cfg = BqrrpConfig { block: b, ..Default::default() };

        let live0 = LIVE.load(Ordering::SeqCst);
        PEAK.store(live0, Ordering::SeqCst);
        let out = bqrrp_factor(input, &cfg).map_err(|e| e.to_string())?;
        let peak = PEAK.load(Ordering::SeqCst);
        drop(out);

        let aux_words = (peak - live0).max(0) as usize / 8;
        let budget = d * m + 2 * d * n + 2 * b * b + 4 * n + b + 1024;
        if aux_words > budget {
            return Err(format!("peak auxiliary {aux_words} words > budget {budget}"));
        }
        Ok(format!("peak auxiliary {aux_words} words <= budget {budget}"))
    });
}

/// Directional performance: the blocked driver beats the level-2 greedy
/// reference at 1024x1024, and the transposed-Q application dominates the
/// profile. Informational: prints a warning instead of failing when the
/// host disagrees.
#[test]
fn acceptance_qualitative_performance() {
    criterion("qualitative-performance", || {
        let (m, n, b) = (1024usize, 1024usize, 128usize);
        let input = gen_gaussian(m, n, 7);

        let started = Instant::now();
        let out = bqrrp_factor(input.clone(), &BqrrpConfig { block: b, ..Default::default() })
            .map_err(|e| e.to_string())?;
        let bqrrp_ns = started.elapsed().as_nanos();

        let mut work = input.clone();
        let mut tau = vec![0.0; m.min(n)];
        let started = Instant::now();
        let _ = bqrrp::qrcp::qrcp_reference(work.view_mut(), &mut tau);
        let ref_ns = started.elapsed().as_nanos();

        let shares = bqrrp::bench::profile_shares(&out.diagnostics);
        let apply_dominates = shares.largest_is_apply_trans_q();
        let faster = bqrrp_ns <= ref_ns;

        let detail = format!(
            "bqrrp {:.2}s vs reference {:.2}s, apply_trans_q share {:.1}%{}",
            bqrrp_ns as f64 / 1e9,
            ref_ns as f64 / 1e9,
            shares.apply_trans_q,
            if apply_dominates { " (largest)" } else { "" }
        );
        if faster && apply_dominates {
            Ok(detail)
        } else {
            // Informational per the acceptance contract: report, don't gate.
            Ok(format!("WARN (informational, non-gating): {detail}"))
        }
    });
}

/// Identical configuration implies bitwise-identical output.
#[test]
fn acceptance_determinism() {
    criterion("determinism", || {
        let m0 = gen_gaussian(200, 160, 31);
        let cfg = BqrrpConfig {
            block: 32,
            panel_variant: PanelVariant::Cqr,
            seed: 1234,
            ..Default::default()
        };
        let a = bqrrp_factor(m0.clone(), &cfg).map_err(|e| e.to_string())?;
        let b = bqrrp_factor(m0, &cfg).map_err(|e| e.to_string())?;
        if a.rank != b.rank || a.pivots != b.pivots {
            return Err("rank or pivots differ between runs".to_string());
        }
        for (x, y) in a.factored.as_slice().iter().zip(b.factored.as_slice()) {
            if x.to_bits() != y.to_bits() {
                return Err("factored storage differs bitwise".to_string());
            }
        }
        for (x, y) in a.tau.iter().zip(&b.tau) {
            if x.to_bits() != y.to_bits() {
                return Err("tau differs bitwise".to_string());
            }
        }
        Ok("factors, tau, and pivots are bitwise identical across runs".to_string())
    });
}
