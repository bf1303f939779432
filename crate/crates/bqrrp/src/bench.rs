//! Benchmark and profiling support for the CLI: timed runs, canonical
//! FLOP rates, and the CSV row shapes the commands emit.

use crate::driver::{bqrrp_factor, BqrrpConfig, PanelVariant};
use crate::error::Result;
use crate::flops::geqrf_flops;
use crate::matgen::gen_gaussian;
use crate::matrix::DenseMatrix;
use crate::qrcp::qrcp_reference;
use std::time::Instant;

/// One timed run. `gflops_canonical` divides the standard unpivoted-QR
/// flop count for (m, n) by the measured wall time, whatever the
/// algorithm actually did; flops/ns is GFLOP/s.
#[derive(Clone, Debug)]
pub struct BenchRecord {
    pub algo: String,
    pub m: usize,
    pub n: usize,
    pub b: usize,
    pub gamma: f64,
    pub variant: String,
    /// 1-based trial index; -1 marks the best-of-trials row.
    pub trial: i64,
    pub wall_ns: u64,
    pub gflops_canonical: f64,
}

pub const BENCH_CSV_HEADER: &str = "algo,m,n,b,gamma,variant,trial,wall_ns,gflops_canonical";

impl BenchRecord {
    pub fn new(
        algo: &str,
        m: usize,
        n: usize,
        b: usize,
        gamma: f64,
        variant: &str,
        trial: i64,
        wall_ns: u64,
    ) -> Self {
        BenchRecord {
            algo: algo.to_string(),
            m,
            n,
            b,
            gamma,
            variant: variant.to_string(),
            trial,
            wall_ns,
            gflops_canonical: geqrf_flops(m, n) / wall_ns.max(1) as f64,
        }
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.algo,
            self.m,
            self.n,
            self.b,
            self.gamma,
            self.variant,
            self.trial,
            self.wall_ns,
            self.gflops_canonical
        )
    }
}

/// One entry of the per-size algorithm set.
#[derive(Clone, Debug)]
pub enum BenchAlgo {
    Bqrrp { b: usize, cfg: BqrrpConfig },
    QrUnpivoted,
    QrcpReference,
}

impl BenchAlgo {
    pub fn name(&self) -> &'static str {
        match self {
            BenchAlgo::Bqrrp { .. } => "bqrrp",
            BenchAlgo::QrUnpivoted => "qr_unpivoted",
            BenchAlgo::QrcpReference => "qrcp_reference",
        }
    }

    pub fn variant_label(&self) -> String {
        match self {
            BenchAlgo::Bqrrp { cfg, .. } => match cfg.panel_variant {
                PanelVariant::Hqr => "hqr".to_string(),
                PanelVariant::Cqr => "cqr".to_string(),
            },
            _ => "-".to_string(),
        }
    }

    pub fn block(&self) -> usize {
        match self {
            BenchAlgo::Bqrrp { b, .. } => *b,
            _ => 0,
        }
    }

    pub fn gamma(&self) -> f64 {
        match self {
            BenchAlgo::Bqrrp { cfg, .. } => cfg.gamma,
            _ => 1.0,
        }
    }

    /// Runs once on a fresh copy of the input, returning wall nanoseconds.
    pub fn run(&self, input: &DenseMatrix) -> Result<u64> {
        let started = Instant::now();
        match self {
            BenchAlgo::Bqrrp { cfg, .. } => {
                let _ = bqrrp_factor(input.clone(), cfg)?;
            }
            BenchAlgo::QrUnpivoted => {
                let mut work = input.clone();
                let k = work.rows().min(work.cols());
                let mut tau = vec![0.0; k];
                crate::householder::qr_unpivoted(work.view_mut(), &mut tau, 32);
            }
            BenchAlgo::QrcpReference => {
                let mut work = input.clone();
                let k = work.rows().min(work.cols());
                let mut tau = vec![0.0; k];
                let _ = qrcp_reference(work.view_mut(), &mut tau);
            }
        }
        Ok(started.elapsed().as_nanos() as u64)
    }
}

/// Interleaved repetition: the whole algorithm set runs once per trial
/// before any algorithm repeats. Emits every raw row plus a best-of-trials
/// row (trial = -1) per configuration.
pub fn run_bench_suite(
    m: usize,
    n: usize,
    algos: &[BenchAlgo],
    trials: usize,
    seed: u64,
) -> Result<Vec<BenchRecord>> {
    let input = gen_gaussian(m, n, seed);
    let mut raw: Vec<Vec<u64>> = vec![Vec::with_capacity(trials); algos.len()];
    for _trial in 0..trials {
        for (idx, algo) in algos.iter().enumerate() {
            raw[idx].push(algo.run(&input)?);
        }
    }
    let mut records = Vec::new();
    for (idx, algo) in algos.iter().enumerate() {
        for (t, &ns) in raw[idx].iter().enumerate() {
            records.push(BenchRecord::new(
                algo.name(),
                m,
                n,
                algo.block(),
                algo.gamma(),
                &algo.variant_label(),
                (t + 1) as i64,
                ns,
            ));
        }
        let best = *raw[idx].iter().min().expect("at least one trial");
        records.push(BenchRecord::new(
            algo.name(),
            m,
            n,
            algo.block(),
            algo.gamma(),
            &algo.variant_label(),
            -1,
            best,
        ));
    }
    Ok(records)
}

/// Percentages of total driver runtime by subroutine, derived from the
/// per-iteration diagnostics. Sums to 100 up to float rounding.
#[derive(Clone, Copy, Debug)]
pub struct ProfileShares {
    pub qrcp_wide: f64,
    pub tri_rank: f64,
    pub col_perm: f64,
    pub qr_tall: f64,
    pub apply_trans_q: f64,
    pub sample_update: f64,
    pub other: f64,
}

pub const PROFILE_CSV_HEADER: &str =
    "m,n,b,variant,qrcp_wide,tri_rank,col_perm,qr_tall,apply_trans_q,sample_update,other";

pub fn profile_shares(diag: &crate::driver::Diagnostics) -> ProfileShares {
    let mut named = [0u64; 6];
    for it in &diag.per_iteration {
        named[0] += it.qrcp_wide;
        named[1] += it.tri_rank;
        named[2] += it.col_perm;
        named[3] += it.qr_tall;
        named[4] += it.apply_trans_q;
        named[5] += it.sample_update;
    }
    let total = diag.total_ns.max(1) as f64;
    let pct = |x: u64| 100.0 * x as f64 / total;
    let named_sum: u64 = named.iter().sum();
    ProfileShares {
        qrcp_wide: pct(named[0]),
        tri_rank: pct(named[1]),
        col_perm: pct(named[2]),
        qr_tall: pct(named[3]),
        apply_trans_q: pct(named[4]),
        sample_update: pct(named[5]),
        other: pct(diag.total_ns.saturating_sub(named_sum)),
    }
}

impl ProfileShares {
    pub fn csv_fields(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.qrcp_wide,
            self.tri_rank,
            self.col_perm,
            self.qr_tall,
            self.apply_trans_q,
            self.sample_update,
            self.other
        )
    }

    pub fn sum(&self) -> f64 {
        self.qrcp_wide
            + self.tri_rank
            + self.col_perm
            + self.qr_tall
            + self.apply_trans_q
            + self.sample_update
            + self.other
    }

    pub fn largest_is_apply_trans_q(&self) -> bool {
        let others = [
            self.qrcp_wide,
            self.tri_rank,
            self.col_perm,
            self.qr_tall,
            self.sample_update,
            self.other,
        ];
        others.iter().all(|&x| self.apply_trans_q >= x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bench_row_accounting_and_rates() {
        let algos = vec![
            BenchAlgo::Bqrrp { b: 8, cfg: BqrrpConfig { block: 8, seed: 1, ..Default::default() } },
            BenchAlgo::QrUnpivoted,
        ];
        let records = run_bench_suite(32, 32, &algos, 3, 7).unwrap();
        // 3 raw + 1 best per algorithm.
        assert_eq!(records.len(), 2 * 4);
        for r in &records {
            let expect = geqrf_flops(r.m, r.n) / r.wall_ns as f64;
            assert!((r.gflops_canonical - expect).abs() <= 1e-9 * expect.abs());
        }
        let best: Vec<_> = records.iter().filter(|r| r.trial == -1).collect();
        assert_eq!(best.len(), 2);
        for b in best {
            let raws: Vec<u64> = records
                .iter()
                .filter(|r| r.trial > 0 && r.algo == b.algo)
                .map(|r| r.wall_ns)
                .collect();
            assert_eq!(b.wall_ns, raws.into_iter().min().unwrap());
        }
    }

    #[test]
    fn profile_shares_sum_to_hundred() {
        let input = gen_gaussian(64, 64, 2);
        let out = bqrrp_factor(input, &BqrrpConfig { block: 16, ..Default::default() }).unwrap();
        let shares = profile_shares(&out.diagnostics);
        assert!((shares.sum() - 100.0).abs() <= 0.5, "sum {}", shares.sum());
    }
}
