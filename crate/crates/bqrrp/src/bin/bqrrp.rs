//! Command-line front end: factorize matrix files, run benchmark sweeps,
//! emit runtime breakdowns and pivot-quality tables as CSV.
//!
//! Exit codes: 0 success, 2 I/O or file-format problem, 3 configuration
//! violation, 4 numerical diagnostic (SVD non-convergence).

use bqrrp::bench::{
    profile_shares, run_bench_suite, BenchAlgo, BENCH_CSV_HEADER, PROFILE_CSV_HEADER,
};
use bqrrp::driver::{
    bqrrp_factor, reconstruct_residual, BqrrpConfig, PanelVariant, PermVariant, WideVariant,
};
use bqrrp::error::Error;
use bqrrp::matgen::{gen_gaussian, gen_kahan, KahanParams, KahanVariant};
use bqrrp::quality::{diag_over_sigma, trailing_frobenius_profile};
use bqrrp::{io, DenseMatrix};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "bqrrp", version, about = "Blocked randomized QR with column pivoting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PanelArg {
    Hqr,
    Cqr,
}

#[derive(Clone, Copy, ValueEnum)]
enum WideArg {
    Luqr,
    Ref,
}

#[derive(Clone, Copy, ValueEnum)]
enum PermArg {
    Sequential,
    Gather,
}

#[derive(Clone, Copy, ValueEnum)]
enum KahanArg {
    Classical,
    CosineDiagonal,
}

impl From<PanelArg> for PanelVariant {
    fn from(v: PanelArg) -> Self {
        match v {
            PanelArg::Hqr => PanelVariant::Hqr,
            PanelArg::Cqr => PanelVariant::Cqr,
        }
    }
}

impl From<WideArg> for WideVariant {
    fn from(v: WideArg) -> Self {
        match v {
            WideArg::Luqr => WideVariant::Luqr,
            WideArg::Ref => WideVariant::Ref,
        }
    }
}

impl From<PermArg> for PermVariant {
    fn from(v: PermArg) -> Self {
        match v {
            PermArg::Sequential => PermVariant::Sequential,
            PermArg::Gather => PermVariant::Gather,
        }
    }
}

#[derive(Args)]
struct ConfigArgs {
    /// Block size b.
    #[arg(long, default_value_t = 64)]
    b: usize,
    /// Sampling factor (sketch rows d = ceil(gamma * b)).
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    #[arg(long = "panel-variant", value_enum, default_value = "hqr")]
    panel_variant: PanelArg,
    #[arg(long = "wide-variant", value_enum, default_value = "luqr")]
    wide_variant: WideArg,
    #[arg(long = "perm-variant", value_enum, default_value = "sequential")]
    perm_variant: PermArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl ConfigArgs {
    fn to_config(&self) -> BqrrpConfig {
        BqrrpConfig {
            block: self.b,
            gamma: self.gamma,
            panel_variant: self.panel_variant.into(),
            wide_variant: self.wide_variant.into(),
            perm_variant: self.perm_variant.into(),
            rank_tol_factor: 1.0,
            seed: self.seed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Factor a BQM1 matrix file; writes {prefix}.R.bqm, {prefix}.tau.csv,
    /// {prefix}.J.csv.
    Factorize {
        #[arg(long = "input-path")]
        input_path: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long = "output-prefix")]
        output_prefix: PathBuf,
        /// Also print the reconstruction residual (reruns the factorization
        /// against the input).
        #[arg(long, default_value_t = false)]
        check: bool,
    },
    /// Benchmark sweep over Gaussian inputs; one CSV row per timed run
    /// plus a best-of-trials row (trial = -1) per configuration.
    Bench {
        #[arg(long = "m-list", value_delimiter = ',', required = true)]
        m_list: Vec<usize>,
        #[arg(long = "n-list", value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        #[arg(long = "b-list", value_delimiter = ',', required = true)]
        b_list: Vec<usize>,
        /// Panel variants to run (hqr, cqr).
        #[arg(long, value_delimiter = ',', value_enum, default_values = ["hqr"])]
        variants: Vec<PanelArg>,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "csv-path")]
        csv_path: PathBuf,
    },
    /// Per-subroutine runtime percentages for one size across block sizes.
    Profile {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long = "b-list", value_delimiter = ',', required = true)]
        b_list: Vec<usize>,
        #[arg(long, value_enum, default_value = "hqr")]
        variant: PanelArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "csv-path")]
        csv_path: PathBuf,
    },
    /// Pivot-quality profiles on the Kahan matrix: the trailing-norm ratio
    /// against the greedy reference and both diagonal-over-sigma series.
    Quality {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10.0)]
        p: f64,
        #[arg(long, default_value_t = 1.2)]
        theta: f64,
        #[arg(long = "b-list", value_delimiter = ',', required = true)]
        b_list: Vec<usize>,
        #[arg(long, value_enum, default_value = "classical")]
        kahan_variant: KahanArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "csv-path")]
        csv_path: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Io(_) | Error::BadFormat(_) => 2,
        Error::Config(_) => 3,
        Error::SvdNonConvergence { .. } => 4,
        _ => 1,
    }
}

fn run(cmd: Command) -> Result<(), Error> {
    match cmd {
        Command::Factorize { input_path, config, output_prefix, check } => {
            let input = io::read_bqm(&input_path)?;
            let cfg = config.to_config();
            let out = bqrrp_factor(input.clone(), &cfg)?;
            for w in &out.diagnostics.warnings {
                eprintln!("warning: {w}");
            }

            let r_path = with_suffix(&output_prefix, "R.bqm");
            io::write_bqm(&r_path, &out.r_factor())?;

            let mut tau_file = create(&with_suffix(&output_prefix, "tau.csv"))?;
            writeln!(tau_file, "tau")?;
            for t in &out.tau {
                writeln!(tau_file, "{t}")?;
            }

            let mut j_file = create(&with_suffix(&output_prefix, "J.csv"))?;
            writeln!(j_file, "J")?;
            for v in out.pivots.as_one_based() {
                writeln!(j_file, "{v}")?;
            }

            println!("rank {} of {}x{}", out.rank, input.rows(), input.cols());
            if check {
                let res = reconstruct_residual(&input, &out)?;
                println!("residual {res:e}");
            }
            Ok(())
        }
        Command::Bench { m_list, n_list, b_list, variants, trials, seed, csv_path } => {
            if trials < 1 {
                return Err(Error::Config("trials must be at least 1".into()));
            }
            let mut csv = create(&csv_path)?;
            writeln!(csv, "{BENCH_CSV_HEADER}")?;
            for &m in &m_list {
                for &n in &n_list {
                    let mut algos = Vec::new();
                    for &b in &b_list {
                        for v in &variants {
                            let cfg = BqrrpConfig {
                                block: b,
                                panel_variant: (*v).into(),
                                seed,
                                ..Default::default()
                            };
                            algos.push(BenchAlgo::Bqrrp { b, cfg });
                        }
                    }
                    algos.push(BenchAlgo::QrUnpivoted);
                    algos.push(BenchAlgo::QrcpReference);
                    for rec in run_bench_suite(m, n, &algos, trials, seed)? {
                        writeln!(csv, "{}", rec.csv_row())?;
                    }
                }
            }
            Ok(())
        }
        Command::Profile { m, n, b_list, variant, seed, csv_path } => {
            let mut csv = create(&csv_path)?;
            writeln!(csv, "{PROFILE_CSV_HEADER}")?;
            let input = gen_gaussian(m, n, seed);
            for &b in &b_list {
                let cfg = BqrrpConfig {
                    block: b,
                    panel_variant: variant.into(),
                    seed,
                    ..Default::default()
                };
                let out = bqrrp_factor(input.clone(), &cfg)?;
                let shares = profile_shares(&out.diagnostics);
                let label = match variant {
                    PanelArg::Hqr => "hqr",
                    PanelArg::Cqr => "cqr",
                };
                writeln!(csv, "{m},{n},{b},{label},{}", shares.csv_fields())?;
            }
            Ok(())
        }
        Command::Quality { n, p, theta, b_list, kahan_variant, seed, csv_path } => {
            if n > 1024 {
                return Err(Error::Config(format!(
                    "n={n} exceeds the 1024 bound of the singular-value oracle"
                )));
            }
            let variant = match kahan_variant {
                KahanArg::Classical => KahanVariant::Classical,
                KahanArg::CosineDiagonal => KahanVariant::CosineDiagonal,
            };
            let kahan = gen_kahan(KahanParams::new(n, p, theta), variant);
            let sigma = bqrrp::svd::jacobi_svd_values(kahan.view())?;

            let mut ref_fac = kahan.clone();
            let mut tau_ref = vec![0.0; n];
            let _ = bqrrp::qrcp::qrcp_reference(ref_fac.view_mut(), &mut tau_ref);
            let r_ref = explicit_upper(&ref_fac, n);
            let profile_ref = trailing_frobenius_profile(r_ref.view());
            let q_ref = diag_over_sigma(r_ref.view(), &sigma);

            let mut csv = create(&csv_path)?;
            writeln!(csv, "b,i,trailing_ratio,diag_over_sigma_ref,diag_over_sigma_bqrrp")?;
            for &b in &b_list {
                let cfg = BqrrpConfig { block: b, seed, ..Default::default() };
                let out = bqrrp_factor(kahan.clone(), &cfg)?;
                let r_bq = out.r_factor();
                let profile_bq = trailing_frobenius_profile(r_bq.view());
                let q_bq = diag_over_sigma(r_bq.view(), &sigma);
                let len = profile_ref.len().min(profile_bq.len());
                for i in 0..len {
                    let ratio = if profile_bq[i] == 0.0 {
                        if profile_ref[i] == 0.0 {
                            1.0
                        } else {
                            f64::INFINITY
                        }
                    } else {
                        profile_ref[i] / profile_bq[i]
                    };
                    writeln!(csv, "{b},{i},{ratio},{},{}", q_ref[i], q_bq[i])?;
                }
            }
            Ok(())
        }
    }
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(".");
    name.push(suffix);
    prefix.with_file_name(name)
}

fn create(path: &Path) -> Result<std::fs::File, Error> {
    Ok(std::fs::File::create(path)?)
}

fn explicit_upper(factored: &DenseMatrix, rank: usize) -> DenseMatrix {
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
