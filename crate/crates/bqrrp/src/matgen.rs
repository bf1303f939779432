//! Test-matrix generators: Gaussian and the Kahan matrix family.

use crate::matrix::{DenseMatrix, UNIT_ROUNDOFF};
use crate::rng::{normal_at, tagged_seed, STREAM_MATGEN};

/// i.i.d. standard normal entries; entry (i, j) is a pure function of
/// (seed, i, j).
pub fn gen_gaussian(rows: usize, cols: usize, seed: u64) -> DenseMatrix {
    let s = tagged_seed(seed, STREAM_MATGEN);
    let mut m = DenseMatrix::zeros(rows, cols);
    for j in 0..cols {
        for i in 0..rows {
            m.set(i, j, normal_at(s, i as u64, j as u64));
        }
    }
    m
}

/// Parameters of the Kahan matrix: order n, perturbation scale p, and an
/// angle theta in (0, pi).
#[derive(Clone, Copy, Debug)]
pub struct KahanParams {
    pub n: usize,
    pub p: f64,
    pub theta: f64,
}

impl KahanParams {
    pub fn new(n: usize, p: f64, theta: f64) -> Self {
        assert!(n >= 1, "order must be positive");
        assert!(theta > 0.0 && theta < std::f64::consts::PI, "theta must lie in (0, pi)");
        KahanParams { n, p, theta }
    }
}

/// Which upper-triangular core the generator uses. Both put alpha^i row
/// scaling outside and add the u*p*diag(n..1) perturbation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KahanVariant {
    /// beta = -cos(theta) on the diagonal, ones strictly above.
    CosineDiagonal,
    /// The conventional gallery form: ones on the diagonal, -cos(theta)
    /// strictly above.
    Classical,
}

/// Upper-triangular n-by-n matrix with nearly equal column norms that
/// defeats greedy column pivoting.
pub fn gen_kahan(params: KahanParams, variant: KahanVariant) -> DenseMatrix {
    let n = params.n;
    let alpha = params.theta.sin();
    let beta = -params.theta.cos();
    let mut m = DenseMatrix::zeros(n, n);
    let mut row_scale = 1.0;
    for i in 0..n {
        let (diag, above) = match variant {
            KahanVariant::CosineDiagonal => (beta, 1.0),
            KahanVariant::Classical => (1.0, beta),
        };
        m.set(i, i, row_scale * diag + UNIT_ROUNDOFF * params.p * (n - i) as f64);
        for j in i + 1..n {
            m.set(i, j, row_scale * above);
        }
        row_scale *= alpha;
    }
    m
}
