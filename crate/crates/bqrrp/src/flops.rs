//! Operation-count models used for canonical FLOP rates.

/// Flop count of unpivoted Householder QR on an m-by-n matrix
/// (the standard LAWN-41 polynomial). Arguments are mirrored so the
/// taller dimension comes first.
pub fn geqrf_flops(m: usize, n: usize) -> f64 {
    if m < n {
        return geqrf_flops(n, m);
    }
    let (m, n) = (m as f64, n as f64);
    2.0 * m * n * n - (2.0 / 3.0) * n * n * n + m * n + n * n + (14.0 / 3.0) * n
}

/// Flop count of applying a k-reflector Q^T to an m-by-n matrix.
pub fn ormqr_flops(n: usize, m: usize, k: usize) -> f64 {
    let (n, m, k) = (n as f64, m as f64, k as f64);
    4.0 * n * m * k - 2.0 * n * k * k + 3.0 * n * k
}
