use num_complex::Complex64;

use super::{check_n, DenseMatrix, RngStream};
use crate::error::Result;
use crate::linalg;

const SINGULAR_PIVOT: f64 = 1e-300;

/// Haar-distributed unitary matrix.
///
/// Householder QR of a complex Ginibre draw, followed by multiplying column
/// `k` of `Q` by `r_kk/|r_kk|`. That makes the factorization unique (positive
/// diagonal in `R`), which is what turns the pushforward into Haar measure.
pub fn sample_haar_unitary(n: usize, rng: &mut RngStream) -> Result<DenseMatrix> {
    check_n(n)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    loop {
        let g: Vec<Complex64> = (0..n * n)
            .map(|_| {
                let re = rng.normal();
                let im = rng.normal();
                Complex64::new(s * re, s * im)
            })
            .collect();
        let (q, rdiag) = linalg::zgeqrf_q(g, n)?;
        if rdiag.iter().any(|r| r.norm() < SINGULAR_PIVOT) {
            continue;
        }
        let phase: Vec<Complex64> = rdiag.iter().map(|r| r / r.norm()).collect();
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for (k, ph) in phase.iter().enumerate() {
            for i in 0..n {
                out[i * n + k] = q[k * n + i] * ph;
            }
        }
        return DenseMatrix::from_complex(n, n, out);
    }
}

/// Haar-distributed orthogonal matrix (sign correction `sign(r_kk)`).
pub fn sample_haar_orthogonal(n: usize, rng: &mut RngStream) -> Result<DenseMatrix> {
    check_n(n)?;
    loop {
        let g: Vec<f64> = (0..n * n).map(|_| rng.normal()).collect();
        let (q, rdiag) = linalg::dgeqrf_q(g, n)?;
        if rdiag.iter().any(|r| r.abs() < SINGULAR_PIVOT) {
            continue;
        }
        let mut out = vec![0.0; n * n];
        for (k, r) in rdiag.iter().enumerate() {
            let sg = r.signum();
            for i in 0..n {
                out[i * n + k] = q[k * n + i] * sg;
            }
        }
        return DenseMatrix::from_real(n, n, out);
    }
}
