//! Exact joint eigenvalue densities for tiny sizes, used to validate samplers.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Result, RmtError};

/// Joint density of the (unordered) eigenvalues of an `n × n` complex
/// Ginibre matrix with standard complex Gaussian entries, `n ≤ 3`:
/// `exp(−Σ|zₖ|²) ∏_{j<k}|zⱼ−zₖ|² / (πⁿ ∏_{k=1}^n k!)`.
pub fn ginibre_density_smalln(z: &[Complex64]) -> Result<f64> {
    let n = z.len();
    if n == 0 {
        return Err(RmtError::InvalidDimension("need at least one eigenvalue".into()));
    }
    if n > 3 {
        return Err(RmtError::Unsupported(format!(
            "closed-form Ginibre density is only provided for n <= 3, got {n}"
        )));
    }
    let factorials: f64 = (1..=n).map(|k| (1..=k).product::<usize>() as f64).product();
    let mut vandermonde = 1.0;
    for j in 0..n {
        for k in j + 1..n {
            vandermonde *= (z[j] - z[k]).norm_sqr();
        }
    }
    let gauss = (-z.iter().map(|w| w.norm_sqr()).sum::<f64>()).exp();
    Ok(gauss * vandermonde / (PI.powi(n as i32) * factorials))
}

/// Weyl density of the eigenangles of a Haar unitary `2 × 2` matrix,
/// `|e^{iθ₁} − e^{iθ₂}|² / (2 (2π)²)` on `[0, 2π)²`.
pub fn weyl_density_u2(theta1: f64, theta2: f64) -> f64 {
    let d = Complex64::from_polar(1.0, theta1) - Complex64::from_polar(1.0, theta2);
    d.norm_sqr() / (2.0 * (2.0 * PI).powi(2))
}
