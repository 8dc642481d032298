//! Gumbel law and the centering/scaling of the Ginibre spectral radius.

use crate::error::{Result, RmtError};

/// `exp(−e^{−x})`.
pub fn gumbel_cdf(x: f64) -> f64 {
    (-(-x).exp()).exp()
}

/// `γₙ = log(n/2π) − 2 log log n`, for `n ≥ 3`.
pub fn rider_gamma(n: usize) -> Result<f64> {
    if n < 3 {
        return Err(RmtError::param("n", n as f64, "needs n >= 3 so that log log n > 0"));
    }
    let nf = n as f64;
    Ok((nf / (2.0 * std::f64::consts::PI)).ln() - 2.0 * nf.ln().ln())
}

/// `Yₙ = √(4nγₙ)·(ρ/√n − 1 − √(γₙ/(4n)))` for the spectral radius `ρ` of an
/// unscaled `n × n` complex Ginibre matrix.
pub fn rider_y(rho: f64, n: usize) -> Result<f64> {
    if !(rho >= 0.0 && rho.is_finite()) {
        return Err(RmtError::param("rho", rho, "spectral radius must be finite and non-negative"));
    }
    let g = rider_gamma(n)?;
    if g <= 0.0 {
        return Err(RmtError::param("n", n as f64, "centering needs gamma_n > 0, i.e. n >= 164"));
    }
    let nf = n as f64;
    Ok((4.0 * nf * g).sqrt() * (rho / nf.sqrt() - 1.0 - (g / (4.0 * nf)).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gumbel_at_zero() {
        assert!((gumbel_cdf(0.0) - (-1.0f64).exp()).abs() < 1e-16);
        assert!(gumbel_cdf(-40.0) == 0.0 && gumbel_cdf(40.0) == 1.0);
    }

    #[test]
    fn gamma_at_one_thousand() {
        // log(1000/2π) = 5.069878..., log log 1000 = 1.932645...
        let g = rider_gamma(1000).unwrap();
        let direct = 5.069_878_212_572_791_5_f64 - 2.0 * 1.932_644_733_916_065_5;
        assert!((g - direct).abs() < 1e-12, "{g}");
        assert!((g - 1.2045887447406606).abs() < 1e-12);
        assert!(rider_gamma(2).is_err());
    }

    #[test]
    fn centering_zero() {
        for n in [164usize, 500, 1000] {
            let g = rider_gamma(n).unwrap();
            let nf = n as f64;
            let rho = nf.sqrt() * (1.0 + (g / (4.0 * nf)).sqrt());
            assert!(rider_y(rho, n).unwrap().abs() < 1e-9);
        }
        assert!(rider_y(-1.0, 100).is_err() && rider_y(1.0, 10).is_err());
    }
}
