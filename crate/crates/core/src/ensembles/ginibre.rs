use num_complex::Complex64;

use super::{check_n, DenseMatrix, EntryDistribution, Field, RngStream};
use crate::error::{Result, RmtError};

/// Ginibre matrix: `n²` i.i.d. standard Gaussians, real or complex
/// (complex entries have component variance 1/2, so `E|g|² = 1`).
pub fn sample_ginibre(n: usize, field: Field, rng: &mut RngStream) -> Result<DenseMatrix> {
    check_n(n)?;
    match field {
        Field::Real => super::sample_real_gaussian(n, n, rng),
        Field::Complex => sample_iid(n, n, &EntryDistribution::standard_complex_gaussian(), rng),
    }
}

/// Matrix with i.i.d. entries drawn from `dist`. Real laws give a real matrix.
pub fn sample_iid(rows: usize, cols: usize, dist: &EntryDistribution, rng: &mut RngStream) -> Result<DenseMatrix> {
    check_n(rows)?;
    check_n(cols)?;
    dist.validate()?;
    if dist.is_complex() {
        let data: Vec<Complex64> = (0..rows * cols).map(|_| dist.sample(rng)).collect();
        DenseMatrix::from_complex(rows, cols, data)
    } else {
        let data: Vec<f64> = (0..rows * cols).map(|_| dist.sample_real(rng)).collect();
        DenseMatrix::from_real(rows, cols, data)
    }
}

/// Real elliptical matrix: for `i < j`, `x_ij = ξ` and `x_ji = ρξ + √(1−ρ²)η`
/// with `ξ, η` i.i.d. `N(0,1)`; the diagonal is i.i.d. from `diag`.
pub fn sample_elliptical(n: usize, rho: f64, diag: &EntryDistribution, rng: &mut RngStream) -> Result<DenseMatrix> {
    check_n(n)?;
    if !(rho.abs() < 1.0) {
        return Err(RmtError::param("rho", rho, "correlation must lie in (-1, 1)"));
    }
    diag.validate()?;
    let mix = (1.0 - rho * rho).sqrt();
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        a[i * n + i] = diag.sample_real(rng);
        for j in i + 1..n {
            let xi = rng.normal();
            let eta = rng.normal();
            a[i * n + j] = xi;
            a[j * n + i] = rho * xi + mix * eta;
        }
    }
    DenseMatrix::from_real(n, n, a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair_correlation(pairs: &[(f64, f64)]) -> f64 {
        let n = pairs.len() as f64;
        let (mx, my) = pairs.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x / n, b + y / n));
        let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
        for (x, y) in pairs {
            sxy += (x - mx) * (y - my);
            sxx += (x - mx).powi(2);
            syy += (y - my).powi(2);
        }
        sxy / (sxx * syy).sqrt()
    }

    fn offdiag_pairs(m: &DenseMatrix) -> Vec<(f64, f64)> {
        let n = m.rows();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                out.push((m.get(i, j).re, m.get(j, i).re));
            }
        }
        out
    }

    #[test]
    fn complex_entries_have_unit_modulus_mean() {
        let mut acc = 0.0;
        let mut rng = RngStream::new(4, 0);
        for _ in 0..10_000 {
            acc += sample_ginibre(1, Field::Complex, &mut rng).unwrap().get(0, 0).norm_sqr();
        }
        let mean = acc / 10_000.0;
        assert!((0.95..=1.05).contains(&mean), "{mean}");
    }

    #[test]
    fn real_field_has_real_storage() {
        let m = sample_ginibre(4, Field::Real, &mut RngStream::new(1, 0)).unwrap();
        assert!(m.as_real().is_some());
        assert!(sample_ginibre(0, Field::Real, &mut RngStream::new(1, 0)).is_err());
    }

    #[test]
    fn elliptical_correlation_half() {
        let mut rng = RngStream::new(17, 0);
        let m = sample_elliptical(500, 0.5, &EntryDistribution::standard_gaussian(), &mut rng).unwrap();
        let c = pair_correlation(&offdiag_pairs(&m));
        assert!((0.47..=0.53).contains(&c), "{c}");
    }

    #[test]
    fn elliptical_rho_zero_is_uncorrelated() {
        // 448 × 447 / 2 ≈ 10⁵ pairs
        let mut rng = RngStream::new(18, 0);
        let m = sample_elliptical(448, 0.0, &EntryDistribution::standard_gaussian(), &mut rng).unwrap();
        let pairs = offdiag_pairs(&m);
        assert!(pairs.len() >= 100_000);
        let c = pair_correlation(&pairs);
        assert!(c.abs() <= 0.01, "{c}");
    }

    #[test]
    fn elliptical_negative_rho_sign() {
        let pairs: Vec<(f64, f64)> = (0..10_000)
            .map(|t| {
                let mut rng = RngStream::new(19, t);
                let m = sample_elliptical(2, -0.9, &EntryDistribution::standard_gaussian(), &mut rng).unwrap();
                (m.get(0, 1).re, m.get(1, 0).re)
            })
            .collect();
        assert!(pair_correlation(&pairs) < 0.0);
    }

    #[test]
    fn elliptical_rejects_unit_rho() {
        let mut rng = RngStream::new(1, 0);
        for rho in [1.0, -1.0, 1.5, f64::NAN] {
            let r = sample_elliptical(3, rho, &EntryDistribution::standard_gaussian(), &mut rng);
            assert!(matches!(r, Err(RmtError::InvalidParameter { .. })));
        }
    }
}
