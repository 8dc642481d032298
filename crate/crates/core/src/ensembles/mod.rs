//! Seeded samplers for the classical random-matrix models.
//!
//! Every sampler is a pure function of its parameters and the supplied
//! [`RngStream`]: the same stream coordinates always produce the same matrix,
//! bit for bit.

mod entry;
mod ginibre;
mod haar;
mod matrix;
mod rng;
mod singular;
mod wishart;

use num_complex::Complex64;

pub use entry::EntryDistribution;
pub use ginibre::{sample_elliptical, sample_ginibre, sample_iid};
pub use haar::{sample_haar_orthogonal, sample_haar_unitary};
pub use matrix::{DenseMatrix, Entries, Field};
pub use rng::RngStream;
pub use singular::{sample_prescribed_singular, weyl_horn_check, SingularProfile};
pub use wishart::{bai_yin_normalize, sample_real_gaussian, sample_wishart};

use crate::error::{Result, RmtError};

const UNIT_VARIANCE_TOL: f64 = 1e-9;

pub(crate) fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(RmtError::InvalidDimension("matrix size must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// Gaussian orthogonal ensemble: `N(0,1)` above the diagonal, `N(0,2)` on it.
pub fn sample_goe(n: usize, rng: &mut RngStream) -> Result<DenseMatrix> {
    sample_wigner(
        n,
        &EntryDistribution::standard_gaussian(),
        &EntryDistribution::Gaussian { mean: 0.0, variance: 2.0 },
        Field::Real,
        rng,
    )
}

/// Gaussian unitary ensemble: standard complex Gaussians above the diagonal
/// (components of variance 1/2), standard real Gaussians on it.
pub fn sample_gue(n: usize, rng: &mut RngStream) -> Result<DenseMatrix> {
    sample_wigner(
        n,
        &EntryDistribution::standard_complex_gaussian(),
        &EntryDistribution::standard_gaussian(),
        Field::Complex,
        rng,
    )
}

/// General Wigner matrix with independent entries on and above the diagonal.
///
/// The upper triangle is drawn row by row (diagonal first in each row) and
/// mirrored, conjugated in the complex case. Diagonal entries are always real.
pub fn sample_wigner(
    n: usize,
    offdiag: &EntryDistribution,
    diag: &EntryDistribution,
    field: Field,
    rng: &mut RngStream,
) -> Result<DenseMatrix> {
    check_n(n)?;
    offdiag.validate()?;
    diag.validate()?;
    if offdiag.mean().abs() > UNIT_VARIANCE_TOL || (offdiag.variance() - 1.0).abs() > UNIT_VARIANCE_TOL {
        return Err(RmtError::InvalidDistribution(format!(
            "off-diagonal entries need mean 0 and variance 1, got mean {} variance {}",
            offdiag.mean(),
            offdiag.variance()
        )));
    }
    if diag.is_complex() {
        return Err(RmtError::InvalidDistribution(
            "diagonal entries of a Wigner matrix must be real".into(),
        ));
    }
    match field {
        Field::Real => {
            if offdiag.is_complex() {
                return Err(RmtError::InvalidDistribution(
                    "complex off-diagonal law requested for a real Wigner matrix".into(),
                ));
            }
            let mut a = vec![0.0; n * n];
            for i in 0..n {
                a[i * n + i] = diag.sample_real(rng);
                for j in i + 1..n {
                    let x = offdiag.sample_real(rng);
                    a[i * n + j] = x;
                    a[j * n + i] = x;
                }
            }
            DenseMatrix::from_real(n, n, a)
        }
        Field::Complex => {
            let mut a = vec![Complex64::new(0.0, 0.0); n * n];
            for i in 0..n {
                a[i * n + i] = Complex64::new(diag.sample_real(rng), 0.0);
                for j in i + 1..n {
                    let z = offdiag.sample(rng);
                    a[i * n + j] = z;
                    a[j * n + i] = z.conj();
                }
            }
            DenseMatrix::from_complex(n, n, a)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn goe_is_exactly_symmetric() {
        let mut rng = RngStream::new(42, 0);
        let m = sample_goe(2, &mut rng).unwrap();
        assert_eq!(m.get(0, 1).re.to_bits(), m.get(1, 0).re.to_bits());
        let m = sample_goe(30, &mut rng).unwrap();
        assert_eq!(m.hermitian_defect(), Some(0.0));
    }

    #[test]
    fn goe_is_deterministic() {
        let a = sample_goe(3, &mut RngStream::new(7, 0)).unwrap();
        let b = sample_goe(3, &mut RngStream::new(7, 0)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn goe_diagonal_has_variance_two() {
        let trials = 10_000;
        let mut xs = Vec::with_capacity(trials);
        for t in 0..trials {
            let mut rng = RngStream::new(3, t as u64);
            let m = sample_goe(200, &mut rng).unwrap();
            xs.push(m.get(0, 0).re);
        }
        let mean = xs.iter().sum::<f64>() / trials as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (trials as f64 - 1.0);
        assert!((1.9..=2.1).contains(&var), "var {var}");
    }

    #[test]
    fn gue_is_hermitian_with_real_diagonal() {
        let mut rng = RngStream::new(1, 1);
        let m = sample_gue(2, &mut rng).unwrap();
        assert_eq!(m.get(1, 0), m.get(0, 1).conj());
        let m = sample_gue(40, &mut rng).unwrap();
        assert_eq!(m.hermitian_defect(), Some(0.0));
        for i in 0..40 {
            assert_eq!(m.get(i, i).im, 0.0);
        }
    }

    #[test]
    fn gue_offdiagonal_component_variance_is_half() {
        let trials = 10_000;
        let xs: Vec<f64> = (0..trials)
            .map(|t| {
                let mut rng = RngStream::new(5, t as u64);
                sample_gue(100, &mut rng).unwrap().get(0, 1).re
            })
            .collect();
        let mean = xs.iter().sum::<f64>() / trials as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (trials as f64 - 1.0);
        assert!((0.45..=0.55).contains(&var), "var {var}");
    }

    #[test]
    fn rademacher_wigner_has_sign_entries() {
        let mut rng = RngStream::new(9, 0);
        let m = sample_wigner(
            4,
            &EntryDistribution::Rademacher,
            &EntryDistribution::standard_gaussian(),
            Field::Real,
            &mut rng,
        )
        .unwrap();
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert!(m.get(i, j).re.abs() == 1.0);
                }
            }
        }
        assert_eq!(m.hermitian_defect(), Some(0.0));
    }

    #[test]
    fn wigner_rejects_non_unit_variance() {
        let mut rng = RngStream::new(9, 0);
        let err = sample_wigner(
            4,
            &EntryDistribution::UniformCentered { half_width: 1.0 },
            &EntryDistribution::standard_gaussian(),
            Field::Real,
            &mut rng,
        );
        assert!(matches!(err, Err(RmtError::InvalidDistribution(_))));
        assert!(matches!(sample_goe(0, &mut rng), Err(RmtError::InvalidDimension(_))));
        assert!(matches!(sample_gue(0, &mut rng), Err(RmtError::InvalidDimension(_))));
    }
}
