use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{sample_haar_unitary, DenseMatrix, RngStream};
use crate::error::{Result, RmtError};
use crate::linalg;

const PARTIAL_TOL: f64 = 1e-9;
const FULL_TOL: f64 = 1e-6;

/// Non-increasing list of non-negative singular values `σ₁ ≥ … ≥ σₙ ≥ 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct SingularProfile {
    sigmas: Vec<f64>,
}

impl SingularProfile {
    pub fn new(sigmas: Vec<f64>) -> Result<Self> {
        if sigmas.is_empty() {
            return Err(RmtError::InvalidProfile("profile must contain at least one value".into()));
        }
        if let Some((k, s)) = sigmas.iter().enumerate().find(|(_, s)| !(s.is_finite() && **s >= 0.0)) {
            return Err(RmtError::InvalidProfile(format!("sigma[{k}] = {s} is not a finite non-negative value")));
        }
        if let Some(k) = sigmas.windows(2).position(|w| w[1] > w[0]) {
            return Err(RmtError::InvalidProfile(format!(
                "profile must be non-increasing: sigma[{}] = {} < sigma[{}] = {}",
                k,
                sigmas[k],
                k + 1,
                sigmas[k + 1]
            )));
        }
        Ok(Self { sigmas })
    }

    /// Sorts an arbitrary list of non-negative values into a profile.
    pub fn from_unsorted(mut sigmas: Vec<f64>) -> Result<Self> {
        if sigmas.iter().any(|s| s.is_nan()) {
            return Err(RmtError::InvalidProfile("NaN in profile".into()));
        }
        sigmas.sort_by(|a, b| b.total_cmp(a));
        Self::new(sigmas)
    }

    pub fn sigmas(&self) -> &[f64] {
        &self.sigmas
    }

    pub fn len(&self) -> usize {
        self.sigmas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigmas.is_empty()
    }
}

impl TryFrom<Vec<f64>> for SingularProfile {
    type Error = RmtError;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<SingularProfile> for Vec<f64> {
    fn from(p: SingularProfile) -> Self {
        p.sigmas
    }
}

/// `A = U Σ V*` with `U`, `V` independent Haar unitaries, drawn in that order
/// from `rng`.
pub fn sample_prescribed_singular(profile: &SingularProfile, rng: &mut RngStream) -> Result<DenseMatrix> {
    let n = profile.len();
    let u = sample_haar_unitary(n, rng)?;
    let v = sample_haar_unitary(n, rng)?;
    let mut us = u.as_complex().expect("complex").to_vec();
    for row in us.chunks_mut(n) {
        for (x, s) in row.iter_mut().zip(profile.sigmas()) {
            *x *= s;
        }
    }
    // V* read through transposed strides of conj(V)
    let vc: Vec<Complex64> = v.as_complex().expect("complex").iter().map(|z| z.conj()).collect();
    let mut a = vec![Complex64::new(0.0, 0.0); n * n];
    linalg::zgemm(n, n, n, &us, (n, 1), &vc, (1, n), &mut a);
    DenseMatrix::from_complex(n, n, a)
}

/// Weyl–Horn compatibility of eigenvalue moduli with a singular profile.
///
/// With `|λ|` sorted non-increasing, requires `∏_{j≤k}|λ_j| ≤ ∏_{j≤k}σ_j`
/// for `k < n` (relative slack 1e-9) and equality of the full products
/// (relative 1e-6). Products are compared in log space.
pub fn weyl_horn_check(sigmas: &SingularProfile, lambdas: &[Complex64]) -> Result<bool> {
    let n = sigmas.len();
    if lambdas.len() != n {
        return Err(RmtError::InvalidInput(format!(
            "profile has {n} values but {} eigenvalues were given",
            lambdas.len()
        )));
    }
    let mut moduli: Vec<f64> = lambdas.iter().map(|z| z.norm()).collect();
    moduli.sort_by(|a, b| b.total_cmp(a));
    let (mut ls, mut ll) = (0.0f64, 0.0f64);
    for k in 0..n {
        ls += sigmas.sigmas()[k].ln();
        ll += moduli[k].ln();
        if k + 1 < n && !log_le(ll, ls, PARTIAL_TOL) {
            return Ok(false);
        }
    }
    Ok(log_close(ll, ls, FULL_TOL))
}

fn log_le(a: f64, b: f64, tol: f64) -> bool {
    a == f64::NEG_INFINITY || a <= b + tol.ln_1p()
}

fn log_close(a: f64, b: f64, tol: f64) -> bool {
    if a == f64::NEG_INFINITY || b == f64::NEG_INFINITY {
        return a == b;
    }
    (a - b).abs() <= tol.ln_1p()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::Field;
    use crate::spectra::{eigvals_general, singular_values};
    use proptest::prelude::*;

    #[test]
    fn unit_profile_gives_unitary() {
        let p = SingularProfile::new(vec![1.0; 50]).unwrap();
        let a = sample_prescribed_singular(&p, &mut RngStream::new(5, 0)).unwrap();
        let g = a.adjoint().matmul(&a).unwrap();
        assert!(g.max_abs_diff(&DenseMatrix::identity(50, Field::Complex)).unwrap() <= 1e-8);
    }

    #[test]
    fn singular_values_are_the_profile() {
        let p = SingularProfile::new(vec![3.0, 2.0, 1.0]).unwrap();
        let a = sample_prescribed_singular(&p, &mut RngStream::new(6, 0)).unwrap();
        let s = singular_values(&a).unwrap();
        for (x, e) in s.real_values().unwrap().iter().zip([1.0, 2.0, 3.0]) {
            assert!((x - e).abs() <= 1e-8 * e, "{x} vs {e}");
        }
    }

    #[test]
    fn profile_validation() {
        assert!(matches!(SingularProfile::new(vec![1.0, -0.5]), Err(RmtError::InvalidProfile(_))));
        assert!(matches!(SingularProfile::new(vec![1.0, 2.0]), Err(RmtError::InvalidProfile(_))));
        assert!(SingularProfile::new(vec![]).is_err());
        assert_eq!(SingularProfile::from_unsorted(vec![1.0, 3.0, 2.0]).unwrap().sigmas(), &[3.0, 2.0, 1.0]);
    }

    #[test]
    fn weyl_horn_examples() {
        let s = SingularProfile::new(vec![2.0, 1.0]).unwrap();
        let c = |x: f64| Complex64::new(x, 0.0);
        assert!(weyl_horn_check(&s, &[c(2.0), c(1.0)]).unwrap());
        assert!(!weyl_horn_check(&s, &[c(3.0), c(2.0 / 3.0)]).unwrap());
        assert!(weyl_horn_check(&s, &[c(1.0)]).is_err());
    }

    #[test]
    fn sampled_matrices_satisfy_weyl_horn() {
        let s = SingularProfile::new(vec![3.0, 2.0, 1.0]).unwrap();
        for t in 0..100 {
            let a = sample_prescribed_singular(&s, &mut RngStream::new(77, t)).unwrap();
            let ev = eigvals_general(&a).unwrap();
            assert!(weyl_horn_check(&s, ev.complex_values().unwrap()).unwrap(), "trial {t}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn singular_value_fidelity(mut sig in prop::collection::vec(0.0f64..10.0, 1..12), seed in any::<u64>()) {
            sig.sort_by(|a, b| b.total_cmp(a));
            let p = SingularProfile::new(sig.clone()).unwrap();
            let a = sample_prescribed_singular(&p, &mut RngStream::new(seed, 0)).unwrap();
            let s = singular_values(&a).unwrap();
            let top = sig[0].max(1e-300);
            for (x, e) in s.real_values().unwrap().iter().rev().zip(&sig) {
                prop_assert!((x - e).abs() <= 1e-8 * top);
            }
        }
    }
}
