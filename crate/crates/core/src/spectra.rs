//! Eigenvalues, singular values and the statistics of empirical spectral
//! measures: counting function, moments, Stieltjes transform.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ensembles::{DenseMatrix, Entries};
use crate::error::{Result, RmtError};
use crate::linalg;

const HERMITIAN_TOL: f64 = 1e-8;
const MAX_MOMENT: u32 = 64;

/// Eigenvalues or singular values of a matrix, with any normalization
/// already applied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    values: SpectrumValues,
    normalization: f64,
    source_dims: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "branch", content = "values", rename_all = "snake_case")]
pub enum SpectrumValues {
    /// Non-decreasing real values.
    RealSorted(Vec<f64>),
    ComplexUnsorted(Vec<Complex64>),
}

impl Spectrum {
    pub fn real(mut values: Vec<f64>, source_dims: (usize, usize)) -> Self {
        values.sort_by(f64::total_cmp);
        Self {
            values: SpectrumValues::RealSorted(values),
            normalization: 1.0,
            source_dims,
        }
    }

    pub fn complex(values: Vec<Complex64>, source_dims: (usize, usize)) -> Self {
        Self {
            values: SpectrumValues::ComplexUnsorted(values),
            normalization: 1.0,
            source_dims,
        }
    }

    pub fn values(&self) -> &SpectrumValues {
        &self.values
    }

    pub fn real_values(&self) -> Option<&[f64]> {
        match &self.values {
            SpectrumValues::RealSorted(v) => Some(v),
            SpectrumValues::ComplexUnsorted(_) => None,
        }
    }

    pub fn complex_values(&self) -> Option<&[Complex64]> {
        match &self.values {
            SpectrumValues::ComplexUnsorted(v) => Some(v),
            SpectrumValues::RealSorted(_) => None,
        }
    }

    pub fn len(&self) -> usize {
        match &self.values {
            SpectrumValues::RealSorted(v) => v.len(),
            SpectrumValues::ComplexUnsorted(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Cumulative multiplier applied to the raw values.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn source_dims(&self) -> (usize, usize) {
        self.source_dims
    }

    /// Multiplies every value by `s > 0` (order is preserved).
    pub fn scaled(&self, s: f64) -> Spectrum {
        let values = match &self.values {
            SpectrumValues::RealSorted(v) => SpectrumValues::RealSorted(v.iter().map(|x| x * s).collect()),
            SpectrumValues::ComplexUnsorted(v) => SpectrumValues::ComplexUnsorted(v.iter().map(|z| z * s).collect()),
        };
        Spectrum {
            values,
            normalization: self.normalization * s,
            source_dims: self.source_dims,
        }
    }

    /// Largest real value; `None` on the complex branch.
    pub fn max_real(&self) -> Option<f64> {
        self.real_values().and_then(|v| v.last().copied())
    }
}

fn check_hermitian(m: &DenseMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(RmtError::InvalidDimension(format!(
            "expected a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if !m.is_hermitian(HERMITIAN_TOL) {
        return Err(RmtError::ContractViolation(format!(
            "matrix is not Hermitian (defect {:e} exceeds {HERMITIAN_TOL:e}·max|m|); use eigvals_general",
            m.hermitian_defect().unwrap_or(f64::NAN)
        )));
    }
    Ok(())
}

/// Real eigenvalues of a symmetric or Hermitian matrix, non-decreasing.
pub fn eigvals_hermitian(m: &DenseMatrix) -> Result<Spectrum> {
    check_hermitian(m)?;
    let n = m.rows();
    let values = match m.entries() {
        Entries::Real(a) => linalg::dsyevd(a.clone(), n, false)?.0,
        // the row-major buffer is the column-major buffer of Mᵀ = conj(M)
        Entries::Complex(a) => linalg::zheevd(a.clone(), n, false)?.0,
    };
    Ok(Spectrum::real(values, (n, n)))
}

/// Eigenvalues of a general square matrix, in solver order.
pub fn eigvals_general(m: &DenseMatrix) -> Result<Spectrum> {
    if !m.is_square() {
        return Err(RmtError::InvalidDimension(format!(
            "expected a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let values = match m.entries() {
        Entries::Real(a) => linalg::dgeev(a.clone(), n)?,
        Entries::Complex(a) => linalg::zgeev(a.clone(), n)?,
    };
    Ok(Spectrum::complex(values, (n, n)))
}

/// Singular values in non-decreasing order; `min(rows, cols)` of them.
pub fn singular_values(m: &DenseMatrix) -> Result<Spectrum> {
    // the transpose has the same singular values, so the row-major buffer
    // is passed as a cols × rows column-major matrix
    let (r, c) = (m.rows(), m.cols());
    let s = match m.entries() {
        Entries::Real(a) => linalg::dgesdd(a.clone(), c, r)?,
        Entries::Complex(a) => linalg::zgesdd(a.clone(), c, r)?,
    };
    Ok(Spectrum::real(s, (r, c)))
}

/// Largest modulus of a component of a unit eigenvector, over all eigenvectors.
pub fn eigvec_delocalization(m: &DenseMatrix) -> Result<f64> {
    check_hermitian(m)?;
    let n = m.rows();
    let max = match m.entries() {
        Entries::Real(a) => {
            let (_, v) = linalg::dsyevd(a.clone(), n, true)?;
            v.expect("vectors requested").iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
        }
        Entries::Complex(a) => {
            // eigenvectors of conj(M) are the conjugates of those of M; moduli agree
            let (_, v) = linalg::zheevd(a.clone(), n, true)?;
            v.expect("vectors requested").iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
        }
    };
    Ok(max)
}

/// Uniform probability measure on finitely many points.
#[derive(Debug, Clone, PartialEq)]
pub enum EmpiricalMeasure {
    /// Sorted real support.
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

impl EmpiricalMeasure {
    pub fn from_real(mut points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(RmtError::InvalidInput("empirical measure needs at least one point".into()));
        }
        if points.iter().any(|x| x.is_nan()) {
            return Err(RmtError::InvalidInput("NaN in empirical measure support".into()));
        }
        points.sort_by(f64::total_cmp);
        Ok(EmpiricalMeasure::Real(points))
    }

    pub fn from_complex(points: Vec<Complex64>) -> Result<Self> {
        if points.is_empty() {
            return Err(RmtError::InvalidInput("empirical measure needs at least one point".into()));
        }
        Ok(EmpiricalMeasure::Complex(points))
    }

    pub fn len(&self) -> usize {
        match self {
            EmpiricalMeasure::Real(v) => v.len(),
            EmpiricalMeasure::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Mass of each atom.
    pub fn weight(&self) -> f64 {
        1.0 / self.len() as f64
    }

    pub fn real_support(&self) -> Option<&[f64]> {
        match self {
            EmpiricalMeasure::Real(v) => Some(v),
            EmpiricalMeasure::Complex(_) => None,
        }
    }

    pub fn complex_support(&self) -> Option<&[Complex64]> {
        match self {
            EmpiricalMeasure::Complex(v) => Some(v),
            EmpiricalMeasure::Real(_) => None,
        }
    }

    /// Support points as complex numbers regardless of branch.
    pub fn points(&self) -> Vec<Complex64> {
        match self {
            EmpiricalMeasure::Real(v) => v.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            EmpiricalMeasure::Complex(v) => v.clone(),
        }
    }
}

/// Empirical spectral measure of `s` after multiplying by `extra_scale`.
pub fn empirical_measure(s: &Spectrum, extra_scale: f64) -> Result<EmpiricalMeasure> {
    if !(extra_scale > 0.0 && extra_scale.is_finite()) {
        return Err(RmtError::param("extra_scale", extra_scale, "must be positive"));
    }
    match s.values() {
        SpectrumValues::RealSorted(v) => EmpiricalMeasure::from_real(v.iter().map(|x| x * extra_scale).collect()),
        SpectrumValues::ComplexUnsorted(v) => {
            EmpiricalMeasure::from_complex(v.iter().map(|z| z * extra_scale).collect())
        }
    }
}

/// Closed region of ℝ or ℂ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    Interval { a: f64, b: f64 },
    Disc { center: Complex64, radius: f64 },
    Annulus { center: Complex64, r_in: f64, r_out: f64 },
    /// `{z : Re(conj(normal)·z) ≤ offset}`.
    HalfPlane { normal: Complex64, offset: f64 },
    /// `{z : (Re(z−c)/ax)² + (Im(z−c)/ay)² ≤ 1}`.
    Ellipse { center: Complex64, semi_x: f64, semi_y: f64 },
}

impl Region {
    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            Region::Interval { a, b } => a <= b,
            Region::Disc { radius, .. } => *radius >= 0.0,
            Region::Annulus { r_in, r_out, .. } => 0.0 <= *r_in && r_in <= r_out,
            Region::HalfPlane { normal, .. } => normal.norm() > 0.0,
            Region::Ellipse { semi_x, semi_y, .. } => *semi_x > 0.0 && *semi_y > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(RmtError::InvalidRegion(format!("malformed region {self:?}")))
        }
    }

    pub fn is_one_dimensional(&self) -> bool {
        matches!(self, Region::Interval { .. })
    }

    pub fn contains(&self, z: Complex64) -> bool {
        match *self {
            Region::Interval { a, b } => z.im == 0.0 && a <= z.re && z.re <= b,
            Region::Disc { center, radius } => (z - center).norm() <= radius,
            Region::Annulus { center, r_in, r_out } => {
                let r = (z - center).norm();
                r_in <= r && r <= r_out
            }
            Region::HalfPlane { normal, offset } => (normal.conj() * z).re <= offset,
            Region::Ellipse { center, semi_x, semi_y } => {
                let w = z - center;
                (w.re / semi_x).powi(2) + (w.im / semi_y).powi(2) <= 1.0
            }
        }
    }
}

/// `𝒩(A) = #{j : λ_j ∈ A}` with closed boundaries.
///
/// Intervals apply only to real support; the planar regions accept either
/// (real points are embedded in ℂ).
pub fn counting(mu: &EmpiricalMeasure, region: &Region) -> Result<usize> {
    region.validate()?;
    match (mu, region) {
        (EmpiricalMeasure::Real(v), Region::Interval { a, b }) => {
            let lo = v.partition_point(|x| x < a);
            let hi = v.partition_point(|x| x <= b);
            Ok(hi.saturating_sub(lo))
        }
        (EmpiricalMeasure::Complex(_), Region::Interval { .. }) => Err(RmtError::InvalidRegion(
            "an interval cannot be used with complex support".into(),
        )),
        (EmpiricalMeasure::Real(v), r) => Ok(v.iter().filter(|&&x| r.contains(Complex64::new(x, 0.0))).count()),
        (EmpiricalMeasure::Complex(v), r) => Ok(v.iter().filter(|&&z| r.contains(z)).count()),
    }
}

/// `(1/n) Σ λ_jᵏ`.
pub fn spectral_moment(mu: &EmpiricalMeasure, k: u32) -> Result<Complex64> {
    if k > MAX_MOMENT {
        return Err(RmtError::param("k", k as f64, "moment order is limited to 64"));
    }
    let w = mu.weight();
    Ok(match mu {
        EmpiricalMeasure::Real(v) => Complex64::new(w * v.iter().map(|x| x.powi(k as i32)).sum::<f64>(), 0.0),
        EmpiricalMeasure::Complex(v) => v.iter().map(|z| z.powu(k)).sum::<Complex64>() * w,
    })
}

/// `S(z) = (1/n) Σ 1/(λ_j − z)` for `Im z ≠ 0`.
pub fn stieltjes(mu: &EmpiricalMeasure, z: Complex64) -> Result<Complex64> {
    let v = mu
        .real_support()
        .ok_or_else(|| RmtError::InvalidSupport("Stieltjes transform needs real support".into()))?;
    if z.im == 0.0 || !z.im.is_finite() {
        return Err(RmtError::Domain {
            function: "stieltjes",
            value: z.re,
            reason: "the transform is defined off the real axis only".into(),
        });
    }
    Ok(v.iter().map(|&x| 1.0 / (x - z)).sum::<Complex64>() * mu.weight())
}

/// `Im S(x + iε) / π`, the Poisson-smoothed density at `x`.
pub fn stieltjes_invert<S: Fn(Complex64) -> Complex64>(s: S, x: f64, eps: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(RmtError::param("eps", eps, "smoothing width must be positive"));
    }
    Ok(s(Complex64::new(x, eps)).im / std::f64::consts::PI)
}
