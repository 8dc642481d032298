use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::rng::RngStream;
use crate::error::{Result, RmtError};

/// Scalar law of one matrix entry.
///
/// All kinds are real-valued except [`EntryDistribution::ComplexGaussian`].
/// The discrete kinds expose their raw moments exactly so entry laws can be
/// matched moment-by-moment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EntryDistribution {
    Gaussian { mean: f64, variance: f64 },
    /// `Z₁ + iZ₂` with `Z₁, Z₂` i.i.d. `N(0, variance_per_component)`.
    ComplexGaussian { variance_per_component: f64 },
    Rademacher,
    /// Uniform on `[-half_width, half_width]`.
    UniformCentered { half_width: f64 },
    TwoPoint { values: [f64; 2], probabilities: [f64; 2] },
    /// Finite discrete law given as a table of atoms and weights.
    CustomTable { values: Vec<f64>, probabilities: Vec<f64> },
}

impl EntryDistribution {
    pub fn standard_gaussian() -> Self {
        EntryDistribution::Gaussian {
            mean: 0.0,
            variance: 1.0,
        }
    }

    /// The standard complex Gaussian `(Z₁ + iZ₂)/√2`.
    pub fn standard_complex_gaussian() -> Self {
        EntryDistribution::ComplexGaussian {
            variance_per_component: 0.5,
        }
    }

    /// Checks parameter sanity (non-negative variances, probabilities summing to 1).
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(RmtError::InvalidDistribution(msg));
        match self {
            EntryDistribution::Gaussian { variance, mean } => {
                if !(variance.is_finite() && *variance >= 0.0 && mean.is_finite()) {
                    return bad(format!("gaussian needs finite mean and variance >= 0, got ({mean}, {variance})"));
                }
            }
            EntryDistribution::ComplexGaussian { variance_per_component: v } => {
                if !(v.is_finite() && *v >= 0.0) {
                    return bad(format!("complex gaussian variance must be >= 0, got {v}"));
                }
            }
            EntryDistribution::Rademacher => {}
            EntryDistribution::UniformCentered { half_width } => {
                if !(half_width.is_finite() && *half_width >= 0.0) {
                    return bad(format!("uniform half width must be >= 0, got {half_width}"));
                }
            }
            EntryDistribution::TwoPoint { values, probabilities } => {
                check_table(values, probabilities)?;
            }
            EntryDistribution::CustomTable { values, probabilities } => {
                if values.is_empty() || values.len() != probabilities.len() {
                    return bad("custom table needs equally many values and probabilities".into());
                }
                check_table(values, probabilities)?;
            }
        }
        Ok(())
    }

    pub fn is_complex(&self) -> bool {
        matches!(self, EntryDistribution::ComplexGaussian { .. })
    }

    /// Raw moments `E[X^k]`, `k = 1..=4`, of the real part.
    pub fn raw_moments(&self) -> [f64; 4] {
        match self {
            EntryDistribution::Gaussian { mean: m, variance: v } => [
                *m,
                m * m + v,
                m.powi(3) + 3.0 * m * v,
                m.powi(4) + 6.0 * m * m * v + 3.0 * v * v,
            ],
            EntryDistribution::ComplexGaussian { variance_per_component: v } => [0.0, *v, 0.0, 3.0 * v * v],
            EntryDistribution::Rademacher => [0.0, 1.0, 0.0, 1.0],
            EntryDistribution::UniformCentered { half_width: h } => [0.0, h * h / 3.0, 0.0, h.powi(4) / 5.0],
            EntryDistribution::TwoPoint { values, probabilities } => table_moments(values, probabilities),
            EntryDistribution::CustomTable { values, probabilities } => table_moments(values, probabilities),
        }
    }

    pub fn mean(&self) -> f64 {
        self.raw_moments()[0]
    }

    /// `E|X − EX|²`; for the complex Gaussian this is the total variance `2v`.
    pub fn variance(&self) -> f64 {
        match self {
            EntryDistribution::ComplexGaussian { variance_per_component: v } => 2.0 * v,
            _ => {
                let m = self.raw_moments();
                m[1] - m[0] * m[0]
            }
        }
    }

    pub fn sample_real(&self, rng: &mut RngStream) -> f64 {
        match self {
            EntryDistribution::Gaussian { mean, variance } => mean + variance.sqrt() * rng.normal(),
            EntryDistribution::ComplexGaussian { variance_per_component } => {
                variance_per_component.sqrt() * rng.normal()
            }
            EntryDistribution::Rademacher => rng.sign(),
            EntryDistribution::UniformCentered { half_width } => half_width * (2.0 * rng.uniform() - 1.0),
            EntryDistribution::TwoPoint { values, probabilities } => {
                pick(values, probabilities, rng.uniform_closed_open())
            }
            EntryDistribution::CustomTable { values, probabilities } => {
                pick(values, probabilities, rng.uniform_closed_open())
            }
        }
    }

    pub fn sample(&self, rng: &mut RngStream) -> Complex64 {
        match self {
            EntryDistribution::ComplexGaussian { variance_per_component } => {
                let s = variance_per_component.sqrt();
                let re = s * rng.normal();
                let im = s * rng.normal();
                Complex64::new(re, im)
            }
            _ => Complex64::new(self.sample_real(rng), 0.0),
        }
    }
}

fn check_table(values: &[f64], probabilities: &[f64]) -> Result<()> {
    if values.iter().any(|v| !v.is_finite()) || probabilities.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
        return Err(RmtError::InvalidDistribution(
            "table entries must be finite with non-negative probabilities".into(),
        ));
    }
    let total: f64 = probabilities.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(RmtError::InvalidDistribution(format!(
            "probabilities must sum to 1, got {total}"
        )));
    }
    Ok(())
}

fn table_moments(values: &[f64], probabilities: &[f64]) -> [f64; 4] {
    let mut m = [0.0; 4];
    for (v, p) in values.iter().zip(probabilities) {
        let mut pow = 1.0;
        for mk in m.iter_mut() {
            pow *= v;
            *mk += p * pow;
        }
    }
    m
}

fn pick(values: &[f64], probabilities: &[f64], u: f64) -> f64 {
    let mut acc = 0.0;
    for (v, p) in values.iter().zip(probabilities) {
        acc += p;
        if u < acc {
            return *v;
        }
    }
    *values.last().expect("validated non-empty table")
}
