//! Inner and outer radii of the single-ring support.

use serde::Serialize;

use super::Law1D;
use crate::ensembles::SingularProfile;
use crate::error::{Result, RmtError};
use crate::numeric::tanh_sinh;

/// Singular-value law `ν`, either a weighted list of atoms or a law on the line.
#[derive(Debug, Clone)]
pub enum RingMeasure {
    Discrete { sigmas: Vec<f64>, weights: Vec<f64> },
    Continuous(Law1D),
}

impl RingMeasure {
    /// Equal weights on the entries of a profile.
    pub fn from_profile(profile: &SingularProfile) -> Self {
        let n = profile.len();
        RingMeasure::Discrete {
            sigmas: profile.sigmas().to_vec(),
            weights: vec![1.0 / n as f64; n],
        }
    }
}

/// `a = (∫x⁻² dν)^{−1/2}`, `b = (∫x² dν)^{1/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RingRadii {
    pub a: f64,
    pub b: f64,
    /// `ν` charges 0 (or its density reaches 0), so `∫x⁻² dν = ∞` and `a = 0`.
    pub degenerate: bool,
}

impl RingRadii {
    pub fn contains(&self, r: f64, slack: f64) -> bool {
        (1.0 - slack) * self.a <= r && r <= (1.0 + slack) * self.b
    }
}

pub fn single_ring_radii(nu: &RingMeasure) -> Result<RingRadii> {
    let (inv2, sq, degenerate) = match nu {
        RingMeasure::Discrete { sigmas, weights } => {
            if sigmas.is_empty() || sigmas.len() != weights.len() {
                return Err(RmtError::InvalidInput(format!(
                    "{} atoms but {} weights",
                    sigmas.len(),
                    weights.len()
                )));
            }
            if sigmas.iter().any(|s| !(s.is_finite() && *s >= 0.0)) || weights.iter().any(|w| !(*w >= 0.0)) {
                return Err(RmtError::InvalidInput("atoms must be finite and >= 0, weights >= 0".into()));
            }
            let total: f64 = weights.iter().sum();
            if !(total > 0.0) {
                return Err(RmtError::InvalidInput("weights sum to zero".into()));
            }
            let degenerate = sigmas.iter().zip(weights).any(|(s, w)| *s == 0.0 && *w > 0.0);
            let inv2 = if degenerate {
                f64::INFINITY
            } else {
                sigmas.iter().zip(weights).map(|(s, w)| w / (s * s)).sum::<f64>() / total
            };
            let sq = sigmas.iter().zip(weights).map(|(s, w)| w * s * s).sum::<f64>() / total;
            (inv2, sq, degenerate)
        }
        RingMeasure::Continuous(law) => {
            let (lo, hi) = law.support();
            if lo < 0.0 || !hi.is_finite() {
                return Err(RmtError::InvalidSupport(format!(
                    "singular-value law must be compactly supported in [0, inf), got [{lo}, {hi}]"
                )));
            }
            let atom = law.atom();
            let degenerate = lo == 0.0 || atom.is_some_and(|a| a.location == 0.0 && a.mass > 0.0);
            let moment = |k: i32| {
                let cont = tanh_sinh(&|x: f64| x.powi(k) * law.density(x), lo, hi, 1e-14);
                cont + atom.map_or(0.0, |a| a.mass * a.location.powi(k))
            };
            let inv2 = if degenerate { f64::INFINITY } else { moment(-2) };
            (inv2, moment(2), degenerate)
        }
    };
    let a = if degenerate { 0.0 } else { inv2.powf(-0.5) };
    let b = sq.sqrt();
    if a > b * (1.0 + 1e-12) {
        return Err(RmtError::ContractViolation(format!("ring radii out of order: a = {a} > b = {b}")));
    }
    Ok(RingRadii { a: a.min(b), b, degenerate })
}
