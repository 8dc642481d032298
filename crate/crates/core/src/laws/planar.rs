//! Uniform laws on the unit disc and on the ellipses `ℰ_ρ`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Result, RmtError};
use crate::numeric::halton;
use crate::spectra::Region;

const QMC_POINTS: u64 = 1_000_000;

/// Uniform probability measure on `{(Re z/(1+ρ))² + (Im z/(1−ρ))² ≤ 1}`;
/// `ρ = 0` is the unit disc.
#[derive(Debug, Clone, PartialEq)]
pub struct Law2D {
    name: String,
    semi_x: f64,
    semi_y: f64,
}

pub fn uniform_disc() -> Law2D {
    Law2D {
        name: "uniform_disc".into(),
        semi_x: 1.0,
        semi_y: 1.0,
    }
}

pub fn uniform_ellipse(rho: f64) -> Result<Law2D> {
    if !(rho.abs() < 1.0) {
        return Err(RmtError::param("rho", rho, "correlation must satisfy |rho| < 1"));
    }
    Ok(Law2D {
        name: format!("uniform_ellipse(rho={rho})"),
        semi_x: 1.0 + rho,
        semi_y: 1.0 - rho,
    })
}

impl Law2D {
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Semi-axes along the real and imaginary directions.
    pub fn semi_axes(&self) -> (f64, f64) {
        (self.semi_x, self.semi_y)
    }

    /// The support as a [`Region`].
    pub fn support(&self) -> Region {
        Region::Ellipse {
            center: Complex64::new(0.0, 0.0),
            semi_x: self.semi_x,
            semi_y: self.semi_y,
        }
    }

    /// Largest modulus on the support.
    pub fn radius(&self) -> f64 {
        self.semi_x.max(self.semi_y)
    }

    pub fn contains(&self, z: Complex64) -> bool {
        (z.re / self.semi_x).powi(2) + (z.im / self.semi_y).powi(2) <= 1.0
    }

    fn is_disc(&self) -> bool {
        self.semi_x == self.semi_y
    }

    /// Mass of `region` under the law.
    ///
    /// Exact for discs and annuli centred at 0 under the disc law and for
    /// concentric, similar ellipses; otherwise the fraction of 10⁶ Halton
    /// points, uniform in the support, that fall in the region.
    pub fn region_mass(&self, region: &Region) -> Result<f64> {
        region.validate()?;
        let origin = |c: Complex64| c.norm() == 0.0;
        let disc_mass = |r: f64| r.min(1.0).powi(2);
        match *region {
            Region::Interval { .. } => return Ok(0.0),
            Region::Disc { center, radius } if self.is_disc() && origin(center) => return Ok(disc_mass(radius)),
            Region::Annulus { center, r_in, r_out } if self.is_disc() && origin(center) => {
                return Ok(disc_mass(r_out) - disc_mass(r_in))
            }
            Region::Ellipse { center, semi_x, semi_y }
                if origin(center) && (semi_x * self.semi_y - semi_y * self.semi_x).abs() <= 1e-15 * semi_x =>
            {
                return Ok(disc_mass(semi_x / self.semi_x));
            }
            _ => {}
        }
        let mut inside = 0u64;
        for i in 1..=QMC_POINTS {
            let r = halton(i, 2).sqrt();
            let t = 2.0 * PI * halton(i, 3);
            let z = Complex64::new(self.semi_x * r * t.cos(), self.semi_y * r * t.sin());
            if region.contains(z) {
                inside += 1;
            }
        }
        Ok(inside as f64 / QMC_POINTS as f64)
    }
}
