//! Reference limiting laws.
//!
//! One-dimensional laws ([`Law1D`]) carry a density for the absolutely
//! continuous part, an optional atom, and a CDF. Every constructor checks
//! that the total mass is 1 to within 1e-8 by quadrature. Planar laws
//! ([`Law2D`]) answer membership and region-mass queries.

mod airy;
mod extremes;
mod painleve;
mod planar;
mod ring;
mod small_n;
mod tracy_widom;

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, RmtError};
use crate::numeric::{invert_monotone, tanh_sinh, MonotoneCubic};

pub use airy::{airy, airy_prime, AIRY_MAX, AIRY_MIN};
pub use extremes::{gumbel_cdf, rider_gamma, rider_y};
pub use painleve::{hm_left_asymptotic, painleve_hm, PainleveSolution, DEFAULT_X0, DEFAULT_X_MIN};
pub use planar::{uniform_disc, uniform_ellipse, Law2D};
pub use ring::{single_ring_radii, RingMeasure, RingRadii};
pub use small_n::{ginibre_density_smalln, weyl_density_u2};
pub use tracy_widom::{tracy_widom, tracy_widom_f2, tracy_widom_f2_density, TracyWidom, TW_MAX, TW_MIN};

const NORMALIZATION_TOL: f64 = 1e-8;
const QUAD_TOL: f64 = 1e-13;
const MP_GRID: usize = 2048;

/// Point mass carried by a law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub location: f64,
    pub mass: f64,
}

/// Which normalization of the semicircle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadiusMode {
    /// Radius 2: the limit of Wigner matrices scaled by `1/√n`.
    Wigner2,
    /// Radius 1: the limit of the Bai–Yin normalized sample covariance.
    BaiYin1,
}

#[derive(Debug, Clone)]
enum Kind {
    Semicircle { radius: f64 },
    MarchenkoPastur { alpha: f64, a: f64, b: f64, table: Arc<MonotoneCubic> },
    QuarterCircle,
    Uniform { a: f64, b: f64 },
    PointMass,
    Gumbel,
    TracyWidom,
}

/// One-dimensional reference law.
#[derive(Debug, Clone)]
pub struct Law1D {
    name: String,
    support: (f64, f64),
    atom: Option<Atom>,
    /// multiplier on the continuous part (1, or the reciprocal of its mass
    /// once an atom has been removed)
    scale: f64,
    kind: Kind,
}

impl Law1D {
    fn build(name: impl Into<String>, support: (f64, f64), atom: Option<Atom>, kind: Kind) -> Result<Self> {
        let law = Self {
            name: name.into(),
            support,
            atom,
            scale: 1.0,
            kind,
        };
        law.check_normalization()?;
        Ok(law)
    }

    fn check_normalization(&self) -> Result<()> {
        let total = self.atom.map_or(0.0, |a| a.mass) + self.continuous_mass_by_quadrature();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(RmtError::ContractViolation(format!(
                "law `{}` has total mass {total} (atom + quadrature of the density)",
                self.name
            )));
        }
        Ok(())
    }

    /// `∫ density` over the support, by quadrature.
    pub fn continuous_mass_by_quadrature(&self) -> f64 {
        let (a, b) = self.continuous_support();
        match self.kind {
            Kind::PointMass => 0.0,
            Kind::TracyWidom => crate::numeric::gl16_composite(&|x| self.density(x), a, b, 72),
            Kind::Gumbel => crate::numeric::adaptive_gl(&|x| self.density(x), a, b, 1e-14),
            _ => tanh_sinh(&|x| self.density(x), a, b, QUAD_TOL),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Closed interval outside of which the law has no mass (for the Gumbel
    /// and Tracy–Widom laws, no mass above 1e-20 resp. the evaluation envelope).
    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn atom(&self) -> Option<Atom> {
        self.atom
    }

    /// Closure of the set where the density is positive.
    pub fn continuous_support(&self) -> (f64, f64) {
        match self.kind {
            Kind::MarchenkoPastur { a, b, .. } => (a, b),
            _ => self.support,
        }
    }

    /// Density of the absolutely continuous part; 0 outside the support.
    pub fn density(&self, x: f64) -> f64 {
        self.scale * self.raw_density(x)
    }

    fn raw_density(&self, x: f64) -> f64 {
        let (lo, hi) = self.support;
        match &self.kind {
            Kind::Gumbel => (-x - (-x).exp()).exp(),
            _ if !(lo <= x && x <= hi) => 0.0,
            Kind::Semicircle { radius } => {
                let r2 = radius * radius;
                2.0 / (PI * r2) * (r2 - x * x).max(0.0).sqrt()
            }
            Kind::MarchenkoPastur { alpha, a, b, .. } => {
                if x <= 0.0 || x < *a {
                    return 0.0;
                }
                ((b - x) * (x - a)).max(0.0).sqrt() / (2.0 * PI * alpha * x)
            }
            Kind::QuarterCircle => (4.0 - x * x).max(0.0).sqrt() / PI,
            Kind::Uniform { a, b } => 1.0 / (b - a),
            Kind::PointMass => 0.0,
            Kind::TracyWidom => tracy_widom().map(|t| t.density(x)).unwrap_or(f64::NAN),
        }
    }

    /// Continuous-part CDF before scaling.
    fn raw_cdf(&self, x: f64) -> f64 {
        let (lo, hi) = self.support;
        if let Kind::Gumbel = self.kind {
            return gumbel_cdf(x);
        }
        if x < lo {
            return 0.0;
        }
        let full = || match &self.kind {
            Kind::MarchenkoPastur { alpha, .. } => alpha.recip().min(1.0),
            Kind::PointMass => 0.0,
            _ => 1.0,
        };
        if x >= hi {
            return full();
        }
        match &self.kind {
            Kind::Semicircle { radius } => {
                let r = *radius;
                0.5 + (x * (r * r - x * x).sqrt()) / (PI * r * r) + (x / r).asin() / PI
            }
            Kind::MarchenkoPastur { a, b, table, .. } => table.eval(mp_theta(x, *a, *b)),
            Kind::QuarterCircle => (x * (4.0 - x * x).sqrt() / 2.0 + 2.0 * (x / 2.0).asin()) / PI,
            Kind::Uniform { a, b } => (x - a) / (b - a),
            Kind::PointMass => 0.0,
            Kind::Gumbel => unreachable!(),
            Kind::TracyWidom => tracy_widom().map(|t| t.cdf(x)).unwrap_or(f64::NAN),
        }
    }

    /// `P(X ≤ x)`.
    pub fn cdf(&self, x: f64) -> f64 {
        let atom = self.atom.map_or(0.0, |a| if a.location <= x { a.mass } else { 0.0 });
        (atom + self.scale * self.raw_cdf(x)).clamp(0.0, 1.0)
    }

    /// `P(X < x)`; differs from [`Law1D::cdf`] only at the atom.
    pub fn cdf_left(&self, x: f64) -> f64 {
        let atom = self.atom.map_or(0.0, |a| if a.location < x { a.mass } else { 0.0 });
        (atom + self.scale * self.raw_cdf(x)).clamp(0.0, 1.0)
    }

    /// `inf {x : F(x) ≥ u}` for `u ∈ (0, 1]`, to 1e-14 absolute.
    pub fn quantile(&self, u: f64) -> f64 {
        let (lo, hi) = self.support;
        if let Some(a) = self.atom {
            if self.cdf_left(a.location) < u && u <= self.cdf(a.location) {
                return a.location;
            }
        }
        if u <= 0.0 {
            return lo;
        }
        invert_monotone(&|x| self.cdf(x), u, lo, hi, 1e-14 * (hi - lo).max(1.0))
    }

    /// `∫ xᵏ dμ` by quadrature (plus the atom).
    pub fn moment(&self, k: u32) -> f64 {
        let atom = self.atom.map_or(0.0, |a| a.mass * a.location.powi(k as i32));
        atom + self.integrate_density(&|x: f64| x.powi(k as i32))
    }

    /// `∫ f(x) density(x) dx` over the continuous part.
    fn integrate_density(&self, f: &dyn Fn(f64) -> f64) -> f64 {
        let (a, b) = self.continuous_support();
        let g = |x: f64| f(x) * self.density(x);
        match self.kind {
            Kind::PointMass => 0.0,
            Kind::TracyWidom => crate::numeric::gl16_composite(&g, a, b, 72),
            Kind::Gumbel => crate::numeric::adaptive_gl(&g, a, b, 1e-13),
            _ => tanh_sinh(&g, a, b, QUAD_TOL),
        }
    }

    /// Stieltjes transform `∫ dμ(x)/(x − z)`, for `Im z ≠ 0`.
    pub fn stieltjes(&self, z: Complex64) -> Result<Complex64> {
        if !(z.im != 0.0) || !z.re.is_finite() {
            return Err(RmtError::Domain {
                function: "stieltjes",
                value: z.im,
                reason: "needs Im z != 0".into(),
            });
        }
        let atom = self.atom.map_or(Complex64::new(0.0, 0.0), |a| a.mass / (a.location - z));
        // 1/(x − z) = ((x − Re z) + i Im z) / |x − z|²
        let re = self.integrate_density(&|x| (x - z.re) / ((x - z.re).powi(2) + z.im * z.im));
        let im = self.integrate_density(&|x| z.im / ((x - z.re).powi(2) + z.im * z.im));
        Ok(atom + Complex64::new(re, im))
    }

    pub fn mean(&self) -> f64 {
        self.moment(1)
    }

    /// The law conditioned on its absolutely continuous part (atom removed,
    /// density renormalized).
    pub fn continuous_part(&self) -> Result<Law1D> {
        let Some(atom) = self.atom else {
            return Ok(self.clone());
        };
        let cont = 1.0 - atom.mass;
        if cont <= 0.0 {
            return Err(RmtError::InvalidInput(format!("law `{}` has no continuous part", self.name)));
        }
        let mut law = self.clone();
        law.atom = None;
        law.scale = self.scale / cont;
        law.name = format!("{} (continuous part)", self.name);
        if let Kind::MarchenkoPastur { a, .. } = law.kind {
            law.support.0 = a;
        }
        law.check_normalization()?;
        Ok(law)
    }

    /// `k` equally spaced `(x, density, cdf)` rows across the support.
    pub fn tabulate(&self, k: usize) -> Vec<(f64, f64, f64)> {
        let (a, b) = self.support;
        if k == 1 {
            return vec![(a, self.density(a), self.cdf(a))];
        }
        (0..k)
            .map(|i| {
                let x = a + (b - a) * i as f64 / (k - 1) as f64;
                (x, self.density(x), self.cdf(x))
            })
            .collect()
    }
}

/// Semicircle law of radius 2 (`√(4−x²)/(2π)`) or radius 1 (`(2/π)√(1−x²)`).
pub fn semicircle(mode: RadiusMode) -> Law1D {
    let radius = match mode {
        RadiusMode::Wigner2 => 2.0,
        RadiusMode::BaiYin1 => 1.0,
    };
    Law1D::build(
        format!("semicircle(radius={radius})"),
        (-radius, radius),
        None,
        Kind::Semicircle { radius },
    )
    .expect("semicircle normalizes")
}

/// Angle variable for the MP table: `x = a + (b−a) sin²(θ/2)`, in which the
/// CDF is smooth up to both edges (including the `x^{-1/2}` edge at α = 1).
fn mp_theta(x: f64, a: f64, b: f64) -> f64 {
    2.0 * ((x - a) / (b - a)).clamp(0.0, 1.0).sqrt().asin()
}

/// Marčenko–Pastur law with ratio `α = p/n`.
///
/// Density `√((b−x)(x−a))/(2παx)` on `[a, b] = [(1−√α)², (1+√α)²]`, plus an
/// atom of mass `1 − 1/α` at 0 when `α > 1`. The CDF of the continuous part
/// is tabulated on 2048 angle nodes (clustered at both edges in `x`) by
/// panel quadrature and interpolated by monotone cubic Hermite with the
/// exact derivative as slope.
pub fn marchenko_pastur(alpha: f64) -> Result<Law1D> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(RmtError::param("alpha", alpha, "ratio must be positive"));
    }
    let sa = alpha.sqrt();
    let a = (1.0 - sa).powi(2);
    let b = (1.0 + sa).powi(2);
    let density = |x: f64| {
        if x <= 0.0 {
            return 0.0;
        }
        ((b - x) * (x - a)).max(0.0).sqrt() / (2.0 * PI * alpha * x)
    };
    // g(θ) = density(x(θ)) · dx/dθ, with dx/dθ = (b−a) sin(θ)/2
    let g = |t: f64| {
        let x = a + (b - a) * (0.5 * t).sin().powi(2);
        density(x) * 0.5 * (b - a) * t.sin()
    };
    let m = MP_GRID;
    let thetas: Vec<f64> = (0..m).map(|k| PI * k as f64 / (m - 1) as f64).collect();
    let mut cum = vec![0.0; m];
    for k in 1..m {
        let piece = if k == 1 || k == m - 1 {
            tanh_sinh(&g, thetas[k - 1], thetas[k], 1e-15)
        } else {
            crate::numeric::gl16(&g, thetas[k - 1], thetas[k])
        };
        cum[k] = cum[k - 1] + piece;
    }
    let mut slopes: Vec<f64> = thetas.iter().map(|&t| g(t)).collect();
    if a == 0.0 {
        // g(θ) → (b−a)/(2π√α)·… has a finite limit at θ = 0 for α = 1
        slopes[0] = g(1e-9);
    }
    let table = MonotoneCubic::with_slopes(thetas, cum, slopes);
    let atom = (alpha > 1.0).then(|| Atom {
        location: 0.0,
        mass: 1.0 - 1.0 / alpha,
    });
    let lo = if atom.is_some() { 0.0 } else { a };
    Law1D::build(
        format!("marchenko_pastur(alpha={alpha})"),
        (lo, b),
        atom,
        Kind::MarchenkoPastur {
            alpha,
            a,
            b,
            table: Arc::new(table),
        },
    )
}

/// Quarter-circle law `√(4−x²)/π` on `[0, 2]`.
pub fn quarter_circle() -> Law1D {
    Law1D::build("quarter_circle", (0.0, 2.0), None, Kind::QuarterCircle).expect("quarter circle normalizes")
}

/// Uniform law on `[a, b]`, `a < b`.
pub fn uniform(a: f64, b: f64) -> Result<Law1D> {
    if !(a < b && a.is_finite() && b.is_finite()) {
        return Err(RmtError::InvalidSupport(format!("uniform law needs a < b, got [{a}, {b}]")));
    }
    Law1D::build(format!("uniform[{a}, {b}]"), (a, b), None, Kind::Uniform { a, b })
}

/// Unit point mass at `at`.
pub fn point_mass(at: f64) -> Result<Law1D> {
    if !at.is_finite() {
        return Err(RmtError::param("at", at, "location must be finite"));
    }
    Law1D::build(
        format!("point_mass({at})"),
        (at, at),
        Some(Atom { location: at, mass: 1.0 }),
        Kind::PointMass,
    )
}

/// Standard Gumbel law `F(x) = exp(−e^{−x})`, supported for numerical
/// purposes on `[−5, 50]` (mass outside below 1e-20).
pub fn gumbel() -> Law1D {
    Law1D::build("gumbel", (-5.0, 50.0), None, Kind::Gumbel).expect("gumbel normalizes")
}

/// Tracy–Widom `F₂` on its evaluation envelope `[−10, 8]`.
pub fn tracy_widom_law() -> Result<Law1D> {
    tracy_widom()?;
    Law1D::build("tracy_widom_2", (TW_MIN, TW_MAX), None, Kind::TracyWidom)
}

/// Serializable description of a reference law, parseable from strings such
/// as `semicircle`, `semicircle:1`, `mp:0.25`, `quarter_circle`,
/// `tracy_widom`, `gumbel`, `uniform:-1,1`, `point:0`, `disc`, `ellipse:0.5`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum LawSpec {
    Semicircle { radius_mode: RadiusMode },
    MarchenkoPastur { alpha: f64 },
    QuarterCircle,
    TracyWidom2,
    Gumbel,
    Uniform { a: f64, b: f64 },
    PointMass { at: f64 },
    UniformDisc,
    UniformEllipse { rho: f64 },
}

impl LawSpec {
    pub fn build_1d(&self) -> Result<Law1D> {
        match *self {
            LawSpec::Semicircle { radius_mode } => Ok(semicircle(radius_mode)),
            LawSpec::MarchenkoPastur { alpha } => marchenko_pastur(alpha),
            LawSpec::QuarterCircle => Ok(quarter_circle()),
            LawSpec::TracyWidom2 => tracy_widom_law(),
            LawSpec::Gumbel => Ok(gumbel()),
            LawSpec::Uniform { a, b } => uniform(a, b),
            LawSpec::PointMass { at } => point_mass(at),
            LawSpec::UniformDisc | LawSpec::UniformEllipse { .. } => Err(RmtError::InvalidInput(format!(
                "{self:?} is a planar law, not a law on the line"
            ))),
        }
    }

    pub fn build_2d(&self) -> Result<Law2D> {
        match *self {
            LawSpec::UniformDisc => Ok(uniform_disc()),
            LawSpec::UniformEllipse { rho } => uniform_ellipse(rho),
            _ => Err(RmtError::InvalidInput(format!("{self:?} is a law on the line, not a planar law"))),
        }
    }

    pub fn is_planar(&self) -> bool {
        matches!(self, LawSpec::UniformDisc | LawSpec::UniformEllipse { .. })
    }
}

impl std::str::FromStr for LawSpec {
    type Err = RmtError;

    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = match s.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a.trim())),
            None => (s.trim(), None),
        };
        let num = |v: &str| -> Result<f64> {
            v.trim()
                .parse::<f64>()
                .map_err(|_| RmtError::Parse(format!("bad number `{v}` in law spec `{s}`")))
        };
        let one = || -> Result<f64> {
            args.ok_or_else(|| RmtError::Parse(format!("law `{name}` needs a parameter, e.g. `{name}:0.5`")))
                .and_then(num)
        };
        match name {
            "semicircle" | "wigner" => match args {
                None | Some("2") => Ok(LawSpec::Semicircle { radius_mode: RadiusMode::Wigner2 }),
                Some("1") => Ok(LawSpec::Semicircle { radius_mode: RadiusMode::BaiYin1 }),
                Some(o) => Err(RmtError::Parse(format!("semicircle radius must be 1 or 2, got `{o}`"))),
            },
            "bai_yin" => Ok(LawSpec::Semicircle { radius_mode: RadiusMode::BaiYin1 }),
            "mp" | "marchenko_pastur" => Ok(LawSpec::MarchenkoPastur { alpha: one()? }),
            "quarter_circle" | "quarter" => Ok(LawSpec::QuarterCircle),
            "tracy_widom" | "tw" | "tw2" | "tracy_widom_2" => Ok(LawSpec::TracyWidom2),
            "gumbel" => Ok(LawSpec::Gumbel),
            "uniform" => {
                let a = args.ok_or_else(|| RmtError::Parse("uniform needs `uniform:a,b`".into()))?;
                let (x, y) = a
                    .split_once(',')
                    .ok_or_else(|| RmtError::Parse("uniform needs `uniform:a,b`".into()))?;
                Ok(LawSpec::Uniform { a: num(x)?, b: num(y)? })
            }
            "point" | "point_mass" => Ok(LawSpec::PointMass { at: one()? }),
            "disc" | "circle" | "uniform_disc" => Ok(LawSpec::UniformDisc),
            "ellipse" | "uniform_ellipse" => Ok(LawSpec::UniformEllipse { rho: one()? }),
            other => Err(RmtError::Parse(format!("unknown law `{other}`"))),
        }
    }
}
