//! Distances between empirical spectral measures and reference laws.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Result, RmtError};
use crate::laws::Law1D;
use crate::numeric::{adaptive_gl, golden_section, invert_monotone};
use crate::spectra::{spectral_moment, EmpiricalMeasure};

/// Points farther than this from the unit circle are rejected by
/// [`wasserstein1_circle`].
pub const CIRCLE_TOL: f64 = 1e-6;
pub const MAX_MOMENT_ORDER: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistanceDetail {
    /// Where the KS supremum is attained.
    ArgMax { location: f64 },
    /// Optimal additive shift of the CDF difference for circular transport.
    Rotation { offset: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceReport {
    pub metric: String,
    pub value: f64,
    pub n_points: usize,
    pub details: Option<DistanceDetail>,
}

fn real_points<'a>(mu: &'a EmpiricalMeasure, metric: &str) -> Result<&'a [f64]> {
    mu.real_support()
        .ok_or_else(|| RmtError::InvalidSupport(format!("{metric} needs an empirical measure on the real line")))
}

/// `sup_x |F_emp(x) − F(x)|`, taking both one-sided limits at every
/// empirical point and at the atom of the law.
pub fn ks_distance(mu: &EmpiricalMeasure, law: &Law1D) -> Result<DistanceReport> {
    let xs = real_points(mu, "ks_distance")?;
    let n = xs.len();
    let w = mu.weight();
    let mut best = (0.0f64, xs[0]);
    let mut bump = |d: f64, x: f64| {
        if d > best.0 {
            best = (d, x);
        }
    };
    let mut i = 0;
    while i < n {
        let x = xs[i];
        let mut j = i;
        while j < n && xs[j] == x {
            j += 1;
        }
        bump((i as f64 * w - law.cdf_left(x)).abs(), x);
        bump((j as f64 * w - law.cdf(x)).abs(), x);
        i = j;
    }
    if let Some(atom) = law.atom() {
        let below = xs.partition_point(|&v| v < atom.location) as f64 * w;
        let upto = xs.partition_point(|&v| v <= atom.location) as f64 * w;
        bump((below - law.cdf_left(atom.location)).abs(), atom.location);
        bump((upto - law.cdf(atom.location)).abs(), atom.location);
    }
    Ok(DistanceReport {
        metric: "ks".into(),
        value: best.0.min(1.0),
        n_points: n,
        details: Some(DistanceDetail::ArgMax { location: best.1 }),
    })
}

/// `∫ |c − F(x)| dx` over `[u, v]`, for constant `c` and monotone `F`.
fn piece(law: &Law1D, c: f64, u: f64, v: f64) -> f64 {
    if v <= u {
        return 0.0;
    }
    let (lo, hi) = law.support();
    if v <= lo && law.atom().map_or(true, |a| a.location >= v) {
        return c * (v - u);
    }
    if u >= hi {
        return (1.0 - c) * (v - u);
    }
    let int_f = |a: f64, b: f64| adaptive_gl(&|x| law.cdf(x), a, b, 1e-9 * (b - a));
    let fu = law.cdf(u);
    let fv = law.cdf_left(v);
    if fv <= c {
        c * (v - u) - int_f(u, v)
    } else if fu >= c {
        int_f(u, v) - c * (v - u)
    } else {
        let x = invert_monotone(&|x| law.cdf(x), c, u, v, 1e-13 * (v - u).max(1.0));
        (c * (x - u) - int_f(u, x)) + (int_f(x, v) - c * (v - x))
    }
}

/// `∫ |F_emp − F| dx`, integrated exactly between breakpoints (empirical
/// points, the ends of the law's support and its atom), with the law CDF
/// integrated by adaptive quadrature on each piece.
pub fn wasserstein1_line(mu: &EmpiricalMeasure, law: &Law1D) -> Result<DistanceReport> {
    let xs = real_points(mu, "wasserstein1_line")?;
    let n = xs.len();
    let w = mu.weight();
    let (lo, hi) = law.support();
    let mut breaks: Vec<f64> = xs.to_vec();
    breaks.push(lo);
    breaks.push(hi);
    if let Some(a) = law.atom() {
        breaks.push(a.location);
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let mut total = 0.0;
    for pair in breaks.windows(2) {
        let (u, v) = (pair[0], pair[1]);
        let c = xs.partition_point(|&t| t <= u) as f64 * w;
        total += piece(law, c, u, v);
    }
    Ok(DistanceReport {
        metric: "w1_line".into(),
        value: total.max(0.0),
        n_points: n,
        details: None,
    })
}

/// `∫ |F − G| dx` between two empirical measures on the line.
pub fn wasserstein1_empirical(mu: &EmpiricalMeasure, nu: &EmpiricalMeasure) -> Result<f64> {
    let a = real_points(mu, "wasserstein1_empirical")?;
    let b = real_points(nu, "wasserstein1_empirical")?;
    let (wa, wb) = (mu.weight(), nu.weight());
    let mut pts: Vec<f64> = a.iter().chain(b).copied().collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    Ok(pts
        .windows(2)
        .map(|p| {
            let fa = a.partition_point(|&t| t <= p[0]) as f64 * wa;
            let fb = b.partition_point(|&t| t <= p[0]) as f64 * wb;
            (fa - fb).abs() * (p[1] - p[0])
        })
        .sum())
}

/// Unwrapped CDF difference `D(t) = F_emp(t) − t/2π` on `[0, 2π)`, stored as
/// the segment endpoints and the empirical level on each segment.
struct CircleDiff {
    cuts: Vec<f64>,
    levels: Vec<f64>,
}

impl CircleDiff {
    fn new(angles: &[f64]) -> Self {
        let n = angles.len() as f64;
        let mut cuts = vec![0.0];
        cuts.extend_from_slice(angles);
        cuts.push(2.0 * PI);
        let levels = (0..cuts.len() - 1).map(|k| k as f64 / n).collect();
        Self { cuts, levels }
    }

    /// `∫₀^{2π} |D(t) − c| dt` in closed form: on each segment the integrand
    /// is `|α − t/2π|` with `α` the level minus `c`.
    fn cost(&self, c: f64) -> f64 {
        let h = |u: f64, a: f64| 0.5 * (u - a) * (u - a).abs();
        self.levels
            .iter()
            .enumerate()
            .map(|(k, &lev)| {
                let a = lev - c;
                let (u0, u1) = (self.cuts[k] / (2.0 * PI), self.cuts[k + 1] / (2.0 * PI));
                2.0 * PI * (h(u1, a) - h(u0, a))
            })
            .sum()
    }

    /// Lebesgue measure of `{t : D(t) ≤ c}` divided by 2π.
    fn below(&self, c: f64) -> f64 {
        self.levels
            .iter()
            .enumerate()
            .map(|(k, &lev)| {
                let (u0, u1) = (self.cuts[k] / (2.0 * PI), self.cuts[k + 1] / (2.0 * PI));
                // lev − u ≤ c  ⇔  u ≥ lev − c
                (u1 - (lev - c).max(u0)).clamp(0.0, u1 - u0)
            })
            .sum()
    }
}

/// Geodesic `W₁` between the empirical measure of points on the unit circle
/// and the uniform law, in arc-length units.
///
/// Uses `W₁ = min_c ∫₀^{2π} |F_emp(t) − t/2π − c| dt`. The minimizing shift
/// is found by golden-section search and independently as the median of
/// `D(t)`; the smaller cost is reported.
pub fn wasserstein1_circle(mu: &EmpiricalMeasure) -> Result<DistanceReport> {
    let pts = mu.points();
    if let Some(z) = pts.iter().find(|z| (z.norm() - 1.0).abs() > CIRCLE_TOL) {
        return Err(RmtError::InvalidSupport(format!(
            "point {z} lies {:e} off the unit circle",
            (z.norm() - 1.0).abs()
        )));
    }
    let mut angles: Vec<f64> = pts.iter().map(|z| z.im.atan2(z.re).rem_euclid(2.0 * PI)).collect();
    angles.sort_by(f64::total_cmp);
    let diff = CircleDiff::new(&angles);
    let (c_gs, v_gs) = golden_section(&|c| diff.cost(c), -1.0, 1.0, 1e-8);
    let c_med = invert_monotone(&|c| diff.below(c), 0.5, -1.0, 1.0, 1e-15);
    let v_med = diff.cost(c_med);
    let (offset, value) = if v_med <= v_gs { (c_med, v_med) } else { (c_gs, v_gs) };
    Ok(DistanceReport {
        metric: "w1_circle".into(),
        value: value.max(0.0),
        n_points: pts.len(),
        details: Some(DistanceDetail::Rotation { offset }),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentRow {
    pub k: u32,
    pub empirical: f64,
    pub reference: f64,
    pub abs_err: f64,
}

/// Empirical against reference moments for `k = 1..=k_max`.
pub fn moment_compare(mu: &EmpiricalMeasure, law: &Law1D, k_max: u32) -> Result<Vec<MomentRow>> {
    if k_max > MAX_MOMENT_ORDER {
        return Err(RmtError::param("k_max", k_max as f64, "moment comparison is limited to k <= 16"));
    }
    real_points(mu, "moment_compare")?;
    (1..=k_max)
        .map(|k| {
            let empirical = spectral_moment(mu, k)?.re;
            let reference = law.moment(k);
            Ok(MomentRow {
                k,
                empirical,
                reference,
                abs_err: (empirical - reference).abs(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::RngStream;
    use crate::laws::{marchenko_pastur, point_mass, semicircle, uniform, RadiusMode};
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn emp(v: Vec<f64>) -> EmpiricalMeasure {
        EmpiricalMeasure::from_real(v).unwrap()
    }

    fn quantile_points(law: &Law1D, n: usize) -> Vec<f64> {
        (1..=n).map(|k| law.quantile((k as f64 - 0.5) / n as f64)).collect()
    }

    /// `∫₀¹ |Q_emp(u) − Q(u)| du` by midpoint sums on a fine grid.
    fn w1_by_quantiles(xs: &[f64], law: &Law1D, m: usize) -> f64 {
        let n = xs.len();
        (0..m)
            .map(|i| {
                let u = (i as f64 + 0.5) / m as f64;
                let qe = xs[((u * n as f64) as usize).min(n - 1)];
                (qe - law.quantile(u)).abs()
            })
            .sum::<f64>()
            / m as f64
    }

    #[test]
    fn ks_atom_against_narrow_uniform() {
        let law = uniform(-1e-9, 1e-9).unwrap();
        let d = ks_distance(&emp(vec![0.0]), &law).unwrap();
        assert!((d.value - 0.5).abs() < 1e-6);
    }

    #[test]
    fn ks_quantile_embedding() {
        let law = semicircle(RadiusMode::Wigner2);
        let n = 1000;
        let d = ks_distance(&emp(quantile_points(&law, n)), &law).unwrap();
        assert!(d.value <= 0.5 / n as f64 + 1e-8, "{}", d.value);
    }

    #[test]
    fn ks_counts_the_law_atom() {
        let law = marchenko_pastur(2.0).unwrap();
        // all points well inside the bulk: the atom alone gives 0.5
        let d = ks_distance(&emp(vec![1.0, 2.0, 3.0]), &law).unwrap();
        assert!(d.value >= 0.5 - 1e-12);
        // a single point at the atom still leaves the continuous half unmatched
        let d = ks_distance(&emp(vec![0.0]), &law).unwrap();
        assert!((d.value - 0.5).abs() < 1e-12, "{}", d.value);
    }

    #[test]
    fn ks_iid_semicircle_calibration() {
        let law = semicircle(RadiusMode::Wigner2);
        let mut rng = RngStream::new(11, 0);
        let mut ok = 0;
        for _ in 0..100 {
            let xs: Vec<f64> = (0..10_000).map(|_| law.quantile(rng.uniform())).collect();
            if ks_distance(&emp(xs), &law).unwrap().value <= 0.025 {
                ok += 1;
            }
        }
        assert!(ok >= 95, "{ok}");
    }

    #[test]
    fn w1_point_masses() {
        let d = wasserstein1_line(&emp(vec![0.0]), &point_mass(1.0).unwrap()).unwrap();
        assert!((d.value - 1.0).abs() < 1e-12, "{}", d.value);
    }

    #[test]
    fn w1_two_atoms_against_uniform() {
        let law = uniform(-1.0, 1.0).unwrap();
        // ∫|F_emp − F|: atoms at ±1/2 give 4 triangles of area 1/16
        let d = wasserstein1_line(&emp(vec![-0.5, 0.5]), &law).unwrap();
        assert!((d.value - 0.25).abs() < 1e-9, "{}", d.value);
        // atoms at ±1 give two triangles of area 1/4
        let d = wasserstein1_line(&emp(vec![-1.0, 1.0]), &law).unwrap();
        assert!((d.value - 0.5).abs() < 1e-9, "{}", d.value);
    }

    #[test]
    fn w1_matches_quantile_route() {
        let mut rng = RngStream::new(5, 1);
        for law in [semicircle(RadiusMode::Wigner2), marchenko_pastur(0.5).unwrap(), marchenko_pastur(2.0).unwrap()] {
            let xs: Vec<f64> = (0..200).map(|_| 4.0 * rng.uniform() - 1.0).collect();
            let mu = emp(xs);
            let exact = wasserstein1_line(&mu, &law).unwrap().value;
            let oracle = w1_by_quantiles(mu.real_support().unwrap(), &law, 200_000);
            assert!((exact - oracle).abs() < 2e-4, "{}: {exact} vs {oracle}", law.name());
        }
    }

    #[test]
    fn w1_quantile_rate() {
        let law = semicircle(RadiusMode::Wigner2);
        let a = wasserstein1_line(&emp(quantile_points(&law, 200)), &law).unwrap().value;
        let b = wasserstein1_line(&emp(quantile_points(&law, 400)), &law).unwrap().value;
        assert!((a / b - 2.0).abs() <= 0.4, "{a} {b}");
    }

    fn circle(angles: &[f64]) -> EmpiricalMeasure {
        EmpiricalMeasure::from_complex(angles.iter().map(|&t| Complex64::from_polar(1.0, t)).collect()).unwrap()
    }

    #[test]
    fn circle_evenly_spaced() {
        for n in [1usize, 2, 7, 100] {
            let a: Vec<f64> = (0..n).map(|k| 2.0 * PI * k as f64 / n as f64 + 0.3).collect();
            let d = wasserstein1_circle(&circle(&a)).unwrap();
            assert!((d.value - PI / (2.0 * n as f64)).abs() < 1e-9, "n={n}: {}", d.value);
        }
    }

    #[test]
    fn circle_single_atom_and_rotation() {
        let d = wasserstein1_circle(&circle(&[2.0])).unwrap();
        assert!((d.value - PI / 2.0).abs() < 1e-9);
        let mut rng = RngStream::new(3, 3);
        let a: Vec<f64> = (0..50).map(|_| 2.0 * PI * rng.uniform()).collect();
        let b: Vec<f64> = a.iter().map(|t| t + 1.234).collect();
        let (x, y) = (wasserstein1_circle(&circle(&a)).unwrap(), wasserstein1_circle(&circle(&b)).unwrap());
        assert!((x.value - y.value).abs() <= 1e-9);
    }

    #[test]
    fn circle_rejects_off_circle() {
        let mu = EmpiricalMeasure::from_complex(vec![Complex64::new(1.1, 0.0)]).unwrap();
        assert!(matches!(wasserstein1_circle(&mu), Err(RmtError::InvalidSupport(_))));
    }

    #[test]
    fn circle_iid_scale() {
        let n = 400;
        let mut rng = RngStream::new(9, 0);
        let mut vals: Vec<f64> = (0..100)
            .map(|_| {
                let a: Vec<f64> = (0..n).map(|_| 2.0 * PI * rng.uniform()).collect();
                wasserstein1_circle(&circle(&a)).unwrap().value
            })
            .collect();
        vals.sort_by(f64::total_cmp);
        let med = vals[50];
        let s = (n as f64).sqrt();
        assert!(0.3 / s <= med && med <= 3.0 / s, "{med}");
    }

    #[test]
    fn circle_golden_section_agrees_with_median() {
        let mut rng = RngStream::new(1, 2);
        let a: Vec<f64> = (0..37).map(|_| 2.0 * PI * rng.uniform()).collect();
        let mut s = a.clone();
        s.sort_by(f64::total_cmp);
        let diff = CircleDiff::new(&s);
        let (_, v) = golden_section(&|c| diff.cost(c), -1.0, 1.0, 1e-8);
        let c = invert_monotone(&|c| diff.below(c), 0.5, -1.0, 1.0, 1e-15);
        assert!((diff.cost(c) - v).abs() < 1e-12);
        // brute-force scan of the shift agrees too
        let scan = (0..20_001).map(|i| diff.cost(-1.0 + i as f64 * 1e-4)).fold(f64::INFINITY, f64::min);
        assert!(v <= scan + 1e-12 && scan - v < 1e-6);
    }

    #[test]
    fn moment_examples() {
        let law = semicircle(RadiusMode::Wigner2);
        let rows = moment_compare(&emp(quantile_points(&law, 2000)), &law, 4).unwrap();
        assert!(rows[0].reference.abs() < 1e-12);
        assert!((rows[1].reference - 1.0).abs() < 1e-8 && (rows[3].reference - 2.0).abs() < 1e-8);
        assert!(rows.iter().all(|r| r.abs_err < 1e-2));
        let mp = marchenko_pastur(1.0).unwrap();
        assert!((moment_compare(&emp(vec![1.0]), &mp, 1).unwrap()[0].reference - 1.0).abs() < 1e-8);
        assert!(moment_compare(&emp(vec![1.0]), &mp, 17).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn metric_ranges(v in prop::collection::vec(-3.0f64..3.0, 1..60)) {
            let law = semicircle(RadiusMode::Wigner2);
            let mu = emp(v);
            let ks = ks_distance(&mu, &law).unwrap().value;
            prop_assert!((0.0..=1.0).contains(&ks));
            prop_assert!(wasserstein1_line(&mu, &law).unwrap().value >= 0.0);
        }

        #[test]
        fn w1_triangle(v in prop::collection::vec(-2.5f64..2.5, 1..40), shift in -0.5f64..0.5) {
            let law = semicircle(RadiusMode::Wigner2);
            let mu = emp(v.clone());
            let nu = emp(v.iter().map(|x| x + shift).collect());
            let a = wasserstein1_line(&mu, &law).unwrap().value;
            let b = wasserstein1_line(&nu, &law).unwrap().value;
            let d = wasserstein1_empirical(&mu, &nu).unwrap();
            prop_assert!((d - shift.abs()).abs() < 1e-9);
            prop_assert!((a - b).abs() <= d + 1e-7);
        }
    }
}
