//! Static SVG figures: histograms with a density overlay and planar scatters
//! with support boundaries.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Result, RmtError};
use crate::laws::{uniform_disc, uniform_ellipse, Law1D, Law2D, RingRadii};
use crate::spectra::EmpiricalMeasure;

/// Output files are kept below this size; scatters are thinned to fit.
pub const MAX_SVG_BYTES: usize = 2_000_000;
pub const MAX_BINS: usize = 1000;
const CURVE_POINTS: usize = 400;
const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 40.0;
/// Generous upper bound on the bytes one scatter point takes.
const BYTES_PER_POINT: usize = 64;

/// Support boundary drawn on a scatter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Overlay {
    /// Boundary of the uniform disc law scaled by `radius`.
    Circle { radius: f64 },
    /// Boundary of the elliptical law with correlation `rho`.
    Ellipse { rho: f64 },
    /// Inner and outer circles of a single ring.
    Annulus { inner: f64, outer: f64 },
}

impl Overlay {
    pub fn from_ring(r: &RingRadii) -> Overlay {
        Overlay::Annulus { inner: r.a, outer: r.b }
    }

    /// Centered ellipses `(semi_x, semi_y)` to draw.
    fn ellipses(&self) -> Result<Vec<(f64, f64)>> {
        Ok(match *self {
            Overlay::Circle { radius } => {
                let r = uniform_disc().radius() * radius;
                vec![(r, r)]
            }
            Overlay::Ellipse { rho } => vec![uniform_ellipse(rho)?.semi_axes()],
            Overlay::Annulus { inner, outer } => vec![(inner, inner), (outer, outer)],
        })
    }
}

impl From<&Law2D> for Overlay {
    fn from(law: &Law2D) -> Overlay {
        let (a, b) = law.semi_axes();
        // semi-axes 1 ± rho
        Overlay::Ellipse { rho: (a - b) / (a + b) }
    }
}

fn write_file(path: &Path, svg: &str) -> Result<()> {
    std::fs::write(path, svg).map_err(|e| RmtError::io(path, e))
}

/// Freedman–Diaconis bin count for sorted data.
pub fn freedman_diaconis_bins(sorted: &[f64]) -> usize {
    let n = sorted.len();
    if n < 2 {
        return 1;
    }
    let q = |p: f64| sorted[((n - 1) as f64 * p).round() as usize];
    let iqr = q(0.75) - q(0.25);
    let range = sorted[n - 1] - sorted[0];
    if !(iqr > 0.0) || !(range > 0.0) {
        return 1;
    }
    let h = 2.0 * iqr / (n as f64).cbrt();
    ((range / h).ceil() as usize).clamp(1, MAX_BINS)
}

/// Histogram of a real measure, normalized as a density, with the density of
/// `law` drawn as a single path. One `rect` element per bin. `bins = None`
/// uses the Freedman–Diaconis rule.
pub fn render_svg_histogram(mu: &EmpiricalMeasure, law: Option<&Law1D>, bins: Option<usize>) -> Result<String> {
    let xs = mu
        .real_support()
        .ok_or_else(|| RmtError::InvalidSupport("histograms need a real measure".into()))?;
    let bins = bins.unwrap_or_else(|| freedman_diaconis_bins(xs));
    if bins == 0 || bins > MAX_BINS {
        return Err(RmtError::InvalidInput(format!("bin count must lie in 1..={MAX_BINS}")));
    }
    let (mut lo, mut hi) = (xs[0], xs[xs.len() - 1]);
    if let Some(l) = law {
        let (a, b) = l.support();
        lo = lo.min(a);
        hi = hi.max(b);
    }
    if hi <= lo {
        lo -= 0.5;
        hi += 0.5;
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &x in xs {
        let k = (((x - lo) / width) as usize).min(bins - 1);
        counts[k] += 1;
    }
    let n = xs.len() as f64;
    let heights: Vec<f64> = counts.iter().map(|&c| c as f64 / (n * width)).collect();
    let curve: Vec<(f64, f64)> = match law {
        Some(l) => (0..CURVE_POINTS)
            .map(|i| {
                let x = lo + (hi - lo) * i as f64 / (CURVE_POINTS - 1) as f64;
                (x, l.density(x))
            })
            .collect(),
        None => Vec::new(),
    };
    let top = heights
        .iter()
        .chain(curve.iter().map(|(_, y)| y).filter(|y| y.is_finite()))
        .fold(0.0f64, |m, y| m.max(*y))
        .max(f64::MIN_POSITIVE)
        * 1.05;
    let sx = |x: f64| MARGIN + (x - lo) / (hi - lo) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y / top).min(1.0) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        s,
        r##"<line x1="{MARGIN}" y1="{0}" x2="{1}" y2="{0}" stroke="#333"/>"##,
        HEIGHT - MARGIN,
        WIDTH - MARGIN
    );
    for (k, h) in heights.iter().enumerate() {
        let x0 = sx(lo + k as f64 * width);
        let x1 = sx(lo + (k + 1) as f64 * width);
        let y = sy(*h);
        let _ = writeln!(
            s,
            r##"<rect x="{x0:.3}" y="{y:.3}" width="{:.3}" height="{:.3}" fill="#9ecae1" stroke="#3182bd" stroke-width="0.5"/>"##,
            x1 - x0,
            HEIGHT - MARGIN - y
        );
    }
    if let Some(l) = law {
        let mut d = String::new();
        for (i, (x, y)) in curve.iter().enumerate() {
            let y = if y.is_finite() { *y } else { top };
            let _ = write!(d, "{}{:.3},{:.3} ", if i == 0 { "M" } else { "L" }, sx(*x), sy(y));
        }
        let _ = writeln!(s, r##"<path d="{}" fill="none" stroke="#de2d26" stroke-width="1.5"/>"##, d.trim_end());
        let _ = writeln!(s, r#"<text x="{MARGIN}" y="20" font-size="12">{}</text>"#, escape(l.name()));
    }
    let _ = writeln!(
        s,
        r#"<text x="{MARGIN}" y="{}" font-size="10">{lo:.3}</text><text x="{}" y="{}" font-size="10" text-anchor="end">{hi:.3}</text>"#,
        HEIGHT - MARGIN + 14.0,
        WIDTH - MARGIN,
        HEIGHT - MARGIN + 14.0
    );
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn emit_svg_histogram(mu: &EmpiricalMeasure, law: Option<&Law1D>, bins: Option<usize>, path: &Path) -> Result<()> {
    write_file(path, &render_svg_histogram(mu, law, bins)?)
}

/// One scatter panel.
#[derive(Debug, Clone)]
pub struct Panel<'a> {
    pub title: String,
    pub measure: &'a EmpiricalMeasure,
    pub overlays: Vec<Overlay>,
}

/// Side-by-side scatter panels sharing one square scale. Point sets are
/// thinned evenly when the file would exceed [`MAX_SVG_BYTES`].
pub fn render_svg_scatter(panels: &[Panel<'_>]) -> Result<String> {
    if panels.is_empty() {
        return Err(RmtError::InvalidInput("scatter needs at least one panel".into()));
    }
    let mut sets: Vec<Vec<Complex64>> = Vec::with_capacity(panels.len());
    let mut shapes: Vec<Vec<(f64, f64)>> = Vec::with_capacity(panels.len());
    let mut extent = 0.0f64;
    for p in panels {
        let pts = p.measure.points();
        extent = pts.iter().fold(extent, |m, z| m.max(z.re.abs()).max(z.im.abs()));
        let mut e = Vec::new();
        for o in &p.overlays {
            e.extend(o.ellipses()?);
        }
        extent = e.iter().fold(extent, |m, (a, b)| m.max(*a).max(*b));
        sets.push(pts);
        shapes.push(e);
    }
    let extent = if extent > 0.0 { extent * 1.05 } else { 1.0 };
    let total: usize = sets.iter().map(|s| s.len()).sum();
    let budget = (MAX_SVG_BYTES - 16_384) / BYTES_PER_POINT;
    let stride = total.div_ceil(budget).max(1);

    let side = 400.0;
    let w = side * panels.len() as f64;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{0}" viewBox="0 0 {w} {0}">"#,
        side + 24.0
    );
    for (k, p) in panels.iter().enumerate() {
        let ox = k as f64 * side;
        let half = side / 2.0 - 10.0;
        let cx = ox + side / 2.0;
        let cy = 24.0 + side / 2.0;
        let scale = half / extent;
        let _ = writeln!(s, r#"<g>"#);
        let _ = writeln!(s, r#"<text x="{}" y="16" font-size="12">{}</text>"#, ox + 10.0, escape(&p.title));
        for (a, b) in &shapes[k] {
            let _ = writeln!(
                s,
                r##"<ellipse cx="{cx:.2}" cy="{cy:.2}" rx="{:.3}" ry="{:.3}" fill="none" stroke="#de2d26" stroke-width="1"/>"##,
                a * scale,
                b * scale
            );
        }
        for z in sets[k].iter().step_by(stride) {
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="1.2"/>"#, cx + z.re * scale, cy - z.im * scale);
        }
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn emit_svg_scatter(mu: &EmpiricalMeasure, overlays: &[Overlay], path: &Path) -> Result<()> {
    let panel = Panel {
        title: String::new(),
        measure: mu,
        overlays: overlays.to_vec(),
    };
    write_file(path, &render_svg_scatter(&[panel])?)
}

pub fn emit_svg_panels(panels: &[Panel<'_>], path: &Path) -> Result<()> {
    write_file(path, &render_svg_scatter(panels)?)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
