//! Quadrature, interpolation and one-dimensional search used by the laws
//! and metrics modules.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d != 0.0 {
            dp = d;
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    (p1, n as f64 * (z * p1 - p0) / (z * z - 1.0))
}

fn gl16_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(16))
}

/// 16-point Gauss–Legendre on `[a, b]`.
pub fn gl16<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let (x, w) = gl16_rule();
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    r * x.iter().zip(w).map(|(xi, wi)| wi * f(c + r * xi)).sum::<f64>()
}

/// Composite 16-point Gauss–Legendre over `panels` equal pieces.
pub fn gl16_composite<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    (0..panels).map(|k| gl16(f, a + k as f64 * h, a + (k + 1) as f64 * h)).sum()
}

/// Adaptive bisection on a 16-point Gauss–Legendre panel rule, for smooth
/// integrands. `tol` is an absolute error target.
pub fn adaptive_gl<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let l = gl16(f, a, m);
        let r = gl16(f, m, b);
        if depth == 0 || (l + r - whole).abs() <= tol {
            l + r
        } else {
            rec(f, a, m, l, 0.5 * tol, depth - 1) + rec(f, m, b, r, 0.5 * tol, depth - 1)
        }
    }
    if a == b {
        return 0.0;
    }
    rec(f, a, b, gl16(f, a, b), tol, 30)
}

/// Tanh–sinh (double exponential) quadrature on a finite interval.
///
/// Nodes cluster doubly exponentially at both ends, so algebraic endpoint
/// singularities such as `√(x−a)` or `(x−a)^{-1/2}` are integrated to near
/// machine precision. Node offsets from the endpoints are formed directly
/// rather than as differences, and `f` is never evaluated at `a` or `b`.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let r = 0.5 * (b - a);
    let c = 0.5 * (a + b);
    // contribution of the symmetric node pair at parameter t
    let pair = |t: f64| -> Option<f64> {
        let u = FRAC_PI_2 * t.sinh();
        let e = (-2.0 * u).exp();
        // 1 − tanh(u) without cancellation
        let delta = 2.0 * e / (1.0 + e);
        let w = FRAC_PI_2 * t.cosh() * 4.0 * e / ((1.0 + e) * (1.0 + e));
        let off = r * delta;
        let left = a + off;
        let right = b - off;
        // near b the node offset drops below the spacing of doubles well
        // before it does near a, so each side is kept while it is distinct
        let l = left > a && left < b;
        let rr = right < b && right > a;
        if !(l || rr) || w == 0.0 {
            return None;
        }
        let mut v = 0.0;
        if l {
            v += f(left);
        }
        if rr {
            v += f(right);
        }
        Some(w * v)
    };
    let mut h = 1.0;
    let mut sum = FRAC_PI_2 * f(c);
    let mut k = 1;
    while let Some(v) = pair(k as f64 * h) {
        sum += v;
        k += 1;
        if k > 200 {
            break;
        }
    }
    let mut prev = r * h * sum;
    for _level in 0..12 {
        h *= 0.5;
        let mut k = 1usize;
        loop {
            let t = k as f64 * h;
            match pair(t) {
                Some(v) => sum += v,
                None => break,
            }
            k += 2;
            if t > 7.0 {
                break;
            }
        }
        let est = r * h * sum;
        if (est - prev).abs() <= tol * est.abs().max(1.0) {
            return est;
        }
        prev = est;
    }
    prev
}

/// Chebyshev–Lobatto points `x_j = cos(πj/N)`, `j = 0..=N`, decreasing from 1 to −1.
pub fn chebyshev_lobatto(n: usize) -> Vec<f64> {
    (0..=n).map(|j| (PI * j as f64 / n as f64).cos()).collect()
}

/// Spectral differentiation matrix on [`chebyshev_lobatto`]`(n)`, row-major
/// `(N+1)²`, with diagonal from the negative-sum identity.
pub fn chebyshev_diff_matrix(n: usize) -> Vec<f64> {
    let m = n + 1;
    let x = chebyshev_lobatto(n);
    let c = |j: usize| {
        let s = if j % 2 == 0 { 1.0 } else { -1.0 };
        if j == 0 || j == n {
            2.0 * s
        } else {
            s
        }
    };
    let mut d = vec![0.0; m * m];
    for i in 0..m {
        let mut row = 0.0;
        for j in 0..m {
            if i != j {
                let v = c(i) / c(j) / (x[i] - x[j]);
                d[i * m + j] = v;
                row += v;
            }
        }
        d[i * m + i] = -row;
    }
    d
}

/// Barycentric interpolation through values on [`chebyshev_lobatto`] nodes
/// mapped to `[lo, hi]` (node `j` sits at `lo + (hi−lo)(1+x_j)/2`).
pub fn chebyshev_interpolate(values: &[f64], lo: f64, hi: f64, x: f64) -> f64 {
    let n = values.len() - 1;
    let s = 2.0 * (x - lo) / (hi - lo) - 1.0;
    let (mut num, mut den) = (0.0, 0.0);
    for (j, v) in values.iter().enumerate() {
        let xj = (PI * j as f64 / n as f64).cos();
        let diff = s - xj;
        if diff == 0.0 {
            return *v;
        }
        let mut w = if j % 2 == 0 { 1.0 } else { -1.0 };
        if j == 0 || j == n {
            w *= 0.5;
        }
        let t = w / diff;
        num += t * v;
        den += t;
    }
    num / den
}

/// Monotone piecewise-cubic Hermite interpolant (Fritsch–Carlson slopes).
#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    ds: Vec<f64>,
}

impl MonotoneCubic {
    /// `xs` strictly increasing, `ys` monotone.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        let n = xs.len();
        assert!(n >= 2 && ys.len() == n);
        let delta: Vec<f64> = (0..n - 1).map(|k| (ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k])).collect();
        let mut ds = vec![0.0; n];
        ds[0] = delta[0];
        ds[n - 1] = delta[n - 2];
        for k in 1..n - 1 {
            if delta[k - 1] * delta[k] <= 0.0 {
                ds[k] = 0.0;
            } else {
                // weighted harmonic mean
                let h0 = xs[k] - xs[k - 1];
                let h1 = xs[k + 1] - xs[k];
                let w1 = 2.0 * h1 + h0;
                let w2 = h1 + 2.0 * h0;
                ds[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
            }
        }
        for k in 0..n - 1 {
            if delta[k] == 0.0 {
                ds[k] = 0.0;
                ds[k + 1] = 0.0;
            } else {
                let a = ds[k] / delta[k];
                let b = ds[k + 1] / delta[k];
                let s = a * a + b * b;
                if s > 9.0 {
                    let t = 3.0 / s.sqrt();
                    ds[k] = t * a * delta[k];
                    ds[k + 1] = t * b * delta[k];
                }
            }
        }
        Self { xs, ys, ds }
    }

    /// Hermite interpolant with caller-supplied slopes (e.g. exact
    /// derivatives), passed through the Fritsch–Carlson limiter so the result
    /// stays monotone. Non-finite slopes are replaced by the limiter bound.
    pub fn with_slopes(xs: Vec<f64>, ys: Vec<f64>, mut ds: Vec<f64>) -> Self {
        let n = xs.len();
        assert!(n >= 2 && ys.len() == n && ds.len() == n);
        for k in 0..n - 1 {
            let delta = (ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k]);
            for j in [k, k + 1] {
                if !ds[j].is_finite() {
                    ds[j] = 3.0 * delta;
                }
            }
            if delta == 0.0 {
                ds[k] = 0.0;
                ds[k + 1] = 0.0;
                continue;
            }
            let a = ds[k] / delta;
            let b = ds[k + 1] / delta;
            if a < 0.0 {
                ds[k] = 0.0;
            }
            if b < 0.0 {
                ds[k + 1] = 0.0;
            }
            let (a, b) = (ds[k] / delta, ds[k + 1] / delta);
            let s = a * a + b * b;
            if s > 9.0 {
                let t = 3.0 / s.sqrt();
                ds[k] = t * a * delta;
                ds[k + 1] = t * b * delta;
            }
        }
        Self { xs, ys, ds }
    }

    /// Derivative of the interpolant.
    pub fn derivative(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x < self.xs[0] || x > self.xs[n - 1] {
            return 0.0;
        }
        let k = self.segment(x);
        let h = self.xs[k + 1] - self.xs[k];
        let t = (x - self.xs[k]) / h;
        let t2 = t * t;
        let d00 = 6.0 * t2 - 6.0 * t;
        let d10 = 3.0 * t2 - 4.0 * t + 1.0;
        let d01 = -6.0 * t2 + 6.0 * t;
        let d11 = 3.0 * t2 - 2.0 * t;
        (d00 * self.ys[k] + d01 * self.ys[k + 1]) / h + d10 * self.ds[k] + d11 * self.ds[k + 1]
    }

    fn segment(&self, x: f64) -> usize {
        match self.xs.binary_search_by(|v| v.total_cmp(&x)) {
            Ok(i) => i.min(self.xs.len() - 2),
            Err(i) => i.clamp(1, self.xs.len() - 1) - 1,
        }
    }

    /// Value at `x`, clamped to the end values outside the table.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        let k = self.segment(x);
        let h = self.xs[k + 1] - self.xs[k];
        let t = (x - self.xs[k]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.ys[k] + h10 * h * self.ds[k] + h01 * self.ys[k + 1] + h11 * h * self.ds[k + 1]
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }
}

/// Golden-section minimization of a unimodal function on `[a, b]`.
/// Returns `(argmin, min)`.
pub fn golden_section<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    let mut best = (x, fx);
    for (xx, ff) in [(c, fc), (d, fd)] {
        if ff < best.1 {
            best = (xx, ff);
        }
    }
    best
}

/// Bisection for a root of `f - target` on `[a, b]`, assuming `f` is
/// non-decreasing there. Returns the smallest `x` (to `tol`) with `f(x) ≥ target`.
pub fn invert_monotone<F: Fn(f64) -> f64>(f: &F, target: f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        let m = 0.5 * (a + b);
        if f(m) >= target {
            b = m;
        } else {
            a = m;
        }
    }
    b
}

/// Element `i` (starting at 1) of the van der Corput sequence in `base`.
pub fn halton(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(16);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        for k in 0..32u32 {
            let q: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(k as i32)).sum();
            let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
            assert!((q - exact).abs() < 1e-14, "k={k}: {q} vs {exact}");
        }
    }

    #[test]
    fn tanh_sinh_handles_endpoint_singularities() {
        let v = tanh_sinh(&|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, 1e-14);
        assert!((v - 2.0).abs() < 1e-11, "{v}");
        let v = tanh_sinh(&|x: f64| (1.0 - x * x).sqrt(), -1.0, 1.0, 1e-14);
        assert!((v - PI / 2.0).abs() < 1e-13, "{v}");
        let v = tanh_sinh(&|x: f64| (-x).exp(), 0.0, 3.0, 1e-14);
        assert!((v - (1.0 - (-3f64).exp())).abs() < 1e-14);
    }

    #[test]
    fn adaptive_gl_on_oscillatory_integrand() {
        let v = adaptive_gl(&|x: f64| (10.0 * x).cos(), 0.0, PI, 1e-13);
        assert!(v.abs() < 1e-12, "{v}");
    }

    #[test]
    fn chebyshev_differentiation_is_spectral() {
        let n = 24;
        let d = chebyshev_diff_matrix(n);
        let x = chebyshev_lobatto(n);
        let f: Vec<f64> = x.iter().map(|t| (2.0 * t).sin()).collect();
        for i in 0..=n {
            let df: f64 = (0..=n).map(|j| d[i * (n + 1) + j] * f[j]).sum();
            assert!((df - 2.0 * (2.0 * x[i]).cos()).abs() < 1e-11);
        }
        let v = chebyshev_interpolate(&f, -1.0, 1.0, 0.3);
        assert!((v - 0.6f64.sin()).abs() < 1e-13);
    }

    #[test]
    fn golden_section_finds_minimum() {
        let (x, fx) = golden_section(&|t: f64| (t - 0.3).powi(2) + 1.0, -1.0, 2.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-7 && (fx - 1.0).abs() < 1e-14);
    }

    #[test]
    fn halton_prefix() {
        assert_eq!(halton(1, 2), 0.5);
        assert_eq!(halton(2, 2), 0.25);
        assert_eq!(halton(3, 2), 0.75);
        assert!((halton(1, 3) - 1.0 / 3.0).abs() < 1e-16);
    }

    proptest! {
        #[test]
        fn monotone_cubic_preserves_monotonicity(
            steps in prop::collection::vec((0.01f64..1.0, 0.0f64..1.0), 2..30),
            probes in prop::collection::vec(0.0f64..1.0, 1..50),
        ) {
            let mut xs = vec![0.0];
            let mut ys = vec![0.0];
            for (dx, dy) in &steps {
                xs.push(xs.last().unwrap() + dx);
                ys.push(ys.last().unwrap() + dy * dy * dy);
            }
            let span = *xs.last().unwrap();
            let p = MonotoneCubic::new(xs.clone(), ys.clone());
            let mut ps: Vec<f64> = probes.iter().map(|u| u * span).collect();
            ps.sort_by(f64::total_cmp);
            let vals: Vec<f64> = ps.iter().map(|&x| p.eval(x)).collect();
            for w in vals.windows(2) {
                prop_assert!(w[1] >= w[0] - 1e-12);
            }
            for (x, y) in xs.iter().zip(&ys) {
                prop_assert!((p.eval(*x) - y).abs() < 1e-12);
            }
        }
    }
}
