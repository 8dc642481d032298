//! Tracy–Widom `F₂(t) = exp(−∫_t^∞ (x−t) q(x)² dx)` from the Hastings–McLeod `q`.

use std::sync::OnceLock;

use super::airy::airy_pair;
use super::painleve::{painleve_hm, PainleveSolution, DEFAULT_X0, DEFAULT_X_MIN};
use crate::error::{Result, RmtError};
use crate::numeric::gl16;

pub const TW_MIN: f64 = -10.0;
pub const TW_MAX: f64 = 8.0;

const PANEL: f64 = 0.25;

/// Cached evaluator: per-panel integrals of `q²` and `x q²` on
/// `[x_min, x0]`, accumulated from the right, plus the closed-form Airy tail.
#[derive(Debug)]
pub struct TracyWidom {
    solution: PainleveSolution,
    /// panel boundaries, increasing
    edges: Vec<f64>,
    /// `∫_{edges[k]}^∞ q²` and `∫_{edges[k]}^∞ x q²`
    tail0: Vec<f64>,
    tail1: Vec<f64>,
}

impl TracyWidom {
    pub fn new(solution: PainleveSolution) -> Self {
        let lo = solution.x_min();
        let x0 = solution.x0_start();
        let panels = ((x0 - lo) / PANEL).ceil() as usize;
        let h = (x0 - lo) / panels as f64;
        let edges: Vec<f64> = (0..=panels).map(|k| lo + k as f64 * h).collect();
        // ∫_{x0}^∞ Ai² = Ai′² − x0 Ai² and ∫_{x0}^∞ x Ai² = −(x0² Ai² − x0 Ai′² + Ai Ai′)/3;
        // q − Ai = O(Ai³) there, far below double precision
        let (a, d) = airy_pair(x0);
        let mut t0 = d * d - x0 * a * a;
        let mut t1 = -(x0 * x0 * a * a - x0 * d * d + a * d) / 3.0;
        let mut tail0 = vec![0.0; panels + 1];
        let mut tail1 = vec![0.0; panels + 1];
        tail0[panels] = t0;
        tail1[panels] = t1;
        for k in (0..panels).rev() {
            let q2 = |x: f64| solution.q(x).powi(2);
            t0 += gl16(&q2, edges[k], edges[k + 1]);
            t1 += gl16(&|x: f64| x * q2(x), edges[k], edges[k + 1]);
            tail0[k] = t0;
            tail1[k] = t1;
        }
        Self {
            solution,
            edges,
            tail0,
            tail1,
        }
    }

    pub fn solution(&self) -> &PainleveSolution {
        &self.solution
    }

    /// `(∫_t^∞ q², ∫_t^∞ x q²)` for `t` in `[x_min, x0]`.
    fn integrals(&self, t: f64) -> (f64, f64) {
        let x0 = self.solution.x0_start();
        if t >= x0 {
            let (a, d) = airy_pair(t);
            return (d * d - t * a * a, -(t * t * a * a - t * d * d + a * d) / 3.0);
        }
        let k = self.edges.partition_point(|&e| e <= t).saturating_sub(1).min(self.edges.len() - 2);
        let right = self.edges[k + 1];
        let q2 = |x: f64| self.solution.q(x).powi(2);
        let i0 = self.tail0[k + 1] + gl16(&q2, t, right);
        let i1 = self.tail1[k + 1] + gl16(&|x: f64| x * q2(x), t, right);
        (i0, i1)
    }

    /// `F₂(t)` for `t ∈ [x_min, 20]`.
    pub fn cdf(&self, t: f64) -> f64 {
        let (i0, i1) = self.integrals(t);
        (-(i1 - t * i0)).exp().min(1.0)
    }

    /// `F₂′(t) = F₂(t) ∫_t^∞ q²`.
    pub fn density(&self, t: f64) -> f64 {
        let (i0, i1) = self.integrals(t);
        (-(i1 - t * i0)).exp().min(1.0) * i0
    }
}

/// Shared evaluator built on the default envelope `[−12, 8]`.
pub fn tracy_widom() -> Result<&'static TracyWidom> {
    static TW: OnceLock<std::result::Result<TracyWidom, String>> = OnceLock::new();
    TW.get_or_init(|| {
        painleve_hm(DEFAULT_X_MIN, DEFAULT_X0)
            .map(TracyWidom::new)
            .map_err(|e| e.to_string())
    })
    .as_ref()
    .map_err(|e| RmtError::Convergence {
        routine: "tracy_widom",
        detail: e.clone(),
    })
}

fn check(function: &'static str, t: f64) -> Result<()> {
    if (TW_MIN..=TW_MAX).contains(&t) {
        Ok(())
    } else {
        Err(RmtError::Domain {
            function,
            value: t,
            reason: format!("supported range is [{TW_MIN}, {TW_MAX}]"),
        })
    }
}

/// `F₂(t)` on `[−10, 8]`.
pub fn tracy_widom_f2(t: f64) -> Result<f64> {
    check("tracy_widom_f2", t)?;
    Ok(tracy_widom()?.cdf(t))
}

/// `F₂′(t)` on `[−10, 8]`.
pub fn tracy_widom_f2_density(t: f64) -> Result<f64> {
    check("tracy_widom_f2_density", t)?;
    Ok(tracy_widom()?.density(t))
}
