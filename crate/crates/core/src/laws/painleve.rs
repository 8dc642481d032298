//! Hastings–McLeod solution of `q″ = xq + 2q³`, `q(x) ~ Ai(x)` as `x → ∞`.
//!
//! Forward shooting from the Airy side is hopelessly unstable, so the
//! solution is computed as a two-point boundary value problem: Chebyshev
//! collocation on `[x_min, x0]`, `q(x0) = Ai(x0)` on the right and the
//! algebraic asymptotic `q ~ √(−x/2)` on the left, solved by damped Newton.

use serde::Serialize;

use super::airy::airy_pair;
use crate::error::{Result, RmtError};
use crate::linalg;
use crate::numeric::{chebyshev_diff_matrix, chebyshev_interpolate, chebyshev_lobatto};

pub const DEFAULT_X_MIN: f64 = -12.0;
pub const DEFAULT_X0: f64 = 8.0;

const NODES: usize = 160;
const NEWTON_TOL: f64 = 1e-13;
const MAX_NEWTON: usize = 60;
const STAGNATION_OK: f64 = 1e-9;

/// Collocation solution on a decreasing Chebyshev grid `x0 = x_0 > … > x_N = x_min`.
#[derive(Debug, Clone, Serialize)]
pub struct PainleveSolution {
    grid: Vec<f64>,
    q_values: Vec<f64>,
    x0_start: f64,
    x_min: f64,
    residual: f64,
    newton_steps: usize,
}

/// Left-end asymptotic `q(x) = √(−x/2)(1 + 1/(8x³) − 73/(128x⁶) + 10657/(1024x⁹) − …)`.
pub fn hm_left_asymptotic(x: f64) -> f64 {
    let y = 1.0 / (x * x * x);
    (-x / 2.0).sqrt() * (1.0 + y * (0.125 + y * (-73.0 / 128.0 + y * (10657.0 / 1024.0 - y * 13_912_277.0 / 32768.0))))
}

/// Solves for the Hastings–McLeod function on `[x_min, x0]`.
///
/// Requires `x0 ≥ 6` (so that `q` and `Ai` agree far below double precision at
/// the matching point) and `x_min ≥ −12`.
pub fn painleve_hm(x_min: f64, x0: f64) -> Result<PainleveSolution> {
    if !(x0 >= 6.0 && x0 <= 20.0) {
        return Err(RmtError::param("x0", x0, "Airy matching point must lie in [6, 20]"));
    }
    if !(x_min >= -12.0 && x_min <= -1.0) {
        return Err(RmtError::param("x_min", x_min, "left end must lie in [-12, -1]"));
    }
    let n = NODES;
    let m = n + 1;
    let half = 0.5 * (x0 - x_min);
    let s = chebyshev_lobatto(n);
    let grid: Vec<f64> = s.iter().map(|t| x_min + half * (1.0 + t)).collect();
    let d = chebyshev_diff_matrix(n);
    // second derivative in x: (D/half)²
    let mut d2 = vec![0.0; m * m];
    linalg_dgemm(&d, &d, m, &mut d2);
    let scale = 1.0 / (half * half);
    for v in d2.iter_mut() {
        *v *= scale;
    }

    let right = airy_pair(x0).0;
    let left = hm_left_asymptotic(x_min);
    let mut q: Vec<f64> = grid
        .iter()
        .map(|&x| {
            let a = airy_pair(x.min(x0)).0;
            ((-x).max(0.0) / 2.0 + a * a).sqrt()
        })
        .collect();
    q[0] = right;
    q[n] = left;

    let residual_of = |q: &[f64]| -> Vec<f64> {
        let mut r = vec![0.0; m];
        r[0] = q[0] - right;
        r[n] = q[n] - left;
        for i in 1..n {
            let mut acc = 0.0;
            for j in 0..m {
                acc += d2[i * m + j] * q[j];
            }
            r[i] = acc - grid[i] * q[i] - 2.0 * q[i].powi(3);
        }
        r
    };
    let norm = |r: &[f64]| r.iter().fold(0.0f64, |a, v| a.max(v.abs()));

    let mut r = residual_of(&q);
    let mut rn = norm(&r);
    let mut steps = 0;
    while rn > NEWTON_TOL {
        if steps == MAX_NEWTON {
            return Err(RmtError::Convergence {
                routine: "painleve_hm",
                detail: format!("Newton stalled after {steps} steps with residual {rn:e}"),
            });
        }
        steps += 1;
        // Jacobian, assembled column-major for LAPACK
        let mut jac = vec![0.0; m * m];
        jac[0] = 1.0;
        jac[n * m + n] = 1.0;
        for i in 1..n {
            for j in 0..m {
                jac[j * m + i] = d2[i * m + j];
            }
            jac[i * m + i] -= grid[i] + 6.0 * q[i] * q[i];
        }
        let delta = linalg::dgesv(jac, m, r.clone())?;
        let mut lambda = 1.0;
        let accepted = loop {
            let trial: Vec<f64> = q.iter().zip(&delta).map(|(a, b)| a - lambda * b).collect();
            let tr = residual_of(&trial);
            let tn = norm(&tr);
            if tn < rn {
                break Some((trial, tr, tn));
            }
            lambda *= 0.5;
            if lambda < 1e-4 {
                break None;
            }
        };
        match accepted {
            Some((trial, tr, tn)) => {
                q = trial;
                r = tr;
                rn = tn;
            }
            // stagnation at the roundoff floor of the collocation operator
            None if rn <= STAGNATION_OK => break,
            None => {
                return Err(RmtError::Convergence {
                    routine: "painleve_hm",
                    detail: format!("damped Newton stagnated at step {steps} with residual {rn:e}"),
                })
            }
        }
    }
    if let Some(k) = q.iter().position(|v| !(*v > 0.0)) {
        return Err(RmtError::Convergence {
            routine: "painleve_hm",
            detail: format!("solution left the Hastings–McLeod branch (q = {} at x = {})", q[k], grid[k]),
        });
    }
    Ok(PainleveSolution {
        grid,
        q_values: q,
        x0_start: x0,
        x_min,
        residual: rn,
        newton_steps: steps,
    })
}

fn linalg_dgemm(a: &[f64], b: &[f64], m: usize, c: &mut [f64]) {
    linalg::dgemm(m, m, m, 1.0, a, (m, 1), b, (m, 1), c);
}

impl PainleveSolution {
    /// Collocation nodes, decreasing from `x0` to `x_min`.
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn q_values(&self) -> &[f64] {
        &self.q_values
    }

    pub fn x0_start(&self) -> f64 {
        self.x0_start
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    /// Max-norm ODE residual over the collocation equations.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn newton_steps(&self) -> usize {
        self.newton_steps
    }

    /// `q(x)`: spectral interpolation on the grid, `Ai(x)` beyond `x0`
    /// (the difference is `O(Ai³)`), and the left asymptotic below `x_min`.
    pub fn q(&self, x: f64) -> f64 {
        if x >= self.x0_start {
            airy_pair(x.min(super::airy::AIRY_MAX)).0
        } else if x <= self.x_min {
            hm_left_asymptotic(x)
        } else {
            chebyshev_interpolate(&self.q_values, self.x_min, self.x0_start, x)
        }
    }
}
