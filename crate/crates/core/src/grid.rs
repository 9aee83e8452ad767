//! Graded mesh construction and composite quadrature on nonuniform grids.
//!
//! All integrals in the pipeline reduce to cumulative sums of per-interval
//! quadratures on a shared mesh. Each interval is integrated with a
//! parabola through three neighboring nodes; consecutive intervals
//! alternate between the panel starting and the panel ending at the
//! interval, so the leading local errors cancel in pairs and the composite
//! rule is Simpson-grade even on a graded mesh.

use serde::{Deserialize, Serialize};

/// Step-control and tail-handling parameters for mesh and profile builds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridConfig {
    /// Uniform step on [0, 1], where the 1/psi0^2 integrands are benign.
    pub base_step: f64,
    /// Geometric step growth factor past x = 1.
    pub growth: f64,
    /// Absolute cap on the step size.
    pub step_cap: f64,
    /// Step limiter scale: h <= resolution / (1 + x^(N/2)) in the tail.
    pub resolution: f64,
    /// Substep control for the profile integrator: (1 + sqrt(V)) h <= this.
    pub ode_resolution: f64,
    /// Bound on the estimated tail mass beyond the truncation point.
    pub tail_tol: f64,
    /// Hard cap on the truncation point.
    pub xmax_cap: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            base_step: 1e-3,
            growth: 1.003,
            step_cap: 0.02,
            resolution: 0.05,
            ode_resolution: 5e-3,
            tail_tol: 1e-14,
            xmax_cap: 40.0,
        }
    }
}

impl GridConfig {
    /// Same grid with the base step doubled, for two-resolution error estimates.
    pub fn coarsened(&self) -> GridConfig {
        GridConfig {
            base_step: 2.0 * self.base_step,
            ode_resolution: 2.0 * self.ode_resolution,
            ..*self
        }
    }
}

/// Strictly increasing mesh from 0 to x_max: uniform `base_step` up to
/// x = 1, then geometric growth limited by the potential's stiffness
/// through `exponent` (the power N of V).
pub fn graded_mesh(x_max: f64, exponent: f64, cfg: &GridConfig) -> Vec<f64> {
    assert!(x_max > 0.0);
    let mut xs = vec![0.0];
    let mut h = cfg.base_step;
    let mut x = 0.0;
    while x < x_max {
        if x >= 1.0 {
            let limit = cfg.resolution / (1.0 + x.powf(exponent / 2.0));
            h = (h * cfg.growth).min(limit).min(cfg.step_cap);
        }
        x = (x + h).min(x_max);
        xs.push(x);
    }
    xs
}

// Parabola through nodes i-1, i, i+1 integrated over the trailing
// interval [x_i, x_{i+1}].
fn panel_end(x: &[f64], f: &[f64], i: usize) -> f64 {
    let h1 = x[i] - x[i - 1];
    let h2 = x[i + 1] - x[i];
    let ca = -h2 * h2 * h2 / (6.0 * h1 * (h1 + h2));
    let cb = h2 * h2 / (6.0 * h1) + h2 / 2.0;
    let cc = (h2 * h2 / 3.0 + h1 * h2 / 2.0) / (h1 + h2);
    ca * f[i - 1] + cb * f[i] + cc * f[i + 1]
}

// Parabola through nodes i, i+1, i+2 integrated over the leading
// interval [x_i, x_{i+1}].
fn panel_start(x: &[f64], f: &[f64], i: usize) -> f64 {
    let h1 = x[i + 1] - x[i];
    let h2 = x[i + 2] - x[i + 1];
    let ca = (h1 * h1 / 3.0 + h1 * h2 / 2.0) / (h1 + h2);
    let cb = h1 * h1 / (6.0 * h2) + h1 / 2.0;
    let cc = -h1 * h1 * h1 / (6.0 * h2 * (h1 + h2));
    ca * f[i] + cb * f[i + 1] + cc * f[i + 2]
}

/// Per-interval integrals of the sampled function: out[i] approximates
/// the integral of f over [x[i], x[i+1]]. Needs at least 3 nodes.
pub fn interval_integrals(x: &[f64], f: &[f64]) -> Vec<f64> {
    let n = x.len();
    assert_eq!(n, f.len());
    assert!(n >= 3, "quadrature needs at least 3 nodes");
    let mut out = vec![0.0; n - 1];
    for i in 0..n - 1 {
        out[i] = if i % 2 == 0 {
            if i + 2 <= n - 1 {
                panel_start(x, f, i)
            } else {
                panel_end(x, f, i)
            }
        } else {
            panel_end(x, f, i)
        };
    }
    out
}

/// Integral of f over the whole mesh.
pub fn integrate(x: &[f64], f: &[f64]) -> f64 {
    interval_integrals(x, f).iter().sum()
}

/// Running integral from the left endpoint: out[i] = integral of f over
/// [x[0], x[i]], with out[0] = 0.
pub fn prefix_integrals(x: &[f64], f: &[f64]) -> Vec<f64> {
    let parts = interval_integrals(x, f);
    let mut out = Vec::with_capacity(x.len());
    out.push(0.0);
    let mut acc = 0.0;
    for p in parts {
        acc += p;
        out.push(acc);
    }
    out
}

/// Running integral to the right endpoint plus a tail beyond it:
/// out[i] = tail + integral of f over [x[i], x[last]].
pub fn suffix_integrals(x: &[f64], f: &[f64], tail: f64) -> Vec<f64> {
    let parts = interval_integrals(x, f);
    let mut out = vec![0.0; x.len()];
    out[x.len() - 1] = tail;
    for i in (0..x.len() - 1).rev() {
        out[i] = out[i + 1] + parts[i];
    }
    out
}
