//! Potential families and the zero-energy profile psi0, the solution of
//! psi'' = V psi on the half line with psi(0) = 1 and decay at infinity.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{graded_mesh, GridConfig};
use crate::oracles::special::gamma;

#[derive(Debug, Error)]
pub enum PotentialError {
    #[error("power-law exponent must be positive, got {0}")]
    NonPositiveExponent(f64),
    #[error("PT potentials require N >= 2 (unbroken symmetry), got {0}")]
    BrokenRegime(f64),
    #[error("unknown potential spec {0:?}; accepted grammar: power:N, square-well, ptpower:N")]
    UnknownSpec(String),
    #[error("backward integration produced a non-decaying profile near x = {0}")]
    NonDecayingSolution(f64),
    #[error("estimated tail mass {tail:e} still above {tol:e} at the x_max cap {cap}")]
    TailToleranceUnmet { tail: f64, tol: f64, cap: f64 },
}

/// Declarative description of the potential V.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PotentialSpec {
    /// V(x) = |x|^N on the whole line, N > 0.
    PowerLaw(f64),
    /// V = 0 on |x| <= 1 with infinite walls.
    SquareWell,
    /// V(z) = -(iz)^N on the Stokes line, N >= 2.
    PTPower(f64),
}

impl PotentialSpec {
    pub fn validate(&self) -> Result<(), PotentialError> {
        match *self {
            PotentialSpec::PowerLaw(n) if n <= 0.0 => Err(PotentialError::NonPositiveExponent(n)),
            PotentialSpec::PTPower(n) if n < 2.0 => Err(PotentialError::BrokenRegime(n)),
            _ => Ok(()),
        }
    }

    /// Stokes-line rotation angle; derived, never user-set.
    pub fn theta(&self) -> Option<f64> {
        match *self {
            PotentialSpec::PTPower(n) => Some(PI / (2.0 * n + 4.0)),
            _ => None,
        }
    }

    /// Exponent of the Hermitian |x|^N problem underlying this spec.
    pub fn hermitian_exponent(&self) -> Option<f64> {
        match *self {
            PotentialSpec::PowerLaw(n) | PotentialSpec::PTPower(n) => Some(n),
            PotentialSpec::SquareWell => None,
        }
    }

    pub fn is_hermitian(&self) -> bool {
        !matches!(self, PotentialSpec::PTPower(_))
    }
}

impl fmt::Display for PotentialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            PotentialSpec::PowerLaw(n) => write!(f, "power:{n}"),
            PotentialSpec::SquareWell => write!(f, "square-well"),
            PotentialSpec::PTPower(n) => write!(f, "ptpower:{n}"),
        }
    }
}

impl FromStr for PotentialSpec {
    type Err = PotentialError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PotentialError::UnknownSpec(s.to_string());
        let spec = if s == "square-well" {
            PotentialSpec::SquareWell
        } else if let Some(n) = s.strip_prefix("power:") {
            PotentialSpec::PowerLaw(n.parse().map_err(|_| bad())?)
        } else if let Some(n) = s.strip_prefix("ptpower:") {
            PotentialSpec::PTPower(n.parse().map_err(|_| bad())?)
        } else {
            return Err(bad());
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Discretized psi0 on a graded grid with truncation metadata.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZeroEnergyProfile {
    pub grid: Vec<f64>,
    pub psi0: Vec<f64>,
    pub dpsi0: Vec<f64>,
    pub slope_at_origin: f64,
    pub x_max: f64,
    /// Estimated integral of psi0^2 beyond x_max.
    pub tail_mass: f64,
}

impl ZeroEnergyProfile {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }
}

// WKB estimate of the squared amplitude of the normalized profile at x,
// assembled from the closed-form prefactor 2 (N+2)^{-nu} / Gamma(nu).
fn tail_mass_estimate(n: f64, x: f64) -> f64 {
    let nu = 1.0 / (n + 2.0);
    let cn = 2.0 * (n + 2.0).powf(-nu) / gamma(nu);
    let action = 2.0 * x.powf((n + 2.0) / 2.0) / (n + 2.0);
    let amp2 = cn * cn * x * (PI / (2.0 * action)) * (-2.0 * action).exp();
    amp2 / (2.0 * x.powf(n / 2.0))
}

// Two-term asymptotic seed for the decaying solution of psi'' = x^N psi.
// The overall amplitude is arbitrary; the profile is rescaled at the end.
fn asymptotic_seed(n: f64, x: f64) -> (f64, f64) {
    let v = -n * (n + 4.0) / (16.0 * (n + 2.0)) * x.powf(-(n + 2.0) / 2.0);
    let dv = n * (n + 4.0) / 32.0 * x.powf(-(n + 4.0) / 2.0);
    let psi = x.powf(-n / 4.0) * (1.0 + v);
    let dpsi = psi * (-x.powf(n / 2.0) - n / (4.0 * x) + dv / (1.0 + v));
    (psi, dpsi)
}

fn powerlaw_profile(n: f64, cfg: &GridConfig) -> Result<ZeroEnergyProfile, PotentialError> {
    // truncation point: first x where the estimated tail mass drops
    // below tolerance, capped
    let mut x_max = 1.0;
    while tail_mass_estimate(n, x_max) > cfg.tail_tol {
        x_max *= 1.02;
        if x_max > cfg.xmax_cap {
            x_max = cfg.xmax_cap;
            break;
        }
    }
    let tail = tail_mass_estimate(n, x_max);
    if tail > cfg.tail_tol {
        return Err(PotentialError::TailToleranceUnmet {
            tail,
            tol: cfg.tail_tol,
            cap: cfg.xmax_cap,
        });
    }

    let mesh = graded_mesh(x_max, n, cfg);
    let m = mesh.len();
    let mut psi = vec![0.0; m];
    let mut dpsi = vec![0.0; m];
    let (p, dp) = asymptotic_seed(n, x_max);
    psi[m - 1] = p;
    dpsi[m - 1] = dp;

    // classic fourth-order sweep backward from x_max; substeps keep
    // (1 + sqrt V) h below the configured resolution
    let rhs = |x: f64, y: [f64; 2]| [y[1], x.powf(n) * y[0]];
    let mut y = [p, dp];
    for i in (1..m).rev() {
        let (x1, x0) = (mesh[i], mesh[i - 1]);
        let stiff = 1.0 + x1.powf(n / 2.0);
        let sub = (((x1 - x0) * stiff) / cfg.ode_resolution).ceil().max(1.0) as usize;
        let h = (x0 - x1) / sub as f64;
        let mut x = x1;
        for _ in 0..sub {
            let k1 = rhs(x, y);
            let k2 = rhs(x + h / 2.0, [y[0] + h / 2.0 * k1[0], y[1] + h / 2.0 * k1[1]]);
            let k3 = rhs(x + h / 2.0, [y[0] + h / 2.0 * k2[0], y[1] + h / 2.0 * k2[1]]);
            let k4 = rhs(x + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
            y[0] += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
            y[1] += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
            x += h;
        }
        psi[i - 1] = y[0];
        dpsi[i - 1] = y[1];
    }

    let scale = psi[0];
    for v in psi.iter_mut() {
        *v /= scale;
    }
    for v in dpsi.iter_mut() {
        *v /= scale;
    }

    for i in 0..m {
        if psi[i] <= 0.0 || (i > 0 && psi[i] >= psi[i - 1]) {
            return Err(PotentialError::NonDecayingSolution(mesh[i]));
        }
    }

    Ok(ZeroEnergyProfile {
        slope_at_origin: dpsi[0],
        grid: mesh,
        psi0: psi,
        dpsi0: dpsi,
        x_max,
        tail_mass: tail,
    })
}

fn square_well_profile(cfg: &GridConfig) -> ZeroEnergyProfile {
    let n = (1.0 / cfg.base_step).round().max(2.0) as usize;
    let grid: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
    let psi0: Vec<f64> = grid.iter().map(|&x| 1.0 - x).collect();
    let dpsi0 = vec![-1.0; n + 1];
    ZeroEnergyProfile {
        grid,
        psi0,
        dpsi0,
        slope_at_origin: -1.0,
        x_max: 1.0,
        tail_mass: 0.0,
    }
}

/// Build the zero-energy profile for a potential spec.
///
/// The square well has the exact line 1 - x. Power-law profiles are
/// integrated backward from the truncation point, seeded by the decaying
/// asymptotic form, and rescaled to psi0(0) = 1. A PT spec returns the
/// profile of its Hermitian |x|^N counterpart, which carries the same
/// expansion coefficients.
pub fn zero_energy_profile(
    spec: PotentialSpec,
    cfg: &GridConfig,
) -> Result<ZeroEnergyProfile, PotentialError> {
    spec.validate()?;
    match spec {
        PotentialSpec::SquareWell => Ok(square_well_profile(cfg)),
        PotentialSpec::PowerLaw(n) | PotentialSpec::PTPower(n) => powerlaw_profile(n, cfg),
    }
}

/// V(x) sampled on the profile grid of the matching Hermitian problem.
pub fn potential_values(spec: PotentialSpec, grid: &[f64]) -> Vec<f64> {
    match spec {
        PotentialSpec::SquareWell => vec![0.0; grid.len()],
        PotentialSpec::PowerLaw(n) | PotentialSpec::PTPower(n) => {
            grid.iter().map(|&x| x.powf(n)).collect()
        }
    }
}

/// Exact slope psi0'(0) = -(N+2)^{1 - 2 nu} Gamma(1 - nu) / Gamma(nu),
/// nu = 1/(N+2), from the closed-form Bessel-K profile. Used only for
/// cross-checks; the pipeline takes the slope from the computed profile.
pub fn exact_powerlaw_slope(n: f64) -> f64 {
    let nu = 1.0 / (n + 2.0);
    -(n + 2.0).powf(1.0 - 2.0 * nu) * gamma(1.0 - nu) / gamma(nu)
}
