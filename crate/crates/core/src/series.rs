//! The energy power series sum a_k E^k of the quantization function f.
//!
//! Each order k carries a pair of grids: the correction factor phi_k and
//! its derivative. The recursion replaces the 2k-fold nested integral of
//! the coefficient with one backward and one forward cumulative pass per
//! order, so the cost is linear in grid size per order.

use serde::Serialize;
use thiserror::Error;

use crate::grid::{prefix_integrals, suffix_integrals, GridConfig};
use crate::potential::{zero_energy_profile, PotentialError, PotentialSpec, ZeroEnergyProfile};

#[derive(Debug, Error)]
pub enum SeriesError {
    #[error(transparent)]
    Profile(#[from] PotentialError),
    #[error("psi0^2 underflowed at x = {0} before the tail integral did")]
    ProfileSingularity(f64),
}

// One self-consistent discretization: a profile plus the phi grids and
// coefficients computed on it.
#[derive(Debug, Clone, Serialize)]
struct Layer {
    profile: ZeroEnergyProfile,
    phi: Vec<Vec<f64>>,
    dphi: Vec<Vec<f64>>,
    coeffs: Vec<f64>,
}

impl Layer {
    fn new(profile: ZeroEnergyProfile) -> Layer {
        let ones = vec![1.0; profile.len()];
        let zeros = vec![0.0; profile.len()];
        Layer {
            profile,
            phi: vec![ones],
            dphi: vec![zeros],
            coeffs: Vec::new(),
        }
    }

    fn advance(&mut self, spec: PotentialSpec) -> Result<(), SeriesError> {
        let p = &self.profile;
        let m = p.len();
        let w: Vec<f64> = p.psi0.iter().map(|v| v * v).collect();
        let last_phi = self.phi.last().unwrap();

        let integrand: Vec<f64> = w.iter().zip(last_phi).map(|(wi, ph)| wi * ph).collect();
        // tail of the backward pass: the integrand decays like
        // exp(-2 int sqrt V), so the remainder beyond x_max is the last
        // value over twice the local decay rate
        let tail = match spec.hermitian_exponent() {
            Some(n) => integrand[m - 1] / (2.0 * p.x_max.powf(n / 2.0)),
            None => 0.0,
        };
        let t = suffix_integrals(&p.grid, &integrand, tail);

        let mut dphi = vec![0.0; m];
        for i in 0..m - 1 {
            if w[i] < 1e-280 {
                return Err(SeriesError::ProfileSingularity(p.grid[i]));
            }
            dphi[i] = t[i] / w[i];
        }
        // endpoint: the square-well profile vanishes at x = 1 but the
        // tail integral vanishes one order faster, so the limit is 0
        dphi[m - 1] = if spec == PotentialSpec::SquareWell {
            0.0
        } else {
            t[m - 1] / w[m - 1]
        };

        let phi = prefix_integrals(&p.grid, &dphi);
        self.coeffs.push(-dphi[0] / p.slope_at_origin);
        self.phi.push(phi);
        self.dphi.push(dphi);
        Ok(())
    }
}

/// Coefficients a_1..a_n of f(E) together with the per-order grids needed
/// for wavefunction assembly, at two resolutions for error estimates.
#[derive(Debug, Clone, Serialize)]
pub struct EnergySeries {
    pub spec: PotentialSpec,
    fine: Layer,
    coarse: Layer,
}

impl EnergySeries {
    /// Build the profile at `cfg` and at the coarsened `cfg`, then push
    /// both layers to the requested order.
    pub fn build(spec: PotentialSpec, order: usize, cfg: &GridConfig) -> Result<Self, SeriesError> {
        let fine = Layer::new(zero_energy_profile(spec, cfg)?);
        let coarse = Layer::new(zero_energy_profile(spec, &cfg.coarsened())?);
        let mut s = EnergySeries { spec, fine, coarse };
        for _ in 0..order {
            s = s.advance_order()?;
        }
        Ok(s)
    }

    /// Append one order. Pure: returns a new snapshot, the input is
    /// unchanged.
    pub fn advance_order(&self) -> Result<Self, SeriesError> {
        let mut next = self.clone();
        next.fine.advance(self.spec)?;
        next.coarse.advance(self.spec)?;
        Ok(next)
    }

    pub fn order(&self) -> usize {
        self.fine.coeffs.len()
    }

    /// a_1..a_n.
    pub fn coefficients(&self) -> &[f64] {
        &self.fine.coeffs
    }

    /// Two-resolution error estimate |a_k(fine) - a_k(coarse)| per order.
    pub fn coeff_errors(&self) -> Vec<f64> {
        self.fine
            .coeffs
            .iter()
            .zip(&self.coarse.coeffs)
            .map(|(f, c)| (f - c).abs())
            .collect()
    }

    pub fn profile(&self) -> &ZeroEnergyProfile {
        &self.fine.profile
    }

    /// phi_k on the fine grid; phi_0 is identically 1.
    pub fn phi(&self, k: usize) -> &[f64] {
        &self.fine.phi[k]
    }

    pub fn dphi(&self, k: usize) -> &[f64] {
        &self.fine.dphi[k]
    }

    /// Partial sum f_n(E) over all computed orders, by Horner evaluation.
    /// Polynomial in E, so any real argument is valid.
    pub fn eval_f(&self, e: f64) -> f64 {
        self.eval_f_truncated(e, self.order())
    }

    /// Partial sum over the first n orders only.
    pub fn eval_f_truncated(&self, e: f64, n: usize) -> f64 {
        let c = &self.fine.coeffs[..n.min(self.order())];
        let mut acc = 0.0;
        for &a in c.iter().rev() {
            acc = acc * e + a;
        }
        acc * e
    }
}
