//! Truncated wavefunctions and the variational estimate <H>_n, which
//! sharpens E_n from above: E_n > <H>_n > E_exact.

use serde::Serialize;

use crate::eigensolve::{truncated_root, EigenEstimate, EigensolveError, Method, Parity};
use crate::grid::integrate;
use crate::series::EnergySeries;

/// Pointwise evaluation of Psi_n = psi0 (1 + sum_{k<=n} E^k phi_k).
#[derive(Debug, Clone, Serialize)]
pub struct TruncatedWavefunction {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub energy: f64,
    pub order: usize,
}

/// Assemble Psi_n on the shared grid at the given energy. The natural
/// choice of E is truncated_root(series, n).
pub fn assemble(series: &EnergySeries, n: usize, energy: f64) -> TruncatedWavefunction {
    assert!(series.order() >= n, "series holds {} orders, need {n}", series.order());
    let profile = series.profile();
    let m = profile.len();
    let mut factor = vec![1.0; m];
    let mut ek = 1.0;
    for k in 1..=n {
        ek *= energy;
        let phi = series.phi(k);
        for i in 0..m {
            factor[i] += ek * phi[i];
        }
    }
    let values: Vec<f64> = profile.psi0.iter().zip(&factor).map(|(p, f)| p * f).collect();
    TruncatedWavefunction {
        grid: profile.grid.clone(),
        values,
        energy,
        order: n,
    }
}

// Integral of psi0^2 fac_a fac_b over the half line, with the same
// asymptotic tail correction the series recursion uses.
fn weighted_integral(series: &EnergySeries, fac_a: &[f64], fac_b: &[f64]) -> f64 {
    let profile = series.profile();
    let integrand: Vec<f64> = profile
        .psi0
        .iter()
        .zip(fac_a.iter().zip(fac_b))
        .map(|(p, (a, b))| p * p * a * b)
        .collect();
    let tail = match series.spec.hermitian_exponent() {
        Some(n) => integrand.last().unwrap() / (2.0 * profile.x_max.powf(n / 2.0)),
        None => 0.0,
    };
    integrate(&profile.grid, &integrand) + tail
}

fn expansion_factor(series: &EnergySeries, n: usize, energy: f64) -> Vec<f64> {
    let m = series.profile().len();
    let mut factor = vec![1.0; m];
    let mut ek = 1.0;
    for k in 1..=n {
        ek *= energy;
        let phi = series.phi(k);
        for i in 0..m {
            factor[i] += ek * phi[i];
        }
    }
    factor
}

/// Variational estimate <H>_n = E_n int Psi_n Psi_{n-1} / int Psi_n^2,
/// evaluated at E_n = truncated_root(series, n).
pub fn expectation(series: &EnergySeries, n: usize) -> Result<EigenEstimate, EigensolveError> {
    let root = truncated_root(series, n)?;
    let value = expectation_at(series, n, root.value);
    Ok(EigenEstimate {
        order: n,
        value,
        method: Method::Expectation,
        error_estimate: None,
        parity: Parity::Even,
    })
}

/// The same functional at an explicit energy.
pub fn expectation_at(series: &EnergySeries, n: usize, energy: f64) -> f64 {
    assert!(n >= 1);
    let upper = expansion_factor(series, n, energy);
    let lower = expansion_factor(series, n - 1, energy);
    let num = weighted_integral(series, &upper, &lower);
    let den = weighted_integral(series, &upper, &upper);
    energy * num / den
}
