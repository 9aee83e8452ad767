//! Energy-expansion eigensolver for one-dimensional Schrodinger problems.
//!
//! The quantization condition for an even potential on the half line is
//! encoded by a function f(E) with a convergent power series sum a_k E^k.
//! The ground state solves f(E) = 1; excited levels appear as zeros and
//! poles of the analytic continuation. This crate builds the series from
//! the zero-energy profile psi0, solves the truncated condition, and
//! sharpens the estimates by Shanks extrapolation, diagonal Pade
//! approximants, and variational expectation values. A PT-symmetric
//! branch handles -(ix)^N potentials on the Stokes line.

pub mod accel;
pub mod cli;
pub mod eigensolve;
pub mod grid;
pub mod oracles;
pub mod potential;
pub mod ptsym;
pub mod series;
pub mod variational;

pub use eigensolve::{EigenEstimate, Method, Parity};
pub use grid::GridConfig;
pub use potential::{PotentialSpec, ZeroEnergyProfile};
pub use series::EnergySeries;
