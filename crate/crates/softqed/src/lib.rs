//! Soft-photon radiative corrections in the Bloch-Nordsieck and dipole models.
//!
//! The crate evaluates infrared-regularized second-order exponents, vacuum and
//! emission amplitudes in the Coulomb and Feynman-Gupta-Bleuler gauges, and checks
//! them against a truncated indefinite-metric Fock-space oracle.
//!
//! Modules, bottom up:
//! - [`kinematics`]: four-velocities, form factors, cutoff windows, projectors.
//! - [`quadrature`]: adaptive momentum integrals and the exponents they build.
//! - [`currents`]: current Fourier transforms and coherence functions.
//! - [`fock`]: truncated Fock spaces with per-channel metric sign.
//! - [`gauge`]: subsidiary condition, null vectors and the map to Coulomb space.
//! - [`smatrix`]: amplitudes, factorization and gauge comparison reports.
//! - [`cli`]: configuration schema and the command implementations.

pub mod cli;
pub mod currents;
pub mod error;
pub mod fock;
pub mod gauge;
pub mod kinematics;
pub mod quadrature;
pub mod smatrix;

pub use error::{Error, Result};
