//! Bound states of a neutral particle with an induced electric dipole moment
//! in crossed electric and magnetic fields, subject to a Kratzer potential and
//! a potential linear in r, in static and rotating frames.
//!
//! The crate computes the biconfluent Heun series of the radial equation, the
//! cyclotron frequencies that truncate it to a polynomial, the matching energy
//! levels, and an independent finite-difference spectrum used to check them.

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cubic;
pub mod error;
pub mod heun;
pub mod oracle;
pub mod params;
pub mod quantize;
pub mod roots;
pub mod tridiag;

pub use error::{Error, Result};
pub use heun::{
    radial_wavefunction, series_coefficients, truncation_residual, HeunParams, HeunSeries,
    RadialSolution,
};
pub use oracle::{effective_potential, fd_eigensolve, ode_residual, EigenReport, RadialGrid};
pub use params::{
    chi, cyclotron_frequency, effective_angular, effective_frequency, heun_scales, DerivedScales,
    Frame, SystemParams,
};
pub use quantize::{
    allowed_frequencies, allowed_frequencies_n1, energy_level, spectrum, SpectrumEntry, SpectrumRow,
};
