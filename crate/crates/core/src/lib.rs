//! Thin-wire method-of-moments modelling of a two-element crossed-dipole
//! end-fire array with a single driven element and a reactively loaded
//! parasitic element.
//!
//! The crate covers the whole pipeline: building the wire model from a
//! design vector, filling and solving the Galerkin impedance system,
//! radiating the solved currents into circularly polarized far-field
//! components, reducing sweeps to bands, and running a real-coded genetic
//! algorithm over the design space.

// `!(x > 0.0)` rejects NaN along with non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod config;
pub mod em;
mod error;
pub mod farfield;
pub mod geometry;
pub mod metrics;
pub mod optimizer;
pub mod quadrature;

pub use error::{Error, Result};

pub use num_complex::Complex64;

/// Speed of light in vacuum (m/s).
pub const C0: f64 = 299_792_458.0;
/// Vacuum permeability (H/m).
pub const MU0: f64 = 1.256_637_062_12e-6;
/// Vacuum permittivity (F/m), derived so that `MU0 * EPS0 * C0^2 == 1`.
pub const EPS0: f64 = 1.0 / (MU0 * C0 * C0);
/// Free-space wave impedance (ohms).
pub const ETA0: f64 = MU0 * C0;

/// Floor used when a dB quantity would be `-inf`.
pub const DB_FLOOR: f64 = -200.0;

pub(crate) fn db10(x: f64) -> f64 {
    if x > 0.0 {
        (10.0 * x.log10()).max(DB_FLOOR)
    } else {
        DB_FLOOR
    }
}
