//! Numerical verification of the convolution identities for the Riemann zeta
//! function: special functions, adaptive quadrature, the convolution functions
//! φₙ and a catalogue of identity checks with machine-readable reports.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod accuracy;
pub mod error;
pub mod identities;
pub mod phi;
pub mod quadrature;
pub mod report;
pub mod special;
pub mod suite;

pub use accuracy::AccuracySpec;
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use special::constants::Constants;

/// A complex number `s = σ + it`.
pub type ComplexValue = Complex64;
