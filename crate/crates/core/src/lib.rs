//! Gamow resonance states and their Tsallis q-deformed analogues.
//!
//! The crate is organised bottom-up:
//!
//! - [`numkernel`]: log-gamma, beta, the Gauss hypergeometric function and
//!   the upper incomplete gamma function for complex arguments.
//! - [`quadrature`]: adaptive Gauss-Kronrod integration on finite and
//!   semi-infinite intervals, and an oscillatory integrator for Fourier-type
//!   integrals over the half line.
//! - [`gamow`]: the classical (q = 1) Gamow state, its norm, mean energy,
//!   plane-wave overlap and Breit-Wigner density.
//! - [`qgamow`]: the q-deformed state. Every closed form is paired with a
//!   quadrature evaluation of the integral it was derived from.
//! - [`report`] and [`validation`]: the check grid and its machine-readable
//!   report, shared with the command-line front end.

pub mod error;
pub mod gamow;
pub mod numkernel;
pub mod qgamow;
pub mod quadrature;
pub mod report;
pub mod validation;

pub use num_complex::Complex64;

pub use error::{Error, Result};
pub use gamow::Resonance;
pub use numkernel::SpecialValue;
pub use qgamow::{EvalResult, Method, QIndex, QState};
pub use quadrature::{QuadOptions, QuadResult};
pub use report::{CurveRow, Errata, ReportEntry, SpectralCurve, ValidationReport};
