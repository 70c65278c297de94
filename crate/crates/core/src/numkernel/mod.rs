//! Special functions on the principal branch, in 64-bit floating point.
//!
//! Every routine returns a [`SpecialValue`] carrying an error estimate and
//! the number of terms or iterations spent, so callers can judge whether a
//! closed form built on top of it is trustworthy.

mod gamma;
mod hyp2f1;
mod incgamma;

use num_complex::Complex64;
use serde::Serialize;

pub use gamma::{beta, gamma_real, ln_gamma};
pub use hyp2f1::{hyp2f1, hyp2f1_routed, Hyp2f1Route};
pub use incgamma::{upper_incomplete_gamma, upper_incomplete_gamma_ln_scaled};

/// A special-function value with its error budget.
///
/// `converged` implies `abs_error_estimate <= tol * |value|` for the
/// relative tolerance the caller asked for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpecialValue {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub terms_or_iterations: usize,
    pub converged: bool,
}

impl SpecialValue {
    pub(crate) fn exact(value: Complex64) -> Self {
        SpecialValue {
            value,
            abs_error_estimate: 0.0,
            terms_or_iterations: 0,
            converged: true,
        }
    }

    pub fn rel_error(&self) -> f64 {
        let m = self.value.norm();
        if m == 0.0 {
            self.abs_error_estimate
        } else {
            self.abs_error_estimate / m
        }
    }
}

/// `ln(1 + v)` on the principal branch, accurate when `|v|` is small.
pub fn clog1p(v: Complex64) -> Complex64 {
    let re = 0.5 * (2.0 * v.re + v.norm_sqr()).ln_1p();
    let im = v.im.atan2(1.0 + v.re);
    Complex64::new(re, im)
}

/// Principal-branch power `z^s` for real `s`.
pub(crate) fn cpow_real(z: Complex64, s: f64) -> Complex64 {
    if z.re == 0.0 && z.im == 0.0 {
        return if s > 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(f64::INFINITY, 0.0)
        };
    }
    (z.ln() * s).exp()
}

pub(crate) fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// True when `z` lies on the closed negative real axis.
pub(crate) fn on_negative_axis(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0
}
