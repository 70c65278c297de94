//! Classical Gamow states: e^{ipx/ħ} on the half line selected by sign(Im p).
//!
//! Plane waves are φ_k(x) = e^{ikx/ħ} / √(2πħ) with k in momentum units.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{
    integrate_oscillatory_with, integrate_semi_infinite_with, QuadOptions, QuadResult,
};

/// A resonance with complex momentum `p`. Im p < 0 is the decaying case,
/// supported on x < 0; Im p > 0 is supported on x > 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Resonance {
    pub p: Complex64,
    pub hbar: f64,
    pub mass: f64,
}

impl Resonance {
    pub fn new(p: Complex64, hbar: f64, mass: f64) -> Result<Self> {
        if !(p.re.is_finite() && p.im.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "momentum {p} is not finite"
            )));
        }
        if p.im == 0.0 {
            return Err(Error::InvalidParameter("Im p must be nonzero".into()));
        }
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "hbar must be positive, got {hbar}"
            )));
        }
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "mass must be positive, got {mass}"
            )));
        }
        Ok(Resonance { p, hbar, mass })
    }

    /// ħ = m = 1.
    pub fn unit(p: Complex64) -> Result<Self> {
        Self::new(p, 1.0, 1.0)
    }

    /// +1 when the state lives on x > 0, -1 when on x < 0.
    pub fn side(&self) -> f64 {
        self.p.im.signum()
    }

    /// The mirrored resonance p -> -p*.
    pub fn mirrored(&self) -> Self {
        Resonance {
            p: -self.p.conj(),
            ..*self
        }
    }
}

fn heaviside(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        0.0
    } else {
        0.5
    }
}

pub fn gamow_wavefunction(r: &Resonance, x: f64) -> Complex64 {
    let support = heaviside(r.p.im) * heaviside(x) - heaviside(-r.p.im) * heaviside(-x);
    if support == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    (Complex64::i() * r.p * x / r.hbar).exp() * support
}

/// ⟨ψ|ψ⟩ = ħ / (2|Im p|).
pub fn gamow_norm_sq(r: &Resonance) -> Result<f64> {
    let n = r.hbar / (2.0 * r.p.im.abs());
    if !n.is_finite() {
        return Err(Error::Degenerate(format!(
            "|Im p| = {:e} underflows the norm",
            r.p.im.abs()
        )));
    }
    Ok(n)
}

/// The norm integral ∫|ψ|² dx evaluated numerically.
pub fn gamow_norm_sq_quadrature(r: &Resonance, tol: f64) -> QuadResult {
    let decay = 2.0 * r.p.im.abs() / r.hbar;
    let opts = QuadOptions::with_tol(tol).scale(1.0 / decay);
    integrate_semi_infinite_with(|y: f64| Complex64::new((-decay * y).exp(), 0.0), 0.0, &opts)
}

/// Re(p²) / 2m.
pub fn gamow_mean_energy(r: &Resonance) -> f64 {
    (r.p * r.p).re / (2.0 * r.mass)
}

/// ⟨φ_k|ψ⟩ / ‖ψ‖ = i √(|Im p| / π) / (p - k).
pub fn gamow_overlap(r: &Resonance, k: f64) -> Complex64 {
    Complex64::i() * (r.p.im.abs() / PI).sqrt() / (r.p - k)
}

/// The overlap integral done by oscillatory quadrature on the supported
/// half line, then normalized.
pub fn gamow_overlap_quadrature(r: &Resonance, k: f64, tol: f64) -> Result<QuadResult> {
    let norm = gamow_norm_sq(r)?;
    let scale = 1.0 / ((2.0 * PI * r.hbar).sqrt() * norm.sqrt());
    let gamma = r.p.im.abs() / r.hbar;
    // Substituting x = side · y puts both cases on y > 0 with envelope
    // e^{-γy} and frequency side · (Re p - k) / ħ.
    let side = r.side();
    let omega = side * (r.p.re - k) / r.hbar;
    let opts = QuadOptions::with_tol(tol / scale).scale(1.0 / gamma);
    let raw = integrate_oscillatory_with(
        |y: f64| Complex64::new((-gamma * y).exp(), 0.0),
        omega,
        &opts,
    );
    // x < 0 branch carries the wavefunction's -1 and no Jacobian sign flip
    // beyond it: ∫_{-∞}^0 -f(x) dx = -∫_0^∞ f(-y) dy.
    let sign = if side > 0.0 { 1.0 } else { -1.0 };
    Ok(QuadResult {
        value: raw.value * (sign * scale),
        abs_error_estimate: raw.abs_error_estimate * scale,
        evaluations: raw.evaluations,
        converged: raw.converged,
    })
}

/// Cauchy density |Im p| / (π((Re p - k)² + (Im p)²)).
pub fn breit_wigner(r: &Resonance, k: f64) -> f64 {
    let g = r.p.im.abs();
    let d = r.p.re - k;
    g / (PI * (d * d + g * g))
}

/// ∫ breit_wigner dk over [Re p - w, Re p + w] with w = half_width_factor·|Im p|
/// done numerically, plus the two analytic Cauchy tails.
pub fn breit_wigner_total(r: &Resonance, half_width_factor: f64, tol: f64) -> QuadResult {
    let g = r.p.im.abs();
    let w = half_width_factor * g;
    let center = r.p.re;
    let opts = QuadOptions::with_tol(tol);
    let body = crate::quadrature::integrate_finite(
        |k: f64| Complex64::new(breit_wigner(r, k), 0.0),
        center - w,
        center + w,
        &opts,
    );
    // each tail is (1/π)(π/2 - atan(w/g))
    let tail = 2.0 * (0.5 - (half_width_factor).atan() / PI);
    QuadResult {
        value: body.value + tail,
        ..body
    }
}

/// Relative residual of -ħ²/(2m) ψ'' = (p²/2m) ψ at `x` on the supported side.
/// With `finite_difference` the second derivative is a central difference
/// with step `h`; otherwise it is analytic.
pub fn gamow_eigen_residual(r: &Resonance, x: f64, finite_difference: Option<f64>) -> Result<f64> {
    if x == 0.0 || x.signum() != r.side() {
        return Err(Error::Domain(format!(
            "x = {x} is not on the supported side"
        )));
    }
    let psi = gamow_wavefunction(r, x);
    let second = match finite_difference {
        Some(h) => {
            (gamow_wavefunction(r, x + h) - psi * 2.0 + gamow_wavefunction(r, x - h)) / (h * h)
        }
        None => -(r.p * r.p) / (r.hbar * r.hbar) * psi,
    };
    let lhs = -second * (r.hbar * r.hbar / (2.0 * r.mass));
    let rhs = psi * (r.p * r.p / (2.0 * r.mass));
    Ok((lhs - rhs).norm() / rhs.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn res(re: f64, im: f64) -> Resonance {
        Resonance::unit(Complex64::new(re, im)).unwrap()
    }

    #[test]
    fn wavefunction_support() {
        let r = res(1.0, -0.5);
        let v = gamow_wavefunction(&r, -2.0);
        assert!((v + Complex64::new(-1.0, -2.0).exp()).norm() < 1e-15);
        assert_eq!(gamow_wavefunction(&r, 2.0), Complex64::new(0.0, 0.0));
        let v = gamow_wavefunction(&res(1.0, 0.5), 2.0);
        assert!((v - Complex64::new(-1.0, 2.0).exp()).norm() < 1e-15);
        assert_eq!(gamow_wavefunction(&r, 0.0), Complex64::new(-0.5, 0.0));
    }

    #[test]
    fn norm_and_energy() {
        assert_eq!(gamow_norm_sq(&res(1.0, -0.5)).unwrap(), 1.0);
        assert_eq!(gamow_norm_sq(&res(7.0, -0.5)).unwrap(), 1.0);
        assert!((gamow_norm_sq(&res(1.0, -0.1)).unwrap() - 5.0).abs() < 1e-15);
        assert_eq!(gamow_mean_energy(&res(1.0, -0.5)), 0.375);
        assert_eq!(gamow_mean_energy(&res(0.0, 0.5)), -0.125);
        let heavy = Resonance::new(Complex64::new(1.0, -0.5), 1.0, 2.0).unwrap();
        assert_eq!(gamow_mean_energy(&heavy), 0.1875);
    }

    #[test]
    fn invalid_resonances() {
        assert!(Resonance::unit(Complex64::new(1.0, 0.0)).is_err());
        assert!(Resonance::new(Complex64::new(1.0, -0.1), 0.0, 1.0).is_err());
        assert!(Resonance::new(Complex64::new(1.0, -0.1), 1.0, -1.0).is_err());
        let tiny = res(1.0, -1e-320);
        assert!(matches!(gamow_norm_sq(&tiny), Err(Error::Degenerate(_))));
    }

    #[test]
    fn overlap_and_density() {
        let s = (0.5 / PI).sqrt() * 2.0;
        assert!((gamow_overlap(&res(1.0, -0.5), 1.0) - Complex64::new(-s, 0.0)).norm() < 1e-15);
        assert!((gamow_overlap(&res(1.0, 0.5), 1.0) - Complex64::new(s, 0.0)).norm() < 1e-15);
        let r = res(2.0, -0.5);
        assert!((breit_wigner(&r, 2.0) - 1.0 / (0.5 * PI)).abs() < 1e-15);
        assert_eq!(breit_wigner(&r, 2.5), breit_wigner(&r, 1.5));
        let total = breit_wigner_total(&r, 1e3, 1e-10);
        assert!((total.value.re - 1.0).abs() < 1e-6);
    }

    #[test]
    fn eigen_residual() {
        let r = res(1.0, -0.5);
        assert!(gamow_eigen_residual(&r, -1.3, None).unwrap() < 1e-12);
        assert!(gamow_eigen_residual(&r, -1.3, Some(1e-4)).unwrap() < 1e-5);
        assert!(gamow_eigen_residual(&r, 1.3, None).is_err());
    }
}
