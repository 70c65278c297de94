use num_complex::Complex64;

use super::{EvalResult, Method, QState};
use crate::error::{Error, Result};
use crate::numkernel::hyp2f1;
use crate::quadrature::{integrate_semi_infinite_with, QuadOptions};

/// Relative tolerance requested from the hypergeometric kernel.
const HYP_TOL: f64 = 1e-12;

/// ∫|ψ|² dx by quadrature. The integrand depends on p only through |Im p|
/// and |p|.
pub fn q_norm_sq_quadrature(s: &QState, tol: f64) -> Result<EvalResult<f64>> {
    let eps = s.eps();
    let c = s.c();
    let lin = 2.0 * eps * s.r.p.im.abs() / c;
    let quad = (eps * s.r.p.norm() / c).powi(2);
    let mu = s.mu();
    let f = |y: f64| {
        let u = lin * y + quad * y * y;
        Complex64::new((-mu * u.ln_1p()).exp(), 0.0)
    };
    let opts = QuadOptions::with_tol(tol)
        .scale(s.length_scale())
        .tail_exponent(2.0 * mu);
    let r = integrate_semi_infinite_with(f, 0.0, &opts);
    if !r.converged {
        return Err(Error::QuadratureFailed {
            what: format!("norm at q = {}", s.q()),
            estimate: r.abs_error_estimate,
        });
    }
    Ok(EvalResult {
        value: r.value.re,
        method: Method::Quadrature,
        abs_error_estimate: r.abs_error_estimate,
        converged: true,
    })
}

/// A² = ħ/(5-q) · √(2(q+1))/|p| · F(1/2, ν - 1/2; ν + 1/2; (Re p)²/|p|²),
/// ν = 2/(q-1). Near q = 1 this defers to quadrature.
pub fn q_norm_sq_closed(s: &QState) -> Result<EvalResult<f64>> {
    if s.qi.near_classical() {
        return q_norm_sq_quadrature(s, crate::quadrature::DEFAULT_TOL);
    }
    let q = s.q();
    let nu = s.mu();
    let pn = s.r.p.norm();
    let z = (s.r.p.re / pn).powi(2);
    let f = hyp2f1(0.5, nu - 0.5, nu + 0.5, Complex64::new(z, 0.0), HYP_TOL)?;
    let pref = s.r.hbar / (5.0 - q) * (2.0 * (q + 1.0)).sqrt() / pn;
    let value = pref * f.value.re;
    Ok(EvalResult {
        value,
        method: Method::Closed,
        abs_error_estimate: pref * f.abs_error_estimate + 4.0 * f64::EPSILON * value,
        converged: f.converged,
    })
}

/// Closed form where it evaluates, quadrature otherwise.
pub fn q_norm_sq(s: &QState) -> Result<EvalResult<f64>> {
    match q_norm_sq_closed(s) {
        Ok(v) if v.converged => Ok(v),
        _ => q_norm_sq_quadrature(s, crate::quadrature::DEFAULT_TOL),
    }
}

/// A(q, p) = √(⟨ψ|ψ⟩).
pub fn normalization_a(s: &QState) -> Result<f64> {
    Ok(q_norm_sq(s)?.value.sqrt())
}

/// Both sides of the Pfaff step behind the closed norm:
/// F(ν, ν-1/2; ν+1/2; -α²/β²) and β^{2ν-1} F(1/2, ν-1/2; ν+1/2; α²), with
/// α = Re p/|p| and β = |Im p|/|p|.
///
/// The left side is evaluated through the other Pfaff form,
/// (1-z)^{-ν} F(ν, 1; ν+1/2; z/(z-1)), so the two sides share no code path.
pub fn pfaff_sides(s: &QState) -> Result<(f64, f64)> {
    let nu = s.mu();
    let pn = s.r.p.norm();
    let alpha2 = (s.r.p.re / pn).powi(2);
    let beta = s.r.p.im.abs() / pn;
    // with z = -α²/β²: (1 - z)^{-ν} = β^{2ν} and z/(z-1) = α²
    let ln_pre = 2.0 * nu * beta.ln();
    let g = hyp2f1(nu, 1.0, nu + 0.5, Complex64::new(alpha2, 0.0), HYP_TOL)?;
    let lhs = ln_pre.exp() * g.value.re;
    let f = hyp2f1(
        0.5,
        nu - 0.5,
        nu + 0.5,
        Complex64::new(alpha2, 0.0),
        HYP_TOL,
    )?;
    let rhs = ((2.0 * nu - 1.0) * beta.ln()).exp() * f.value.re;
    Ok((lhs, rhs))
}
