use num_complex::Complex64;

use super::{q_norm_sq_closed, q_norm_sq_quadrature, EvalResult, Method, QState};
use crate::error::{Error, Result};
use crate::numkernel::hyp2f1;
use crate::quadrature::{integrate_semi_infinite_with, QuadOptions, DEFAULT_TOL};

const HYP_TOL: f64 = 1e-12;

/// ⟨H⟩_q by quadrature: Re of A⁻² (p²/2m) ∫_0^∞ w^{-μq} (w*)^{-μ} dy,
/// with A² also from quadrature.
pub fn q_mean_energy_quadrature(s: &QState, tol: f64) -> Result<EvalResult<f64>> {
    s.qi.require_below_three("mean energy")?;
    let norm = q_norm_sq_quadrature(s, tol)?;
    let mu = s.mu();
    let mu_q = 2.0 * s.q() / s.eps();
    let f = |y: f64| {
        let l = s.ln_w(y);
        (l * -mu_q - l.conj() * mu).exp()
    };
    let opts = QuadOptions::with_tol(tol)
        .scale(s.length_scale())
        .tail_exponent(mu_q + mu);
    let r = integrate_semi_infinite_with(f, 0.0, &opts);
    if !r.converged {
        return Err(Error::QuadratureFailed {
            what: format!("mean energy at q = {}", s.q()),
            estimate: r.abs_error_estimate,
        });
    }
    let p = s.r.p;
    let factor = p * p / (2.0 * s.r.mass * norm.value);
    let value = (r.value * factor).re;
    let rel = norm.abs_error_estimate / norm.value + r.abs_error_estimate / r.value.norm();
    Ok(EvalResult {
        value,
        method: Method::Quadrature,
        abs_error_estimate: rel * (r.value * factor).norm(),
        converged: true,
    })
}

fn matrix_element(s: &QState, a2: f64, conjugate: bool) -> Result<(Complex64, f64)> {
    let q = s.q();
    let nu = s.mu();
    let p = s.r.p;
    let (pp, z, i_sign) = if conjugate {
        (p.conj(), 1.0 + p / p.conj(), -1.0)
    } else {
        (p, 1.0 + p.conj() / p, 1.0)
    };
    let f = hyp2f1(1.0, nu, 2.0 * nu + 2.0, z, HYP_TOL)?;
    // -(ħ/(±i A²)) (p/2m) √(2(q+1))/(3+q) sign(Im p)
    let pref = -(s.r.hbar / a2) / Complex64::new(0.0, i_sign) * pp / (2.0 * s.r.mass)
        * ((2.0 * (q + 1.0)).sqrt() / (3.0 + q))
        * s.r.side();
    let value = pref * f.value;
    Ok((value, pref.norm() * f.abs_error_estimate))
}

/// ⟨ψ|Hψ⟩ / A² from the closed form with the hypergeometric function at
/// 1 + p*/p. The mean energy is its real part.
pub fn energy_matrix_element_closed(s: &QState) -> Result<(Complex64, f64)> {
    s.qi.require_below_three("mean energy")?;
    let a2 = q_norm_sq_closed(s)?.value;
    matrix_element(s, a2, false)
}

/// ⟨Hψ|ψ⟩ / A², evaluated independently at the conjugate argument 1 + p/p*.
pub fn energy_matrix_element_conjugate_closed(s: &QState) -> Result<(Complex64, f64)> {
    s.qi.require_below_three("mean energy")?;
    let a2 = q_norm_sq_closed(s)?.value;
    matrix_element(s, a2, true)
}

/// Closed-form ⟨H⟩_q; routes to quadrature near q = 1.
pub fn q_mean_energy_closed(s: &QState) -> Result<EvalResult<f64>> {
    s.qi.require_below_three("mean energy")?;
    if s.qi.near_classical() {
        return q_mean_energy_quadrature(s, DEFAULT_TOL);
    }
    let norm = q_norm_sq_closed(s)?;
    let (x, err) = matrix_element(s, norm.value, false)?;
    let rel_norm = norm.abs_error_estimate / norm.value;
    Ok(EvalResult {
        value: x.re,
        method: Method::Closed,
        abs_error_estimate: err + rel_norm * x.norm(),
        converged: norm.converged,
    })
}

/// Closed form, falling back to quadrature when the continuation fails.
pub fn q_mean_energy(s: &QState) -> Result<EvalResult<f64>> {
    match q_mean_energy_closed(s) {
        Ok(v) if v.converged => Ok(v),
        Err(e @ Error::InvalidParameter(_)) => Err(e),
        _ => q_mean_energy_quadrature(s, DEFAULT_TOL),
    }
}
