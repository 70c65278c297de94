use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use super::{q_norm_sq_closed, q_norm_sq_quadrature, EvalResult, Method, QState};
use crate::error::{Error, Result};
use crate::numkernel::upper_incomplete_gamma_ln_scaled;
use crate::quadrature::{integrate_finite, integrate_oscillatory_with, QuadOptions, QuadResult};

const GAMMA_TOL: f64 = 1e-12;

/// ∫ e^{-ikx/ħ} ψ(x) dx over the supported half line, unnormalized.
///
/// With x = s·y the integral becomes s ∫_0^∞ w(y)^{-μ} e^{-iskx/ħ} dy.
fn raw_overlap(s: &QState, k: f64, tol: f64) -> QuadResult {
    let side = s.r.side();
    let mu = s.mu();
    let envelope = |y: f64| (s.ln_w(y) * -mu).exp();
    let opts = QuadOptions::with_tol(tol).scale(s.length_scale());
    let r = integrate_oscillatory_with(envelope, -side * k / s.r.hbar, &opts);
    QuadResult {
        value: r.value * side,
        ..r
    }
}

/// Overlaps and densities of one state, with A computed once.
#[derive(Debug)]
pub struct QSpectrum {
    pub state: QState,
    pub tol: f64,
    a: f64,
    a_err: f64,
    closed_scale: OnceLock<Result<f64>>,
}

impl QSpectrum {
    /// `tol` is the absolute tolerance for each normalized overlap.
    pub fn new(state: QState, tol: f64) -> Result<Self> {
        state.qi.require_below_three("overlap")?;
        // a rough pass fixes the size of the norm, so the real pass never
        // asks for more than double precision can give
        let rough = q_norm_sq_quadrature(&state, 1e-6 * state.r.hbar / state.r.p.im.abs())?;
        let norm = q_norm_sq_quadrature(&state, (1e-3 * tol).max(1e-13 * rough.value))?;
        let a = norm.value.sqrt();
        Ok(QSpectrum {
            state,
            tol,
            a,
            a_err: 0.5 * norm.abs_error_estimate / norm.value,
            closed_scale: OnceLock::new(),
        })
    }

    /// A from quadrature of the norm.
    pub fn normalization(&self) -> f64 {
        self.a
    }

    /// ⟨φ_k|ψ⟩ / A with φ_k = e^{ikx/ħ}/√(2πħ).
    pub fn overlap_quadrature(&self, k: f64) -> Result<EvalResult<Complex64>> {
        let s = &self.state;
        let scale = self.a * (2.0 * PI * s.r.hbar).sqrt();
        let r = raw_overlap(s, k, self.tol * scale);
        if !r.converged {
            return Err(Error::QuadratureFailed {
                what: format!("overlap at k = {k}"),
                estimate: r.abs_error_estimate / scale,
            });
        }
        let value = r.value / scale;
        Ok(EvalResult {
            value,
            method: Method::Quadrature,
            abs_error_estimate: r.abs_error_estimate / scale + self.a_err * value.norm(),
            converged: true,
        })
    }

    /// The closed overlap as written in terms of Γ(a, z), including its
    /// 1/√A prefactor. Not normalized; see [`QSpectrum::closed_scale`].
    pub fn overlap_closed(&self, k: f64) -> Result<EvalResult<Complex64>> {
        q_overlap_closed(&self.state, k)
    }

    /// |closed(k)| / |quadrature(k)| measured at k = |p|. Constant in k if
    /// the closed form has the right shape.
    pub fn closed_scale(&self) -> Result<f64> {
        self.closed_scale
            .get_or_init(|| {
                let k_ref = self.state.r.p.norm();
                let c = self.overlap_closed(k_ref)?;
                let q = self.overlap_quadrature(k_ref)?;
                Ok(c.value.norm() / q.value.norm())
            })
            .clone()
    }

    /// |⟨φ_k|φ⟩|². The closed path is divided by the squared closed scale so
    /// both methods agree pointwise.
    pub fn density(&self, k: f64, method: Method) -> Result<EvalResult<f64>> {
        let ov = match method {
            Method::Quadrature => self.overlap_quadrature(k)?,
            Method::Closed => {
                let scale = self.closed_scale()?;
                let c = self.overlap_closed(k)?;
                EvalResult {
                    value: c.value / scale,
                    abs_error_estimate: c.abs_error_estimate / scale,
                    ..c
                }
            }
        };
        let m = ov.value.norm();
        Ok(EvalResult {
            value: m * m,
            method: ov.method,
            abs_error_estimate: 2.0 * m * ov.abs_error_estimate + ov.abs_error_estimate.powi(2),
            converged: ov.converged,
        })
    }
}

/// Normalized overlap ⟨φ_k|ψ⟩ / A by oscillatory quadrature.
pub fn q_overlap_quadrature(s: &QState, k: f64, tol: f64) -> Result<EvalResult<Complex64>> {
    QSpectrum::new(*s, tol)?.overlap_quadrature(k)
}

/// -i √(ħ/(2πA)) C^{2/(q-1)} k^{(3-q)/(q-1)} e^Z Γ((3-q)/(1-q), Z) with
/// C = √(2(q+1))/((1-q)p), Z = Ck, evaluated in log space.
///
/// Near q = 1 this is replaced by the normalized quadrature overlap.
pub fn q_overlap_closed(s: &QState, k: f64) -> Result<EvalResult<Complex64>> {
    s.qi.require_below_three("overlap")?;
    if !(k > 0.0) {
        return Err(Error::Domain(format!(
            "closed overlap needs k > 0, got {k}"
        )));
    }
    if s.qi.near_classical() {
        return q_overlap_quadrature(s, k, crate::quadrature::DEFAULT_TOL);
    }
    let q = s.q();
    let mu = s.mu();
    let norm = q_norm_sq_closed(s)?;
    let a = norm.value.sqrt();
    let big_c = Complex64::new((2.0 * (q + 1.0)).sqrt(), 0.0) / (s.r.p * (1.0 - q));
    let z = big_c * k;
    let g = upper_incomplete_gamma_ln_scaled(1.0 - mu, z, GAMMA_TOL)?;
    let ln_c = big_c.ln();
    let ln_value = Complex64::new(0.5 * (s.r.hbar / (2.0 * PI * a)).ln(), -0.5 * PI)
        + ln_c * mu
        + (mu - 1.0) * k.ln()
        + g.value;
    let value = ln_value.exp();
    // absolute error in the exponent becomes relative error in the value
    let exponent_err =
        f64::EPSILON * (mu * ln_c.norm() + (mu - 1.0) * k.ln().abs() + g.value.norm());
    let rel = g.abs_error_estimate + exponent_err + 0.5 * norm.abs_error_estimate / norm.value;
    Ok(EvalResult {
        value,
        method: Method::Closed,
        abs_error_estimate: rel * value.norm(),
        converged: g.converged && norm.converged,
    })
}

/// q-Breit-Wigner density |⟨φ_k|φ⟩|² by the chosen method.
pub fn q_breit_wigner(s: &QState, k: f64, method: Method) -> Result<f64> {
    Ok(QSpectrum::new(*s, crate::quadrature::DEFAULT_TOL)?
        .density(k, method)?
        .value)
}

/// ∫ |⟨φ_k|φ⟩|² dk over the real line.
///
/// The window [Re p - K, Re p + K] is integrated numerically; beyond it the
/// overlap behaves like ħ/(ik A √(2πħ)), whose squared tails are added in
/// closed form.
pub fn parseval_integral(s: &QState, tol: f64) -> Result<EvalResult<f64>> {
    let spec = QSpectrum::new(*s, 1e-3 * tol)?;
    let p = s.r.p;
    let k0 = p.re;
    let half = 1e4 * p.im.abs() + 100.0 * p.norm();
    let failed = std::cell::Cell::new(None);
    let f = |k: f64| match spec.overlap_quadrature(k) {
        Ok(v) => Complex64::new(v.value.norm_sqr(), 0.0),
        Err(e) => {
            failed.set(Some(e));
            Complex64::new(f64::NAN, 0.0)
        }
    };
    let r = integrate_finite(f, k0 - half, k0 + half, &QuadOptions::with_tol(tol));
    if let Some(e) = failed.take() {
        return Err(e);
    }
    let a = spec.normalization();
    let tails = s.r.hbar / (2.0 * PI * a * a) * (1.0 / (half + k0) + 1.0 / (half - k0));
    Ok(EvalResult {
        value: r.value.re + tails,
        method: Method::Quadrature,
        abs_error_estimate: r.abs_error_estimate,
        converged: r.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamow::{gamow_overlap, Resonance};

    fn state(q: f64, re: f64, im: f64) -> QState {
        QState::new(Resonance::unit(Complex64::new(re, im)).unwrap(), q).unwrap()
    }

    #[test]
    fn near_classical_overlap() {
        // the deviation from the classical overlap scales like (q - 1)/(Im p)²
        let s = state(1.0 + 1e-4, 1.0, -0.1);
        let v = q_overlap_quadrature(&s, 0.8, 1e-10).unwrap().value;
        let reference = Complex64::new(-0.358_077_237_006_796_9, 0.714_877_410_055_515_1);
        assert!((v - reference).norm() <= 1e-9, "{v}");
        let g = gamow_overlap(&s.r, 0.8);
        assert!((v - g).norm() <= 1e-2 * g.norm());

        let s = state(1.0 + 1e-4, 1.0, -0.5);
        let v = q_overlap_quadrature(&s, 0.8, 1e-10).unwrap().value;
        let g = gamow_overlap(&s.r, 0.8);
        assert!((v - g).norm() <= 1e-3 * g.norm(), "{v} vs {g}");
    }

    #[test]
    fn closed_shape_matches_quadrature() {
        for (re, im) in [(1.0, -0.1), (1.0, 0.1)] {
            let spec = QSpectrum::new(state(1.15, re, im), 1e-10).unwrap();
            let ratios: Vec<f64> = [0.2, 0.5, 0.8, 1.0, 1.5, 3.0]
                .iter()
                .map(|&k| {
                    let c = spec.overlap_closed(k).unwrap().value;
                    let q = spec.overlap_quadrature(k).unwrap().value;
                    let ratio = c / q;
                    assert!(ratio.im.abs() <= 1e-8 * ratio.re, "{ratio}");
                    ratio.re
                })
                .collect();
            for r in &ratios {
                assert!((r / ratios[0] - 1.0).abs() <= 1e-6);
            }
            let a = spec.normalization();
            assert!((ratios[0] - a.sqrt()).abs() < 1e-8);
        }
    }

    #[test]
    fn closed_density_is_rescaled() {
        let spec = QSpectrum::new(state(1.5, 1.0, -0.5), 1e-10).unwrap();
        for k in [0.3, 1.0, 2.0] {
            let c = spec.density(k, Method::Closed).unwrap().value;
            let q = spec.density(k, Method::Quadrature).unwrap().value;
            assert!((c - q).abs() <= 1e-8 * q);
        }
        assert!(spec.density(0.0, Method::Closed).is_err());
        assert!(spec.density(-1.0, Method::Quadrature).unwrap().value >= 0.0);
    }
}
