//! q-deformed Gamow states.
//!
//! With ε = q - 1, c = ħ√(2(q+1)) and μ = 2/(q-1) the state is
//!
//!   ψ(x) = s · w(x)^{-μ},   w(x) = 1 - iεpx/c,
//!
//! on the half line selected by s = sign(Im p), zero on the other side.
//! As q -> 1, w^{-μ} -> e^{ipx/ħ}.
//!
//! Closed forms are paired with quadrature of the integrals they were
//! derived from. For |q - 1| < [`NEAR_CLASSICAL`] the closed forms lose all
//! precision (their hypergeometric parameters grow like 1/(q-1)), so they
//! are routed to quadrature there and tagged accordingly.

mod energy;
mod limits;
mod norm;
mod overlap;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gamow::Resonance;
use crate::numkernel::clog1p;

pub use energy::{
    energy_matrix_element_closed, energy_matrix_element_conjugate_closed, q_mean_energy,
    q_mean_energy_closed, q_mean_energy_quadrature,
};
pub use limits::{
    breit_wigner_deviation, breit_wigner_grid, classical_limit_report, classical_limit_study,
    limits_report, LimitReport, LimitRow, LimitTolerances, MONOTONE_SLACK,
};
pub use norm::{normalization_a, pfaff_sides, q_norm_sq, q_norm_sq_closed, q_norm_sq_quadrature};
pub use overlap::{
    parseval_integral, q_breit_wigner, q_overlap_closed, q_overlap_quadrature, QSpectrum,
};

/// Below this distance from q = 1 closed forms defer to quadrature.
pub const NEAR_CLASSICAL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Closed,
    Quadrature,
}

/// A value together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalResult<T> {
    pub value: T,
    pub method: Method,
    pub abs_error_estimate: f64,
    pub converged: bool,
}

/// Deformation index 1 < q < 5. Operations involving the overlap further
/// require q < 3.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QIndex {
    q: f64,
}

impl QIndex {
    pub fn new(q: f64) -> Result<Self> {
        if !(q > 1.0 && q < 5.0) {
            return Err(Error::InvalidParameter(format!(
                "q = {q} is outside (1, 5)"
            )));
        }
        Ok(QIndex { q })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn near_classical(&self) -> bool {
        self.q - 1.0 < NEAR_CLASSICAL
    }

    /// Overlap and energy integrals converge only for q < 3.
    pub fn require_below_three(&self, what: &str) -> Result<()> {
        if self.q >= 3.0 {
            return Err(Error::InvalidParameter(format!(
                "{what} requires q < 3, got {}",
                self.q
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QState {
    pub r: Resonance,
    pub qi: QIndex,
}

impl QState {
    pub fn new(r: Resonance, q: f64) -> Result<Self> {
        Ok(QState {
            r,
            qi: QIndex::new(q)?,
        })
    }

    pub fn q(&self) -> f64 {
        self.qi.q
    }

    pub(crate) fn eps(&self) -> f64 {
        self.qi.q - 1.0
    }

    /// ħ√(2(q+1))
    pub(crate) fn c(&self) -> f64 {
        self.r.hbar * (2.0 * (self.qi.q + 1.0)).sqrt()
    }

    /// 2/(q-1)
    pub(crate) fn mu(&self) -> f64 {
        2.0 / self.eps()
    }

    /// ln w at distance y >= 0 into the supported half line, where
    /// w = 1 - i s ε p y / c.
    pub(crate) fn ln_w(&self, y: f64) -> Complex64 {
        let v = Complex64::new(0.0, -self.r.side()) * self.r.p * (self.eps() * y / self.c());
        clog1p(v)
    }

    /// Rough length over which the state decays, used to scale quadrature maps.
    pub(crate) fn length_scale(&self) -> f64 {
        let exp_len = self.r.hbar / (2.0 * self.r.p.im.abs());
        let power_len = self.c() / (self.eps() * self.r.p.norm());
        exp_len.min(power_len)
    }

    pub fn mirrored(&self) -> Self {
        QState {
            r: self.r.mirrored(),
            ..*self
        }
    }
}

/// e_q(x) = [1 + (1-q)x]^{1/(1-q)} on the principal branch; e^x at q = 1.
pub fn q_exponential(q: f64, x: Complex64) -> Result<Complex64> {
    if q == 1.0 {
        return Ok(x.exp());
    }
    let v = x * (1.0 - q);
    let base = v + 1.0;
    if base.im == 0.0 && base.re <= 0.0 {
        return Err(Error::BranchCut(format!(
            "1 + (1-q)x = {} is on the cut",
            base.re
        )));
    }
    Ok((clog1p(v) / (1.0 - q)).exp())
}

pub fn q_wavefunction(s: &QState, x: f64) -> Complex64 {
    let side = s.r.side();
    let support = if x == 0.0 {
        0.5 * side
    } else if x.signum() == side {
        side
    } else {
        return Complex64::new(0.0, 0.0);
    };
    (s.ln_w(x.abs()) * -s.mu()).exp() * support
}

/// Relative residual of -ħ²/(2m) ψ'' = (p²/2m) ψ^q at `x` on the supported
/// side, with ψ^q read on the power profile (the side sign factored out).
/// `finite_difference = Some(h)` uses a central difference of step h.
pub fn verify_eigenrelation(s: &QState, x: f64, finite_difference: Option<f64>) -> Result<f64> {
    let side = s.r.side();
    if x == 0.0 || x.signum() != side {
        return Err(Error::Domain(format!(
            "x = {x} is not on the supported side"
        )));
    }
    let (p, hbar, m) = (s.r.p, s.r.hbar, s.r.mass);
    let mu = s.mu();
    let ln_w = s.ln_w(x.abs());
    let second = match finite_difference {
        Some(h) => {
            let f = |t: f64| q_wavefunction(s, t) * side;
            (f(x + h) - f(x) * 2.0 + f(x - h)) / (h * h)
        }
        None => {
            // d/dx w = -iεp/c
            let dw = Complex64::new(0.0, -1.0) * p * (s.eps() / s.c());
            dw * dw * (mu * (mu + 1.0)) * (ln_w * (-mu - 2.0)).exp()
        }
    };
    let mu_q = 2.0 * s.q() / s.eps();
    let lhs = second * (-hbar * hbar / (2.0 * m));
    let rhs = (ln_w * -mu_q).exp() * (p * p / (2.0 * m));
    Ok((lhs - rhs).norm() / rhs.norm())
}
