use std::f64::consts::PI;

use num_complex::Complex64;

use super::{is_nonpositive_integer, SpecialValue};
use crate::error::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

// B_{2k} / (2k (2k - 1)), k = 1..=8
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Shift target for the Stirling series; at |z| >= 15 eight terms reach
/// full double precision.
const STIRLING_MIN: f64 = 15.0;

/// Log-gamma for complex argument.
///
/// The imaginary part is only determined modulo 2π; `exp` of the result is
/// Γ(z). Poles at the nonpositive integers are reported as errors.
pub fn ln_gamma(z: Complex64) -> Result<SpecialValue> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("ln_gamma of non-finite {z}")));
    }
    if z.im == 0.0 && is_nonpositive_integer(z.re) {
        return Err(Error::Pole(format!("Γ has a pole at {}", z.re)));
    }
    if z.re < 0.5 {
        // Γ(z) Γ(1 - z) = π / sin(πz)
        let reflected = ln_gamma_right(Complex64::new(1.0, 0.0) - z);
        let value = Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - reflected.value;
        return Ok(SpecialValue {
            value,
            abs_error_estimate: reflected.abs_error_estimate
                + 4.0 * f64::EPSILON * value.norm().max(1.0),
            terms_or_iterations: reflected.terms_or_iterations,
            converged: true,
        });
    }
    Ok(ln_gamma_right(z))
}

fn ln_gamma_right(z: Complex64) -> SpecialValue {
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    let mut steps = 0;
    while w.norm() < STIRLING_MIN {
        shift += w.ln();
        w += 1.0;
        steps += 1;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for c in STIRLING {
        series += pow * c;
        pow *= inv2;
    }
    let value = (w - 0.5) * w.ln() - w + LN_SQRT_2PI + series - shift;
    let scale = (w * w.ln()).norm() + shift.norm();
    SpecialValue {
        value,
        abs_error_estimate: 4.0 * f64::EPSILON * scale.max(1.0),
        terms_or_iterations: steps + STIRLING.len(),
        converged: true,
    }
}

/// `ln(sin(πz))`, stable for large |Im z| and exact-ish near the real integers.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    // reduce the real part to [-1, 1]; sin(π(z - 2n)) = sin(πz)
    let n = (z.re / 2.0).round();
    let zr = Complex64::new(z.re - 2.0 * n, z.im);
    let w = zr * PI;
    if w.im.abs() < 10.0 {
        return w.sin().ln();
    }
    // sin w = (i/2) e^{-iw} (1 - e^{2iw}) for Im w > 0; conjugate otherwise
    let (w, flip) = if w.im > 0.0 {
        (w, false)
    } else {
        (w.conj(), true)
    };
    let i = Complex64::new(0.0, 1.0);
    let v = -i * w + Complex64::new(0.5f64.ln(), PI / 2.0) + super::clog1p(-(i * w * 2.0).exp());
    if flip {
        v.conj()
    } else {
        v
    }
}

/// Γ(x) for real `x` via `ln_gamma`, with the sign restored.
pub fn gamma_real(x: f64) -> Result<f64> {
    let lg = ln_gamma(Complex64::new(x, 0.0))?;
    Ok(lg.value.exp().re)
}

/// B(a, b) = Γ(a) Γ(b) / Γ(a + b).
pub fn beta(a: Complex64, b: Complex64) -> Result<SpecialValue> {
    let la = ln_gamma(a)?;
    let lb = ln_gamma(b)?;
    let lab = ln_gamma(a + b)?;
    let value = (la.value + lb.value - lab.value).exp();
    let rel = la.abs_error_estimate + lb.abs_error_estimate + lab.abs_error_estimate;
    Ok(SpecialValue {
        value,
        abs_error_estimate: value.norm() * rel,
        terms_or_iterations: la.terms_or_iterations
            + lb.terms_or_iterations
            + lab.terms_or_iterations,
        converged: true,
    })
}
