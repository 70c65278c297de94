//! ∫_0^∞ g(x) e^{iωx} dx for smooth, algebraically decaying g.
//!
//! The half line is cut at multiples of π/|ω|; each half-period panel is
//! integrated adaptively and the partial sums are extrapolated with Wynn's
//! epsilon algorithm.

use num_complex::Complex64;

use super::{integrate_finite, integrate_semi_infinite_with, QuadOptions, QuadResult};

/// Partial sums kept for the epsilon table.
const WINDOW: usize = 40;
const MIN_PANELS: usize = 6;

pub fn integrate_oscillatory<G>(envelope: G, omega: f64, tol: f64) -> QuadResult
where
    G: Fn(f64) -> Complex64,
{
    integrate_oscillatory_with(envelope, omega, &QuadOptions::with_tol(tol))
}

/// `opts.scale` is only used when ω = 0, where the integral is handed to
/// the semi-infinite integrator.
pub fn integrate_oscillatory_with<G>(envelope: G, omega: f64, opts: &QuadOptions) -> QuadResult
where
    G: Fn(f64) -> Complex64,
{
    if omega == 0.0 {
        return integrate_semi_infinite_with(envelope, 0.0, opts);
    }
    let period = std::f64::consts::PI / omega.abs();
    let f = |x: f64| envelope(x) * Complex64::new(0.0, omega * x).exp();
    let panel_opts = QuadOptions {
        tol: 1e-3 * opts.tol,
        ..*opts
    };

    let mut sums: Vec<Complex64> = Vec::new();
    let mut partial = Complex64::new(0.0, 0.0);
    let mut panel_err = 0.0;
    let mut evaluations = 0;
    let mut estimates: Vec<Complex64> = Vec::new();
    let mut best = QuadResult {
        value: Complex64::new(0.0, 0.0),
        abs_error_estimate: f64::INFINITY,
        evaluations: 1,
        converged: false,
    };
    let mut hits = 0;

    let mut n = 0usize;
    while evaluations < opts.max_evaluations {
        let a = n as f64 * period;
        let remaining = QuadOptions {
            max_evaluations: (opts.max_evaluations - evaluations).max(21),
            ..panel_opts
        };
        let panel = integrate_finite(&f, a, a + period, &remaining);
        evaluations += panel.evaluations;
        partial += panel.value;
        panel_err += panel.abs_error_estimate;
        sums.push(partial);
        if sums.len() > WINDOW {
            sums.remove(0);
        }
        n += 1;

        let estimate = epsilon_extrapolate(&sums);
        estimates.push(estimate);
        let k = estimates.len();
        if k >= 3 && n >= MIN_PANELS {
            let e = estimates[k - 1];
            let err = (e - estimates[k - 2]).norm() + (e - estimates[k - 3]).norm() + panel_err;
            if err < best.abs_error_estimate {
                best = QuadResult {
                    value: e,
                    abs_error_estimate: err,
                    evaluations,
                    converged: false,
                };
            }
            if err <= opts.tol {
                hits += 1;
                if hits >= 2 {
                    return QuadResult {
                        value: e,
                        abs_error_estimate: err,
                        evaluations,
                        converged: true,
                    };
                }
            } else {
                hits = 0;
            }
        }
    }
    best.evaluations = evaluations.max(1);
    best
}

/// Deepest even-column entry of Wynn's epsilon table for `s`.
fn epsilon_extrapolate(s: &[Complex64]) -> Complex64 {
    let m = s.len();
    if m < 3 {
        return s[m - 1];
    }
    // prev = column k-1, cur = column k; column j has m - j entries.
    let mut prev = vec![Complex64::new(0.0, 0.0); m + 1];
    let mut cur: Vec<Complex64> = s.to_vec();
    let mut best = s[m - 1];
    for k in 0..m - 1 {
        let len = cur.len() - 1;
        let mut next = Vec::with_capacity(len);
        for i in 0..len {
            let diff = cur[i + 1] - cur[i];
            if diff.norm() <= f64::MIN_POSITIVE * 1e10 || diff.norm() == 0.0 {
                // Table has converged exactly in this column.
                return if k % 2 == 0 { cur[i + 1] } else { best };
            }
            next.push(prev[i + 1] + diff.inv());
        }
        prev = cur;
        cur = next;
        if k % 2 == 1 {
            // cur is column k + 1, an even column holding estimates
            if let Some(&v) = cur.last() {
                if v.re.is_finite() && v.im.is_finite() {
                    best = v;
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_envelope() {
        for k in [0.3, 1.0, 4.0, -2.5] {
            let r = integrate_oscillatory(|x: f64| Complex64::new((-x).exp(), 0.0), k, 1e-10);
            let exact = Complex64::new(1.0, -k).inv();
            assert!(r.converged, "{k}: {r:?}");
            assert!(
                (r.value - exact).norm() <= 1e-9,
                "{k}: {} vs {exact}",
                r.value
            );
        }
    }

    #[test]
    fn algebraic_envelope() {
        // ∫_0^∞ cos(x) / (1 + x^2) dx = π / (2e)
        let r = integrate_oscillatory(
            |x: f64| Complex64::new(1.0 / (1.0 + x * x), 0.0),
            1.0,
            1e-10,
        );
        assert!(r.converged, "{r:?}");
        let exact = std::f64::consts::PI / (2.0 * std::f64::consts::E);
        assert!((r.value.re - exact).abs() < 1e-9, "{}", r.value.re);
    }

    #[test]
    fn zero_frequency_delegates() {
        let r = integrate_oscillatory(|x: f64| Complex64::new((-x).exp(), 0.0), 0.0, 1e-10);
        assert!((r.value.re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn extrapolates_alternating_series() {
        // partial sums of 1 - 1/2 + 1/3 - ... -> ln 2
        let mut s = Vec::new();
        let mut acc = 0.0;
        for n in 1..=15 {
            acc += if n % 2 == 1 { 1.0 } else { -1.0 } / n as f64;
            s.push(Complex64::new(acc, 0.0));
        }
        let e = epsilon_extrapolate(&s);
        assert!((e.re - std::f64::consts::LN_2).abs() < 1e-10);
    }
}
