//! Gauss hypergeometric function ₂F₁(a, b; c; z) for real parameters and
//! complex argument.
//!
//! Several representations are tried in order of how small their effective
//! expansion variable is: the Gauss series itself, the two Pfaff forms
//! (argument z/(z-1)), the connection formulas around z = 1 and z = ∞, and,
//! when one numerator parameter equals 1, Gauss's continued fraction, which
//! converges everywhere in the cut plane. Each route reports its own
//! truncation and rounding budget; the first one inside the requested
//! tolerance wins.

use num_complex::Complex64;
use serde::Serialize;

use super::{cpow_real, is_nonpositive_integer, ln_gamma, SpecialValue};
use crate::error::{Error, Result};

const EPS: f64 = f64::EPSILON;
const MAX_SERIES_TERMS: usize = 5_000_000;
const MAX_CF_TERMS: usize = 2_000_000;
/// Distance from an integer below which c - a - b or b - a is treated as
/// degenerate for the connection formulas.
const DEGENERATE_GAP: f64 = 1e-6;
/// Rank given to the continued fraction among the modulus-ranked routes.
const CF_RANK: f64 = 0.35;
/// Ranked after every series route: it costs several series evaluations.
const CONTINUATION_RANK: f64 = 2.0;
const MAX_TAYLOR_TERMS: usize = 4_000;
const MAX_TAYLOR_STEPS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Hyp2f1Route {
    Trivial,
    Direct,
    /// (1-z)^{-a} F(a, c-b; c; z/(z-1))
    PfaffA,
    /// (1-z)^{-b} F(c-a, b; c; z/(z-1))
    PfaffB,
    OneMinusZ,
    InverseZ,
    ContinuedFraction,
    /// Taylor steps of the hypergeometric ODE out from |z| = 1/2 along the ray
    /// through z; used near |z| = 1, arg z = ±π/3 where every series is slow.
    Continuation,
}

/// ₂F₁(a, b; c; z) to relative tolerance `tol`.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: Complex64, tol: f64) -> Result<SpecialValue> {
    hyp2f1_routed(a, b, c, z, tol).map(|(v, _)| v)
}

/// As [`hyp2f1`], also reporting which representation produced the value.
pub fn hyp2f1_routed(
    a: f64,
    b: f64,
    c: f64,
    z: Complex64,
    tol: f64,
) -> Result<(SpecialValue, Hyp2f1Route)> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if !(a.is_finite() && b.is_finite() && c.is_finite() && z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain("non-finite hypergeometric input".into()));
    }
    if is_nonpositive_integer(c) {
        return Err(Error::Pole(format!("c = {c} is a nonpositive integer")));
    }
    if z == Complex64::new(0.0, 0.0) || a == 0.0 || b == 0.0 {
        return Ok((
            SpecialValue::exact(Complex64::new(1.0, 0.0)),
            Hyp2f1Route::Trivial,
        ));
    }
    let terminating = is_nonpositive_integer(a) || is_nonpositive_integer(b);
    if terminating {
        let s = gauss_series(a, b, c, z, tol, MAX_SERIES_TERMS);
        return Ok((s.into_value(tol), Hyp2f1Route::Direct));
    }
    if z.im == 0.0 && z.re >= 1.0 {
        return Err(Error::Domain(format!(
            "z = {} lies on the branch cut [1, ∞)",
            z.re
        )));
    }

    let mut routes: Vec<(f64, Hyp2f1Route)> = Vec::new();
    let one = Complex64::new(1.0, 0.0);
    if z.norm() < 1.0 {
        routes.push((z.norm(), Hyp2f1Route::Direct));
    }
    let w = z / (z - one);
    if w.norm() < 1.0 {
        routes.push((w.norm(), pfaff_variant(a, b, c)));
    }
    if (one - z).norm() < 1.0 && !near_integer(c - a - b) {
        routes.push(((one - z).norm(), Hyp2f1Route::OneMinusZ));
    }
    if z.norm() > 1.0 && !near_integer(b - a) {
        routes.push((1.0 / z.norm(), Hyp2f1Route::InverseZ));
    }
    if (a == 1.0 || b == 1.0) && c > 1.0 {
        routes.push((CF_RANK, Hyp2f1Route::ContinuedFraction));
    }
    if z.norm() > 0.5 && !(z.im == 0.0 && z.re > 0.0) {
        routes.push((CONTINUATION_RANK, Hyp2f1Route::Continuation));
    }
    routes.sort_by(|x, y| x.0.total_cmp(&y.0));

    let mut best: Option<(SpecialValue, Hyp2f1Route)> = None;
    for &(_, route) in &routes {
        let attempt = match route {
            Hyp2f1Route::Direct => {
                Ok(gauss_series(a, b, c, z, tol, MAX_SERIES_TERMS).into_value(tol))
            }
            Hyp2f1Route::PfaffA | Hyp2f1Route::PfaffB => Ok(pfaff(a, b, c, z, tol, route)),
            Hyp2f1Route::OneMinusZ => one_minus_z(a, b, c, z, tol),
            Hyp2f1Route::InverseZ => inverse_z(a, b, c, z, tol),
            Hyp2f1Route::ContinuedFraction => Ok(continued_fraction(a, b, c, z, tol)),
            Hyp2f1Route::Continuation => continuation(a, b, c, z, tol),
            Hyp2f1Route::Trivial => unreachable!(),
        };
        let Ok(v) = attempt else { continue };
        if v.converged && v.value.re.is_finite() && v.value.im.is_finite() {
            return Ok((v, route));
        }
        let better = match &best {
            None => true,
            Some((b, _)) => v.rel_error() < b.rel_error(),
        };
        if better && v.value.re.is_finite() && v.value.im.is_finite() {
            best = Some((v, route));
        }
    }
    if routes.is_empty() && near_integer(c - a - b) && (one - z).norm() < 1.0 {
        return Err(Error::Degenerate(format!(
            "c - a - b = {} is (nearly) an integer",
            c - a - b
        )));
    }
    let best = best.map(|(v, _)| v).unwrap_or(SpecialValue {
        value: Complex64::new(f64::NAN, f64::NAN),
        abs_error_estimate: f64::INFINITY,
        terms_or_iterations: 0,
        converged: false,
    });
    Err(Error::NoConvergence {
        what: format!("2F1({a}, {b}; {c}; {z})"),
        best,
    })
}

fn near_integer(x: f64) -> bool {
    (x - x.round()).abs() < DEGENERATE_GAP
}

/// Prefer the Pfaff form that terminates, then the one whose transformed
/// parameter stays positive.
fn pfaff_variant(a: f64, b: f64, c: f64) -> Hyp2f1Route {
    if is_nonpositive_integer(c - b) {
        Hyp2f1Route::PfaffA
    } else if is_nonpositive_integer(c - a) {
        Hyp2f1Route::PfaffB
    } else if c - b > 0.0 {
        Hyp2f1Route::PfaffA
    } else if c - a > 0.0 {
        Hyp2f1Route::PfaffB
    } else {
        Hyp2f1Route::PfaffA
    }
}

struct Series {
    sum: Complex64,
    abs_err: f64,
    terms: usize,
}

impl Series {
    fn into_value(self, tol: f64) -> SpecialValue {
        SpecialValue {
            value: self.sum,
            abs_error_estimate: self.abs_err,
            terms_or_iterations: self.terms,
            converged: self.abs_err <= tol * self.sum.norm(),
        }
    }
}

/// Gauss series with a rigorous geometric bound on the tail.
///
/// For m beyond every parameter magnitude the term ratio satisfies
/// |t_{m+1}/t_m| <= |z| (1 + g(m)) with g decreasing, which bounds the tail.
fn gauss_series(a: f64, b: f64, c: f64, z: Complex64, tol: f64, max_terms: usize) -> Series {
    let zabs = z.norm();
    let alpha = (a + b - c - 1.0).abs();
    let beta = (a * b - c).abs();
    let settle = (a.abs().max(b.abs()).max(c.abs()) + 2.0).ceil() as usize;

    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut abs_sum = 1.0;
    for n in 0..max_terms {
        let nf = n as f64;
        let ratio = (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0));
        term *= z * ratio;
        let rounding = EPS * abs_sum * (4.0 + 2.0 * nf.sqrt());
        if term.re == 0.0 && term.im == 0.0 {
            return Series {
                sum,
                abs_err: rounding,
                terms: n + 1,
            };
        }
        sum += term;
        abs_sum += term.norm();
        if n + 1 >= settle {
            let m = nf + 1.0;
            let g = (alpha * m + beta) / ((m + c) * (m + 1.0));
            let r = zabs * (1.0 + g);
            if r < 1.0 {
                let tail = term.norm() * r / (1.0 - r);
                let err = tail + rounding;
                if err <= 0.25 * tol * sum.norm() || tail <= EPS * sum.norm() {
                    return Series {
                        sum,
                        abs_err: err,
                        terms: n + 1,
                    };
                }
            }
        }
    }
    Series {
        sum,
        abs_err: f64::INFINITY,
        terms: max_terms,
    }
}

fn pfaff(a: f64, b: f64, c: f64, z: Complex64, tol: f64, route: Hyp2f1Route) -> SpecialValue {
    let one = Complex64::new(1.0, 0.0);
    let w = z / (z - one);
    let (pa, pb, expo) = match route {
        Hyp2f1Route::PfaffA => (a, c - b, a),
        _ => (c - a, b, b),
    };
    let prefactor = cpow_real(one - z, -expo);
    if is_nonpositive_integer(pa) || is_nonpositive_integer(pb) || pa == 0.0 || pb == 0.0 {
        let s = gauss_series(pa, pb, c, w, tol, MAX_SERIES_TERMS);
        return scale(s.into_value(tol), prefactor, tol);
    }
    let s = gauss_series(pa, pb, c, w, 0.5 * tol, MAX_SERIES_TERMS);
    scale(s.into_value(tol), prefactor, tol)
}

fn scale(v: SpecialValue, factor: Complex64, tol: f64) -> SpecialValue {
    let value = v.value * factor;
    let abs_error_estimate = v.abs_error_estimate * factor.norm() + 2.0 * EPS * value.norm();
    SpecialValue {
        value,
        abs_error_estimate,
        terms_or_iterations: v.terms_or_iterations,
        converged: abs_error_estimate <= tol * value.norm(),
    }
}

/// Γ(n1) Γ(n2) / (Γ(d1) Γ(d2)) with its relative error; a pole in the
/// denominator makes the ratio exactly zero.
fn gamma_ratio(num: [f64; 2], den: [f64; 2]) -> Result<(f64, f64)> {
    if den.iter().any(|&d| is_nonpositive_integer(d)) {
        return Ok((0.0, 0.0));
    }
    let mut log = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for x in num {
        let g = ln_gamma(Complex64::new(x, 0.0))?;
        log += g.value;
        err += g.abs_error_estimate;
    }
    for x in den {
        let g = ln_gamma(Complex64::new(x, 0.0))?;
        log -= g.value;
        err += g.abs_error_estimate;
    }
    Ok((log.exp().re, err))
}

fn connection(
    terms: [(f64, Complex64, SpecialValue); 2],
    ratio_errs: [f64; 2],
    tol: f64,
    iterations: usize,
) -> SpecialValue {
    let mut value = Complex64::new(0.0, 0.0);
    let mut magnitude = 0.0;
    let mut err = 0.0;
    for ((coef, power, series), rel) in terms.into_iter().zip(ratio_errs) {
        let t = series.value * power * coef;
        value += t;
        magnitude += t.norm();
        err += series.abs_error_estimate * (power * coef).norm() + rel * t.norm();
    }
    err += 8.0 * EPS * magnitude;
    SpecialValue {
        value,
        abs_error_estimate: err,
        terms_or_iterations: iterations,
        converged: err <= tol * value.norm(),
    }
}

fn one_minus_z(a: f64, b: f64, c: f64, z: Complex64, tol: f64) -> Result<SpecialValue> {
    let s = c - a - b;
    let one = Complex64::new(1.0, 0.0);
    let x = one - z;
    let (coef1, err1) = gamma_ratio([c, s], [c - a, c - b])?;
    let (coef2, err2) = gamma_ratio([c, -s], [a, b])?;
    let inner_tol = 0.1 * tol;
    let f1 = gauss_series(a, b, 1.0 - s, x, inner_tol, MAX_SERIES_TERMS).into_value(inner_tol);
    let f2 =
        gauss_series(c - a, c - b, 1.0 + s, x, inner_tol, MAX_SERIES_TERMS).into_value(inner_tol);
    let its = f1.terms_or_iterations + f2.terms_or_iterations;
    Ok(connection(
        [(coef1, one, f1), (coef2, cpow_real(x, s), f2)],
        [err1, err2],
        tol,
        its,
    ))
}

fn inverse_z(a: f64, b: f64, c: f64, z: Complex64, tol: f64) -> Result<SpecialValue> {
    let inv = z.inv();
    let (coef1, err1) = gamma_ratio([c, b - a], [b, c - a])?;
    let (coef2, err2) = gamma_ratio([c, a - b], [a, c - b])?;
    let inner_tol = 0.1 * tol;
    let f1 = gauss_series(
        a,
        a - c + 1.0,
        a - b + 1.0,
        inv,
        inner_tol,
        MAX_SERIES_TERMS,
    )
    .into_value(inner_tol);
    let f2 = gauss_series(
        b,
        b - c + 1.0,
        b - a + 1.0,
        inv,
        inner_tol,
        MAX_SERIES_TERMS,
    )
    .into_value(inner_tol);
    let its = f1.terms_or_iterations + f2.terms_or_iterations;
    Ok(connection(
        [
            (coef1, cpow_real(-z, -a), f1),
            (coef2, cpow_real(-z, -b), f2),
        ],
        [err1, err2],
        tol,
        its,
    ))
}

/// One Taylor step of w(1-w)F'' + [c - (a+b+1)w]F' - abF = 0 from w to w + h,
/// for the solution with F(w) = f0, F'(w) = d0.
struct TaylorStep {
    value: Complex64,
    deriv: Complex64,
    value_err: f64,
    deriv_err: f64,
    terms: usize,
}

fn taylor_step(
    (a, b, c): (f64, f64, f64),
    w: Complex64,
    h: Complex64,
    f0: Complex64,
    d0: Complex64,
) -> Option<TaylorStep> {
    let one = Complex64::new(1.0, 0.0);
    let p0 = w * (one - w);
    let p1 = one - w * 2.0;
    let q0 = c - (a + b + 1.0) * w;
    let q1 = -(a + b + 1.0);
    let r = -a * b;
    let settle = (a.abs().max(b.abs()).max(c.abs()) + 4.0).ceil() as usize;

    // s_n = t_n h^n, so F(w + h) = Σ s_n and h F'(w + h) = Σ n s_n
    let (mut s0, mut s1) = (f0, d0 * h);
    let (mut value, mut hderiv) = (s0 + s1, s1);
    let (mut abs_v, mut abs_d) = (s0.norm() + s1.norm(), s1.norm());
    for n in 0..MAX_TAYLOR_TERMS {
        let nf = n as f64;
        let s2 = -((p1 * nf + q0) * (nf + 1.0) * s1 * h
            + (-nf * (nf - 1.0) + q1 * nf + r) * s0 * h * h)
            / (p0 * ((nf + 2.0) * (nf + 1.0)));
        value += s2;
        hderiv += s2 * (nf + 2.0);
        abs_v += s2.norm();
        abs_d += s2.norm() * (nf + 2.0);
        if n >= settle {
            let last = s1.norm() + s2.norm();
            let last_d = s1.norm() * (nf + 1.0) + s2.norm() * (nf + 2.0);
            if last <= EPS * abs_v && last_d <= EPS * abs_d {
                let rounding = EPS * (4.0 + 2.0 * nf.sqrt());
                return Some(TaylorStep {
                    value,
                    deriv: hderiv / h,
                    value_err: 2.0 * last + rounding * abs_v,
                    deriv_err: (2.0 * last_d + rounding * abs_d) / h.norm(),
                    terms: n + 3,
                });
            }
        }
        s0 = s1;
        s1 = s2;
    }
    None
}

/// Starts from the Gauss series at z/(2|z|) and steps along the ray to z,
/// each step at most half the distance to the nearer singular point.
fn continuation(a: f64, b: f64, c: f64, z: Complex64, tol: f64) -> Result<SpecialValue> {
    let one = Complex64::new(1.0, 0.0);
    let inner_tol = 0.01 * tol;
    let mut w = z * (0.5 / z.norm());
    let f = gauss_series(a, b, c, w, inner_tol, MAX_SERIES_TERMS);
    let d = gauss_series(a + 1.0, b + 1.0, c + 1.0, w, inner_tol, MAX_SERIES_TERMS);
    let slope = a * b / c;
    let (mut fv, mut dv) = (f.sum, d.sum * slope);
    let (mut fe, mut de) = (f.abs_err, d.abs_err * slope.abs());
    let mut terms = f.terms + d.terms;
    let mut steps = 0;
    while w != z {
        steps += 1;
        let reach = 0.5 * w.norm().min((one - w).norm());
        if steps > MAX_TAYLOR_STEPS || !(reach > 0.0) {
            return Err(Error::NoConvergence {
                what: format!("2F1({a}, {b}; {c}; {z}) continuation"),
                best: SpecialValue {
                    value: fv,
                    abs_error_estimate: f64::INFINITY,
                    terms_or_iterations: terms,
                    converged: false,
                },
            });
        }
        let mut h = z - w;
        let last = h.norm() <= reach;
        if !last {
            h *= reach / h.norm();
        }
        // the step is linear in (F, F'), so propagate both basis solutions
        let zero = Complex64::new(0.0, 0.0);
        let failed = || Error::NoConvergence {
            what: format!("2F1({a}, {b}; {c}; {z}) Taylor step"),
            best: SpecialValue {
                value: fv,
                abs_error_estimate: f64::INFINITY,
                terms_or_iterations: terms,
                converged: false,
            },
        };
        let u = taylor_step((a, b, c), w, h, one, zero).ok_or_else(failed)?;
        let v = taylor_step((a, b, c), w, h, zero, one).ok_or_else(failed)?;
        let (fa, da) = (fv.norm(), dv.norm());
        let new_fe =
            fe * u.value.norm() + de * v.value.norm() + fa * u.value_err + da * v.value_err;
        de = fe * u.deriv.norm() + de * v.deriv.norm() + fa * u.deriv_err + da * v.deriv_err;
        fe = new_fe;
        let next = fv * u.value + dv * v.value;
        dv = fv * u.deriv + dv * v.deriv;
        fv = next;
        terms += u.terms + v.terms;
        w = if last { z } else { w + h };
    }
    Ok(SpecialValue {
        value: fv,
        abs_error_estimate: fe,
        terms_or_iterations: terms,
        converged: fe <= tol * fv.norm(),
    })
}

/// Gauss's continued fraction for F(1, b; c; z), valid on the whole cut
/// plane; evaluated with the modified Lentz algorithm.
fn continued_fraction(a: f64, b: f64, c: f64, z: Complex64, tol: f64) -> SpecialValue {
    let b = if a == 1.0 { b } else { a };
    // F(1, b; c; z) = F(0 + 1, b; cc + 1; z) / F(0, b; cc; z), cc = c - 1
    let cc = c - 1.0;
    let coefficient = |n: usize| -> f64 {
        if n % 2 == 1 {
            let m = ((n - 1) / 2) as f64;
            (-cc - m) * (b + m) / ((cc + 2.0 * m) * (cc + 2.0 * m + 1.0))
        } else {
            let m = (n / 2) as f64;
            (b - cc - m) * m / ((cc + 2.0 * m - 1.0) * (cc + 2.0 * m))
        }
    };
    let tiny = Complex64::new(1e-300, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mut f = one;
    let mut cl = f;
    let mut d = Complex64::new(0.0, 0.0);
    let mut last_delta = f64::INFINITY;
    let mut iterations = MAX_CF_TERMS;
    for n in 1..=MAX_CF_TERMS {
        let an = z * coefficient(n);
        d = one + an * d;
        if d.norm() == 0.0 {
            d = tiny;
        }
        cl = one + an / cl;
        if cl.norm() == 0.0 {
            cl = tiny;
        }
        d = d.inv();
        let delta = cl * d;
        f *= delta;
        last_delta = (delta - one).norm();
        if last_delta <= 2.0 * EPS {
            iterations = n;
            break;
        }
    }
    let value = f.inv();
    let err = value.norm() * (10.0 * last_delta + EPS * (8.0 + (iterations as f64).sqrt()));
    SpecialValue {
        value,
        abs_error_estimate: err,
        terms_or_iterations: iterations,
        converged: err <= tol * value.norm(),
    }
}
