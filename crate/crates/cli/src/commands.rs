use qgamow_core::gamow::{
    breit_wigner, breit_wigner_total, gamow_eigen_residual, gamow_mean_energy, gamow_norm_sq,
    gamow_norm_sq_quadrature, gamow_overlap_quadrature,
};
use qgamow_core::qgamow::{
    classical_limit_study, limits_report, parseval_integral, q_mean_energy_closed,
    q_mean_energy_quadrature, q_norm_sq_closed, q_norm_sq_quadrature, verify_eigenrelation,
    LimitRow, LimitTolerances, QSpectrum,
};
use qgamow_core::validation::{run_validation, Tolerances, ValidationConfig};
use qgamow_core::{
    Complex64, CurveRow, Method, QState, ReportEntry, Resonance, SpectralCurve, ValidationReport,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::output::{csv_table, json};
use crate::{
    Command, CurveArgs, EigenArgs, Format, LimitsArgs, Rendered, RunConfig, RunError, StateArgs,
    ValidateArgs,
};

/// Half width of the numerically integrated Cauchy window, in units of |Im p|.
const CAUCHY_HALF_WIDTH: f64 = 1e3;

fn eval_err(e: impl std::fmt::Display) -> RunError {
    RunError::Evaluation(e.to_string())
}

/// Either the classical state (q = 1) or a deformed one.
enum Model {
    Classical(Resonance),
    Deformed(QState),
}

impl Model {
    fn new(q: f64, p: Complex64, hbar: f64, mass: f64) -> Result<Self, RunError> {
        let r = Resonance::new(p, hbar, mass).map_err(eval_err)?;
        if q == 1.0 {
            Ok(Model::Classical(r))
        } else {
            Ok(Model::Deformed(QState::new(r, q).map_err(eval_err)?))
        }
    }

    fn resonance(&self) -> &Resonance {
        match self {
            Model::Classical(r) => r,
            Model::Deformed(s) => &s.r,
        }
    }

    fn q(&self) -> f64 {
        match self {
            Model::Classical(_) => 1.0,
            Model::Deformed(s) => s.q(),
        }
    }
}

fn model(s: &StateArgs) -> Result<Model, RunError> {
    Model::new(s.q, s.p, s.common.hbar, s.common.mass)
}

/// Runs the command and formats its output without writing it anywhere.
pub fn render(cfg: &RunConfig) -> Result<Rendered, RunError> {
    match &cfg.command {
        Command::Norm(s) => norm(s),
        Command::Energy(s) => energy(s),
        Command::Curve(c) => curve(c),
        Command::Parseval(s) => parseval(s),
        Command::Limits(l) => limits(l),
        Command::Validate(v) => validate(v),
        Command::Eigencheck(e) => eigencheck(e),
    }
}

#[derive(Debug, Serialize)]
struct ValueRow {
    quantity: &'static str,
    method: Method,
    q: f64,
    p_re: f64,
    p_im: f64,
    value: f64,
    abs_error_estimate: f64,
}

const VALUE_HEADER: [&str; 7] = [
    "quantity",
    "method",
    "q",
    "p_re",
    "p_im",
    "value",
    "abs_error_estimate",
];

fn values(rows: Vec<ValueRow>, format: Format) -> Rendered {
    let text = match format {
        Format::Csv => csv_table(&VALUE_HEADER, &rows),
        Format::Json => json(&rows),
    };
    Rendered { text, pass: true }
}

fn norm(s: &StateArgs) -> Result<Rendered, RunError> {
    let m = model(s)?;
    let tol = s.common.tol();
    let mut results: Vec<(Method, f64, f64)> = Vec::new();
    if s.method.closed() {
        results.push(match &m {
            Model::Classical(r) => (Method::Closed, gamow_norm_sq(r).map_err(eval_err)?, 0.0),
            Model::Deformed(st) => {
                let v = q_norm_sq_closed(st).map_err(eval_err)?;
                (v.method, v.value, v.abs_error_estimate)
            }
        });
    }
    if s.method.quadrature() {
        results.push(match &m {
            Model::Classical(r) => {
                let v = gamow_norm_sq_quadrature(r, tol);
                if !v.converged {
                    return Err(RunError::Evaluation(format!(
                        "norm quadrature did not converge (estimate {:e})",
                        v.abs_error_estimate
                    )));
                }
                (Method::Quadrature, v.value.re, v.abs_error_estimate)
            }
            Model::Deformed(st) => {
                let v = q_norm_sq_quadrature(st, tol).map_err(eval_err)?;
                (v.method, v.value, v.abs_error_estimate)
            }
        });
    }
    let p = m.resonance().p;
    let mut rows = Vec::new();
    for (method, value, err) in results {
        let row = |quantity, value, abs_error_estimate| ValueRow {
            quantity,
            method,
            q: m.q(),
            p_re: p.re,
            p_im: p.im,
            value,
            abs_error_estimate,
        };
        rows.push(row("norm_sq", value, err));
        rows.push(row("normalization", value.sqrt(), 0.5 * err / value.sqrt()));
    }
    Ok(values(rows, s.common.format))
}

fn energy(s: &StateArgs) -> Result<Rendered, RunError> {
    let m = model(s)?;
    let tol = s.common.tol();
    let p = m.resonance().p;
    let mut rows = Vec::new();
    let mut push = |method, value, abs_error_estimate| {
        rows.push(ValueRow {
            quantity: "mean_energy",
            method,
            q: m.q(),
            p_re: p.re,
            p_im: p.im,
            value,
            abs_error_estimate,
        })
    };
    match &m {
        // the classical value is exact; there is no separate oracle row
        Model::Classical(r) => push(Method::Closed, gamow_mean_energy(r), 0.0),
        Model::Deformed(st) => {
            if s.method.closed() {
                let v = q_mean_energy_closed(st).map_err(eval_err)?;
                push(v.method, v.value, v.abs_error_estimate);
            }
            if s.method.quadrature() {
                let v = q_mean_energy_quadrature(st, tol).map_err(eval_err)?;
                push(v.method, v.value, v.abs_error_estimate);
            }
        }
    }
    Ok(values(rows, s.common.format))
}

/// k_min, then evenly spaced up to k_max inclusive.
pub(crate) fn k_grid(k_min: f64, k_max: f64, steps: u32) -> Vec<f64> {
    if steps == 1 {
        return vec![k_min];
    }
    let n = steps as usize;
    (0..n)
        .map(|i| {
            if i == n - 1 {
                k_max
            } else {
                k_min + (k_max - k_min) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

fn curve(c: &CurveArgs) -> Result<Rendered, RunError> {
    let s = &c.state;
    let m = model(s)?;
    let tol = s.common.tol();
    let ks = k_grid(c.k_min, c.k_max, c.k_steps);
    let (closed, quad) = (s.method.closed(), s.method.quadrature());

    let (rows, closed_scale): (Vec<Result<CurveRow, String>>, Option<f64>) = match &m {
        Model::Classical(r) => {
            let rows = ks
                .par_iter()
                .map(|&k| {
                    let cd = closed.then(|| breit_wigner(r, k));
                    let qd = if quad {
                        let v = gamow_overlap_quadrature(r, k, tol).map_err(|e| e.to_string())?;
                        if !v.converged {
                            return Err(format!(
                                "overlap quadrature did not converge (estimate {:e})",
                                v.abs_error_estimate
                            ));
                        }
                        Some(v.value.norm_sqr())
                    } else {
                        None
                    };
                    Ok(CurveRow::new(k, cd, qd))
                })
                .collect();
            (rows, None)
        }
        Model::Deformed(st) => {
            let spec = QSpectrum::new(*st, tol).map_err(eval_err)?;
            // the closed line shape has no branch-free form at k <= 0
            let any_positive = ks.iter().any(|&k| k > 0.0);
            let scale = if closed && any_positive {
                Some(spec.closed_scale().map_err(eval_err)?)
            } else {
                None
            };
            let rows = ks
                .par_iter()
                .map(|&k| {
                    let cd = if closed && k > 0.0 {
                        Some(
                            spec.density(k, Method::Closed)
                                .map_err(|e| e.to_string())?
                                .value,
                        )
                    } else {
                        None
                    };
                    let qd = if quad {
                        Some(
                            spec.density(k, Method::Quadrature)
                                .map_err(|e| e.to_string())?
                                .value,
                        )
                    } else {
                        None
                    };
                    Ok(CurveRow::new(k, cd, qd))
                })
                .collect();
            (rows, scale)
        }
    };
    let rows = rows
        .into_iter()
        .zip(&ks)
        .map(|(r, k)| r.map_err(|e| RunError::Evaluation(format!("curve failed at k = {k}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let p = m.resonance().p;
    let curve = SpectralCurve {
        q: m.q(),
        p_re: p.re,
        p_im: p.im,
        hbar: s.common.hbar,
        mass: s.common.mass,
        tol,
        closed_scale,
        rows,
    };
    let text = match s.common.format {
        Format::Csv => curve.to_csv(),
        Format::Json => json(&curve),
    };
    Ok(Rendered { text, pass: true })
}

#[derive(Debug, Serialize)]
struct ParsevalRow {
    q: f64,
    p_re: f64,
    p_im: f64,
    integral: f64,
    abs_error_estimate: f64,
    deviation: f64,
    tol: f64,
    pass: bool,
}

fn parseval(s: &StateArgs) -> Result<Rendered, RunError> {
    let m = model(s)?;
    let tol = s.common.tol();
    let (integral, err) = match &m {
        // the classical squared overlap is the Cauchy density itself
        Model::Classical(r) => {
            let v = breit_wigner_total(r, CAUCHY_HALF_WIDTH, tol);
            (v.value.re, v.abs_error_estimate)
        }
        Model::Deformed(st) => {
            let v = parseval_integral(st, tol).map_err(eval_err)?;
            (v.value, v.abs_error_estimate)
        }
    };
    let check_tol = Tolerances::default().parseval;
    let deviation = (integral - 1.0).abs();
    let p = m.resonance().p;
    let row = ParsevalRow {
        q: m.q(),
        p_re: p.re,
        p_im: p.im,
        integral,
        abs_error_estimate: err,
        deviation,
        tol: check_tol,
        pass: deviation <= check_tol,
    };
    let pass = row.pass;
    let text = match s.common.format {
        Format::Csv => csv_table(
            &[
                "q",
                "p_re",
                "p_im",
                "integral",
                "abs_error_estimate",
                "deviation",
                "tol",
                "pass",
            ],
            &[row],
        ),
        Format::Json => json(&row),
    };
    Ok(Rendered { text, pass })
}

#[derive(Debug, Serialize)]
struct LimitsOutput<'a> {
    rows: &'a [LimitRow],
    entries: &'a [ReportEntry],
}

fn limits(l: &LimitsArgs) -> Result<Rendered, RunError> {
    let r = Resonance::new(l.p, l.common.hbar, l.common.mass).map_err(eval_err)?;
    let study = classical_limit_study(&r, &l.q_seq.0, l.common.tol()).map_err(eval_err)?;
    let report = limits_report(&study, &LimitTolerances::default());
    let text = match l.common.format {
        Format::Csv => csv_table(
            &[
                "q",
                "norm",
                "norm_classical",
                "norm_deviation",
                "energy",
                "energy_classical",
                "energy_deviation",
                "breit_wigner_deviation",
            ],
            &study.rows,
        ),
        Format::Json => json(&LimitsOutput {
            rows: &study.rows,
            entries: &report.entries,
        }),
    };
    Ok(Rendered {
        text,
        pass: report.all_pass(),
    })
}

#[derive(Debug, Serialize)]
struct ReportLine<'a> {
    kind: &'static str,
    check_id: &'a str,
    lhs: f64,
    rhs: Option<f64>,
    rel_diff: Option<f64>,
    tol: Option<f64>,
    pass: Option<bool>,
    note: Option<&'a str>,
}

/// One table: check rows first, then errata rows with the measured ratio
/// in the lhs column.
fn report_csv(report: &ValidationReport) -> String {
    let mut lines: Vec<ReportLine> = report
        .entries
        .iter()
        .map(|e| ReportLine {
            kind: "check",
            check_id: &e.check_id,
            lhs: e.lhs,
            rhs: Some(e.rhs),
            rel_diff: Some(e.rel_diff),
            tol: Some(e.tol),
            pass: Some(e.pass),
            note: e.note.as_deref(),
        })
        .collect();
    lines.extend(report.errata.iter().map(|e| ReportLine {
        kind: "errata",
        check_id: &e.check_id,
        lhs: e.measured_ratio,
        rhs: None,
        rel_diff: None,
        tol: None,
        pass: None,
        note: Some(&e.note),
    }));
    csv_table(
        &[
            "kind", "check_id", "lhs", "rhs", "rel_diff", "tol", "pass", "note",
        ],
        &lines,
    )
}

fn validate(v: &ValidateArgs) -> Result<Rendered, RunError> {
    let defaults = ValidationConfig::default();
    let cfg = ValidationConfig {
        q_grid: v
            .q_grid
            .as_ref()
            .map(|l| l.0.clone())
            .unwrap_or(defaults.q_grid),
        p_grid: v
            .p_grid
            .as_ref()
            .map(|l| l.0.clone())
            .unwrap_or(defaults.p_grid),
        hbar: v.common.hbar,
        mass: v.common.mass,
        tolerances: v.common.tol.map(Tolerances::uniform).unwrap_or_default(),
        seed: v.seed,
    };
    let report = run_validation(&cfg).map_err(eval_err)?;
    let text = match v.common.format {
        Format::Csv => report_csv(&report),
        Format::Json => json(&report),
    };
    Ok(Rendered {
        text,
        pass: report.all_pass(),
    })
}

#[derive(Debug, Serialize)]
struct EigenRow {
    x: f64,
    analytic: f64,
    finite_difference: f64,
    pass: bool,
}

fn eigencheck(e: &EigenArgs) -> Result<Rendered, RunError> {
    let m = Model::new(e.q, e.p, e.common.hbar, e.common.mass)?;
    let tols = Tolerances::default();
    let side = m.resonance().side();
    let n = e.points as usize;
    let residual = |x: f64, h: Option<f64>| match &m {
        Model::Classical(r) => gamow_eigen_residual(r, x, h),
        Model::Deformed(s) => verify_eigenrelation(s, x, h),
    };
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let t = if n == 1 {
            0.0
        } else {
            i as f64 / (n - 1) as f64
        };
        let x = side * (0.1 + 9.9 * t);
        let analytic = residual(x, None).map_err(eval_err)?;
        let finite_difference = residual(x, Some(e.fd_step)).map_err(eval_err)?;
        rows.push(EigenRow {
            x,
            analytic,
            finite_difference,
            pass: analytic <= tols.eigen_analytic && finite_difference <= tols.eigen_fd,
        });
    }
    let pass = rows.iter().all(|r| r.pass);
    let text = match e.common.format {
        Format::Csv => csv_table(&["x", "analytic", "finite_difference", "pass"], &rows),
        Format::Json => json(&rows),
    };
    Ok(Rendered { text, pass })
}
