use rayon::prelude::*;
use serde::Serialize;

use super::{
    q_mean_energy_quadrature, q_norm_sq_quadrature, Method, QSpectrum, QState, NEAR_CLASSICAL,
};
use crate::error::{Error, Result};
use crate::gamow::{breit_wigner, gamow_mean_energy, gamow_norm_sq, Resonance};
use crate::report::{ReportEntry, ValidationReport};

/// Points on the k grid used for the sup-distance between line shapes.
pub const BW_GRID_POINTS: usize = 300;
/// Half width of that grid in units of |Im p|.
pub const BW_GRID_HALF_WIDTH: f64 = 10.0;
/// Allowed growth between consecutive deviations.
pub const MONOTONE_SLACK: f64 = 1.1;

/// Deviation bounds applied to rows with |q - 1| below the near-classical
/// threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitTolerances {
    pub norm: f64,
    pub energy: f64,
    pub breit_wigner: f64,
}

impl Default for LimitTolerances {
    fn default() -> Self {
        LimitTolerances {
            norm: 1e-3,
            energy: 1e-3,
            breit_wigner: 1e-3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitRow {
    pub q: f64,
    pub norm: f64,
    pub norm_classical: f64,
    pub norm_deviation: f64,
    pub energy: f64,
    pub energy_classical: f64,
    pub energy_deviation: f64,
    /// sup_k |q-BW - BW| / peak BW over the k grid.
    pub breit_wigner_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitReport {
    pub resonance: Resonance,
    pub rows: Vec<LimitRow>,
}

impl LimitReport {
    fn column(&self, pick: fn(&LimitRow) -> f64) -> Vec<f64> {
        self.rows.iter().map(pick).collect()
    }

    /// Whether each of the norm, energy and line-shape columns is
    /// nonincreasing up to [`MONOTONE_SLACK`].
    pub fn monotone(&self) -> [bool; 3] {
        let ok = |v: Vec<f64>| v.windows(2).all(|w| w[1] <= MONOTONE_SLACK * w[0]);
        [
            ok(self.column(|r| r.norm_deviation)),
            ok(self.column(|r| r.energy_deviation)),
            ok(self.column(|r| r.breit_wigner_deviation)),
        ]
    }
}

fn rel_dev(value: f64, reference: f64) -> f64 {
    if reference == 0.0 {
        value.abs()
    } else {
        ((value - reference) / reference).abs()
    }
}

/// The k grid of the line-shape comparison for `r`.
pub fn breit_wigner_grid(r: &Resonance) -> Vec<f64> {
    let lo = r.p.re - BW_GRID_HALF_WIDTH * r.p.im.abs();
    let hi = r.p.re + BW_GRID_HALF_WIDTH * r.p.im.abs();
    let n = BW_GRID_POINTS;
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// sup_k |q-BW(k) - BW(k)| / BW(Re p) on the standard grid, quadrature path.
pub fn breit_wigner_deviation(s: &QState, tol: f64) -> Result<f64> {
    let spec = QSpectrum::new(*s, tol)?;
    let peak = breit_wigner(&s.r, s.r.p.re);
    let diffs: Vec<Result<f64>> = breit_wigner_grid(&s.r)
        .par_iter()
        .map(|&k| Ok((spec.density(k, Method::Quadrature)?.value - breit_wigner(&s.r, k)).abs()))
        .collect();
    let mut sup: f64 = 0.0;
    for d in diffs {
        sup = sup.max(d?);
    }
    Ok(sup / peak)
}

/// Deviations of the q-norm, q-energy and q-line-shape from their classical
/// counterparts for each q, all on the quadrature paths.
pub fn classical_limit_study(r: &Resonance, q_sequence: &[f64], tol: f64) -> Result<LimitReport> {
    if let Some(q) = q_sequence.iter().find(|&&q| !(q > 1.0 && q < 3.0)) {
        return Err(Error::InvalidParameter(format!(
            "limit study needs 1 < q < 3, got {q}"
        )));
    }
    let norm_classical = gamow_norm_sq(r)?;
    let energy_classical = gamow_mean_energy(r);
    let rows = q_sequence
        .par_iter()
        .map(|&q| -> Result<LimitRow> {
            let s = QState::new(*r, q)?;
            let norm = q_norm_sq_quadrature(&s, tol)?.value;
            let energy = q_mean_energy_quadrature(&s, tol)?.value;
            Ok(LimitRow {
                q,
                norm,
                norm_classical,
                norm_deviation: rel_dev(norm, norm_classical),
                energy,
                energy_classical,
                energy_deviation: rel_dev(energy, energy_classical),
                breit_wigner_deviation: breit_wigner_deviation(&s, tol)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LimitReport {
        resonance: *r,
        rows,
    })
}

/// Report form of the limit study: a monotonicity entry per consecutive
/// pair and column (ratio of deviations against [`MONOTONE_SLACK`]), and
/// deviation bounds for rows inside the near-classical window.
pub fn classical_limit_report(
    r: &Resonance,
    q_sequence: &[f64],
    tols: &LimitTolerances,
) -> Result<ValidationReport> {
    let study = classical_limit_study(r, q_sequence, crate::quadrature::DEFAULT_TOL)?;
    Ok(limits_report(&study, tols))
}

pub fn limits_report(study: &LimitReport, tols: &LimitTolerances) -> ValidationReport {
    let mut report = ValidationReport::default();
    let columns: [(&str, fn(&LimitRow) -> (f64, f64, f64), f64); 3] = [
        (
            "norm",
            |r| (r.norm, r.norm_classical, r.norm_deviation),
            tols.norm,
        ),
        (
            "energy",
            |r| (r.energy, r.energy_classical, r.energy_deviation),
            tols.energy,
        ),
        (
            "breit_wigner",
            |r| (r.breit_wigner_deviation, 0.0, r.breit_wigner_deviation),
            tols.breit_wigner,
        ),
    ];
    for (name, pick, tol) in columns {
        for (i, row) in study.rows.iter().enumerate() {
            let (value, classical, dev) = pick(row);
            if row.q - 1.0 < NEAR_CLASSICAL {
                report.entries.push(ReportEntry::with_rel_diff(
                    format!("limit.{name}[q={}]", row.q),
                    value,
                    classical,
                    dev,
                    tol,
                ));
            }
            if i > 0 {
                let prev = pick(&study.rows[i - 1]).2;
                let ratio = if prev == 0.0 {
                    if dev == 0.0 {
                        0.0
                    } else {
                        f64::INFINITY
                    }
                } else {
                    dev / prev
                };
                report.entries.push(ReportEntry::with_rel_diff(
                    format!("limit.{name}.monotone[q={}]", row.q),
                    dev,
                    prev,
                    ratio,
                    MONOTONE_SLACK,
                ));
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn empty_sequence_is_vacuous() {
        let r = Resonance::unit(Complex64::new(1.0, -0.1)).unwrap();
        let rep = classical_limit_report(&r, &[], &LimitTolerances::default()).unwrap();
        assert!(rep.entries.is_empty());
        assert!(rep.all_pass());
    }

    #[test]
    fn rejects_q_outside_range() {
        let r = Resonance::unit(Complex64::new(1.0, -0.1)).unwrap();
        assert!(classical_limit_study(&r, &[1.2, 3.5], 1e-10).is_err());
    }

    #[test]
    fn grid_shape() {
        let r = Resonance::unit(Complex64::new(1.0, -0.1)).unwrap();
        let g = breit_wigner_grid(&r);
        assert_eq!(g.len(), 300);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[299], 2.0);
    }
}
