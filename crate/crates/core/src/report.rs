//! Check reports and sampled line shapes, shared with the command line.

use serde::Serialize;

/// One comparison. `pass` is exactly `rel_diff <= tol`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportEntry {
    pub check_id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub rel_diff: f64,
    pub tol: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ReportEntry {
    /// |lhs - rhs| / |rhs| (absolute difference when rhs = 0).
    pub fn compare(check_id: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        let diff = (lhs - rhs).abs();
        let rel = if rhs == 0.0 { diff } else { diff / rhs.abs() };
        Self::with_rel_diff(check_id, lhs, rhs, rel, tol)
    }

    pub fn with_rel_diff(
        check_id: impl Into<String>,
        lhs: f64,
        rhs: f64,
        rel_diff: f64,
        tol: f64,
    ) -> Self {
        ReportEntry {
            check_id: check_id.into(),
            lhs,
            rhs,
            rel_diff,
            tol,
            pass: rel_diff <= tol,
            note: None,
        }
    }

    /// A check that could not be evaluated at all.
    pub fn failed(check_id: impl Into<String>, tol: f64, reason: impl Into<String>) -> Self {
        ReportEntry {
            check_id: check_id.into(),
            lhs: f64::NAN,
            rhs: f64::NAN,
            rel_diff: f64::INFINITY,
            tol,
            pass: false,
            note: Some(reason.into()),
        }
    }
}

/// A place where a closed form disagrees with the integral it came from by
/// a measured factor. Errata never fail a run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Errata {
    pub check_id: String,
    pub measured_ratio: f64,
    pub note: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub entries: Vec<ReportEntry>,
    pub errata: Vec<Errata>,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.entries.extend(other.entries);
        self.errata.extend(other.errata);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveRow {
    pub k: f64,
    pub density_closed: Option<f64>,
    pub density_quadrature: Option<f64>,
    pub abs_diff: Option<f64>,
}

impl CurveRow {
    pub fn new(k: f64, closed: Option<f64>, quadrature: Option<f64>) -> Self {
        let abs_diff = match (closed, quadrature) {
            (Some(c), Some(q)) => Some((c - q).abs()),
            _ => None,
        };
        CurveRow {
            k,
            density_closed: closed,
            density_quadrature: quadrature,
            abs_diff,
        }
    }
}

/// A sampled (q-)Breit-Wigner line shape and the parameters that made it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralCurve {
    pub q: f64,
    pub p_re: f64,
    pub p_im: f64,
    pub hbar: f64,
    pub mass: f64,
    pub tol: f64,
    /// |closed| / |quadrature| used to rescale the closed column, when present.
    pub closed_scale: Option<f64>,
    pub rows: Vec<CurveRow>,
}

pub const CSV_HEADER: &str = "k,density_closed,density_quadrature,abs_diff";

impl SpectralCurve {
    /// Header plus one line per row; missing values are empty cells. Floats
    /// use the shortest representation that parses back to the same value.
    pub fn to_csv(&self) -> String {
        let cell = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let mut out = String::with_capacity(64 * (self.rows.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                r.k,
                cell(r.density_closed),
                cell(r.density_quadrature),
                cell(r.abs_diff)
            ));
        }
        out
    }

    /// Parses rows written by [`SpectralCurve::to_csv`].
    pub fn rows_from_csv(text: &str) -> Option<Vec<CurveRow>> {
        let mut lines = text.lines();
        if lines.next()? != CSV_HEADER {
            return None;
        }
        let parse = |s: &str| -> Option<Option<f64>> {
            if s.is_empty() {
                Some(None)
            } else {
                s.parse().ok().map(Some)
            }
        };
        lines
            .map(|line| {
                let cells: Vec<&str> = line.split(',').collect();
                if cells.len() != 4 {
                    return None;
                }
                Some(CurveRow {
                    k: cells[0].parse().ok()?,
                    density_closed: parse(cells[1])?,
                    density_quadrature: parse(cells[2])?,
                    abs_diff: parse(cells[3])?,
                })
            })
            .collect()
    }
}
