//! Deterministic CSV and JSON writers for every report the lab produces.
//!
//! All builders are pure string producers — identical inputs give identical
//! bytes (fixed column order, rows in input order, shortest round-trip float
//! formatting, no hash-map iteration anywhere) — so run outputs diff cleanly
//! across machines and reruns. [`write_files`] is the one thin filesystem
//! helper layered on top.
//!
//! Field slices use a gnuplot-friendly block layout: `x,t,value` rows grouped
//! by time slice with a blank line between slices (`set datafile separator
//! ","` then `splot ... with lines` renders them directly).

use std::path::Path;

use serde::Serialize;

use crate::carleson::{AdmissibilityReport, BmoReport, CarlesonReport};
use crate::error::{LabError, Result};
use crate::field::SolutionField;
use crate::kernels::BoundReport;
use crate::specfun::BesselOrder;

/// Shortest round-trip decimal for a float; infinities and NaN spelled out.
fn fmt(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else if x == x.trunc() && x.abs() < 1e15 {
        // Keep integers readable (256 not 256.0? — no: keep a decimal point
        // so CSV consumers type the column as float).
        format!("{x:.1}")
    } else {
        format!("{x}")
    }
}

/// `lambda,ratio_name,sup,argmax_x,argmax_y,argmax_t` rows for a batch of
/// kernel bound reports.
pub fn bound_reports_csv(reports: &[BoundReport]) -> String {
    let mut out = String::from("lambda,ratio_name,sup,argmax_x,argmax_y,argmax_t\n");
    for report in reports {
        for row in &report.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                fmt(report.lambda),
                row.ratio_name,
                fmt(row.sup),
                fmt(row.argmax_x),
                fmt(row.argmax_y),
                fmt(row.argmax_t)
            ));
        }
    }
    out
}

/// `left,len,mass,ratio` rows for one Carleson report (the JSON summary
/// carries the norm, argmax and flags).
pub fn carleson_report_csv(report: &CarlesonReport) -> String {
    let mut out = String::from("left,len,mass,ratio\n");
    for row in &report.rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt(row.cube.left),
            fmt(row.cube.len),
            fmt(row.mass),
            fmt(row.ratio)
        ));
    }
    out
}

/// `left,len,kind,value` rows for an odd-BMO report.
pub fn bmo_report_csv(report: &BmoReport) -> String {
    let mut out = String::from("left,len,kind,value\n");
    for row in &report.rows {
        let kind = match row.kind {
            crate::carleson::IntervalKind::Oscillation => "oscillation",
            crate::carleson::IntervalKind::Size => "size",
        };
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt(row.left),
            fmt(row.len),
            kind,
            fmt(row.value)
        ));
    }
    out
}

/// One calibration measurement of the mean-value normalization.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CalibrationRow {
    pub lambda: f64,
    pub radius: f64,
    pub calibrated: f64,
    pub oracle: f64,
}

/// `lambda,radius,calibrated,oracle,rel_error` rows.
pub fn calibration_csv(rows: &[CalibrationRow]) -> String {
    let mut out = String::from("lambda,radius,calibrated,oracle,rel_error\n");
    for row in rows {
        let rel = (row.calibrated - row.oracle).abs() / row.oracle.abs().max(f64::MIN_POSITIVE);
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt(row.lambda),
            fmt(row.radius),
            fmt(row.calibrated),
            fmt(row.oracle),
            fmt(rel)
        ));
    }
    out
}

/// Admissibility verdicts, one function per row:
/// `name,moment_weighted,moment_error,inverse_square_weighted,inverse_square_error,admissible`.
pub fn admissibility_csv(rows: &[(String, AdmissibilityReport)]) -> String {
    let mut out = String::from(
        "name,moment_weighted,moment_error,inverse_square_weighted,inverse_square_error,admissible\n",
    );
    for (name, report) in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            name,
            fmt(report.moment_weighted),
            fmt(report.moment_error),
            fmt(report.inverse_square_weighted),
            fmt(report.inverse_square_error),
            report.admissible()
        ));
    }
    out
}

/// The three sampled layers of a solution field as gnuplot-block CSVs, plus
/// a JSON sidecar describing the run: returns
/// `[(filename, contents); 4]` ready for [`write_files`].
pub fn solution_field_files(field: &SolutionField) -> Result<Vec<(String, String)>> {
    let layer = |value_at: &dyn Fn(usize, usize) -> f64, label: &str| -> String {
        let mut out = format!("# {label} for {}; blocks are time slices\nx,t,value\n", field.source_name());
        for (it, &t) in field.t_nodes().iter().enumerate() {
            for (ix, &x) in field.x_grid().nodes().iter().enumerate() {
                out.push_str(&format!("{},{},{}\n", fmt(x), fmt(t), fmt(value_at(it, ix))));
            }
            out.push('\n');
        }
        out
    };
    #[derive(Serialize)]
    struct Sidecar<'a> {
        source: &'a str,
        mode: String,
        lambda: f64,
        x_nodes: usize,
        t_nodes: usize,
        x_window: (f64, f64),
        t_window: (f64, f64),
        files: [&'a str; 3],
    }
    let xs = field.x_grid().nodes();
    let ts = field.t_nodes();
    let sidecar = Sidecar {
        source: field.source_name(),
        mode: format!("{:?}", field.mode()).to_lowercase(),
        lambda: field.order().lambda(),
        x_nodes: xs.len(),
        t_nodes: ts.len(),
        x_window: (xs[0], *xs.last().unwrap()),
        t_window: (ts[0], *ts.last().unwrap()),
        files: ["u.csv", "du_dt.csv", "dlambda_u.csv"],
    };
    Ok(vec![
        ("u.csv".to_string(), layer(&|it, ix| field.u_at(it, ix), "u(x,t)")),
        (
            "du_dt.csv".to_string(),
            layer(&|it, ix| field.du_dt_at(it, ix), "∂_t u(x,t)"),
        ),
        (
            "dlambda_u.csv".to_string(),
            layer(&|it, ix| field.dlambda_at(it, ix), "D_λ u(x,t)"),
        ),
        ("field.json".to_string(), to_json(&sidecar)?),
    ])
}

/// Pretty JSON for any serializable report (struct field order is the
/// declaration order, so the output is deterministic).
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map_err(|e| LabError::Config(format!("cannot serialize report: {e}")))
}

/// A machine-readable experiment verdict, used by the run and verify drivers.
#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    /// Measured value the verdict is based on (where meaningful).
    pub measured: f64,
    /// The band or threshold it was compared against.
    pub criterion: String,
}

/// `name,passed,measured,criterion` rows.
pub fn verdicts_csv(rows: &[Verdict]) -> String {
    let mut out = String::from("name,passed,measured,criterion\n");
    for v in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            v.name,
            v.passed,
            fmt(v.measured),
            v.criterion
        ));
    }
    out
}

/// Write `(relative name, contents)` pairs under `dir`, creating the
/// directory tree (names may contain subdirectories) as needed.
pub fn write_files(dir: impl AsRef<Path>, files: &[(String, String)]) -> Result<()> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)
        .map_err(|e| LabError::Config(format!("cannot create {}: {e}", dir.display())))?;
    for (name, contents) in files {
        let path = dir.join(name);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)
                .map_err(|e| LabError::Config(format!("cannot create {}: {e}", parent.display())))?;
        }
        std::fs::write(&path, contents)
            .map_err(|e| LabError::Config(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

/// Equivalence summary for one (order, function) cell: the three norms the
/// theory ties together plus the derived ratios the golden bands track.
#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceCell {
    pub lambda: f64,
    pub function: String,
    /// Squared odd-BMO norm estimate.
    pub bmo_sq: f64,
    /// Carleson norm of `|t ∇_λ u|² dx dt / t`.
    pub carleson_full: f64,
    /// Carleson norm of `|t ∂_t u|² dx dt / t`.
    pub carleson_time: f64,
    /// `carleson_full / bmo_sq` (the equivalence-constant probe).
    pub full_over_bmo: f64,
    /// `carleson_time / carleson_full` (vertical fraction, in (0, 1]).
    pub time_over_full: f64,
    pub bmo_divergent: bool,
    pub carleson_divergent: bool,
}

/// `lambda,function,bmo_sq,carleson_full,carleson_time,full_over_bmo,time_over_full,bmo_divergent,carleson_divergent`.
pub fn equivalence_csv(cells: &[EquivalenceCell]) -> String {
    let mut out = String::from(
        "lambda,function,bmo_sq,carleson_full,carleson_time,full_over_bmo,time_over_full,bmo_divergent,carleson_divergent\n",
    );
    for c in cells {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            fmt(c.lambda),
            c.function,
            fmt(c.bmo_sq),
            fmt(c.carleson_full),
            fmt(c.carleson_time),
            fmt(c.full_over_bmo),
            fmt(c.time_over_full),
            c.bmo_divergent,
            c.carleson_divergent
        ));
    }
    out
}

/// Convenience: the order's λ as the leading column value used throughout.
pub fn lambda_of(order: BesselOrder) -> f64 {
    order.lambda()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carleson::{carleson_norm, BoxFamily, Density};
    use crate::kernels::{kernel_bound_report, ProbeGrid};

    #[test]
    fn writers_are_deterministic_and_headered() {
        let family = BoxFamily::dyadic((-1, 1), (-1, 1)).unwrap();
        let density = Density::analytic("control", |_, t| t);
        let report = carleson_norm(&density, &family).unwrap();
        let a = carleson_report_csv(&report);
        let b = carleson_report_csv(&report);
        assert_eq!(a, b);
        assert!(a.starts_with("left,len,mass,ratio\n"));
        assert_eq!(a.lines().count(), 1 + report.rows.len());
        let json = to_json(&report).unwrap();
        assert!(json.contains("\"density_name\": \"control\""));
        assert!(json.contains("\"divergent\": true"));
    }

    #[test]
    fn float_formatting_round_trips() {
        for &x in &[0.1, 1.0 / 3.0, 256.0, 1e-13, 7.25e17, -4.0] {
            let s = fmt(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(fmt(f64::INFINITY), "inf");
        assert_eq!(fmt(2.0), "2.0");
    }

    #[test]
    fn bound_report_csv_has_one_row_per_ratio() {
        let order = BesselOrder::new(2.0).unwrap();
        let grid = ProbeGrid::logarithmic((0.5, 2.0), 3, (0.5, 2.0), 3, (0.5, 2.0), 3).unwrap();
        let report = kernel_bound_report(order, &grid).unwrap();
        let csv = bound_reports_csv(std::slice::from_ref(&report));
        assert_eq!(csv.lines().count(), 1 + 3);
        assert!(csv.contains("dt_weighted_power"));
    }
}
