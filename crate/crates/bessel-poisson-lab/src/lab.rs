//! Experiment drivers behind the `bpl` binary: [`run`] sweeps the configured
//! (order, function) matrix and writes a report tree; [`verify`] executes
//! named check suites against committed tolerances and the reference bands
//! stored alongside the tests.
//!
//! Both drivers return structured verdicts instead of panicking — the binary
//! maps `all_passed` onto its exit code, and every verdict carries the
//! measured value plus the criterion it was compared against.

use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use crate::carleson::{
    bmo_o_norm, carleson_norm, origin_scale_slope, weighted_l1_check, BoxFamily, Density,
};
use crate::catalog::entry;
use crate::config::ExperimentConfig;
use crate::error::{LabError, Result};
use crate::field::{
    extension_value, g_function_identity, FieldMode, SolutionField, Source,
};
use crate::geometry::{
    a_constant, calibrate_normalization, hyperbolic_distance, mean_value_check,
    normalization_oracle, random_balls, representation_kernel_mass, residual_convergence_order,
    subharmonic_check, HalfPlanePoint, HyperbolicBall, CIRCLE_NODES,
};
use crate::grid::{GridFunction, RadialGrid};
use crate::hankel::hankel_transform;
use crate::kernels::{kernel_bound_report, normalized_kernel_mass, poisson_kernel, ProbeGrid};
use crate::quadrature::TailPolicy;
use crate::report::{
    self, bmo_report_csv, bound_reports_csv, calibration_csv, carleson_report_csv,
    equivalence_csv, solution_field_files, to_json, verdicts_csv, CalibrationRow,
    EquivalenceCell, Verdict,
};
use crate::specfun::BesselOrder;

/// Reference equivalence measurements committed next to the tests; regenerate
/// with `cargo run --release --example carleson_equivalence` (see README).
const GOLDEN_EQUIVALENCE: &str = include_str!("../tests/golden/equivalence.csv");

/// Resolution of the verification fields (also the resolution the golden
/// equivalence bands were generated at — keep the two in lockstep).
pub const VERIFY_X_PANELS: usize = 24;
pub const VERIFY_X_PER_PANEL: usize = 4;
pub const VERIFY_T_NODES: usize = 48;

fn verdict(name: impl Into<String>, passed: bool, measured: f64, criterion: impl Into<String>) -> Verdict {
    Verdict {
        name: name.into(),
        passed,
        measured,
        criterion: criterion.into(),
    }
}

/// Outcome of a `run` sweep.
#[derive(Debug)]
pub struct RunOutcome {
    pub verdicts: Vec<Verdict>,
    pub files_written: usize,
    pub out_dir: PathBuf,
}

impl RunOutcome {
    pub fn all_passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }
}

/// Scale the grid resolution by `refine` (a drift-study knob, not a quality
/// setting — reports state the resolution they were computed at).
fn refined_config(config: &ExperimentConfig, refine: f64) -> Result<ExperimentConfig> {
    if !(0.1..=10.0).contains(&refine) {
        return Err(LabError::Config(format!(
            "refinement factor must lie in [0.1, 10], got {refine}"
        )));
    }
    let mut cfg = config.clone();
    cfg.grid.x_nodes = ((cfg.grid.x_nodes as f64 * refine).round() as usize).max(8);
    cfg.grid.t_nodes = ((cfg.grid.t_nodes as f64 * refine).round() as usize).max(8);
    cfg.validate()?;
    Ok(cfg)
}

/// Build the extension field, falling back to direct quadrature when the
/// spectral pipeline rejects the input (rough data or too-wide windows push
/// real energy into the guard octave). Returns the field and whether the
/// fallback engaged.
fn build_field_with_fallback(
    order: BesselOrder,
    src: &Source,
    x_grid: RadialGrid,
    t_nodes: Vec<f64>,
    mode: FieldMode,
) -> Result<(SolutionField, bool)> {
    match SolutionField::build(order, src, x_grid.clone(), t_nodes.clone(), mode) {
        Ok(field) => Ok((field, false)),
        Err(LabError::RejectedInput(_)) if mode == FieldMode::Spectral => {
            let field = SolutionField::build(order, src, x_grid, t_nodes, FieldMode::Direct)?;
            Ok((field, true))
        }
        Err(e) => Err(e),
    }
}

/// Sweep the configured (order, function) matrix: kernel bound reports,
/// mean-value calibration, admissibility verdicts, odd-BMO and Carleson
/// norms with their divergence flags checked against the catalog's expected
/// classification, and the sampled extension fields — all written as
/// deterministic CSV/JSON under `out_dir`.
pub fn run(config: &ExperimentConfig, out_dir: impl AsRef<Path>, refine: f64) -> Result<RunOutcome> {
    let cfg = refined_config(config, refine)?;
    let out_dir = out_dir.as_ref().to_path_buf();
    let orders = cfg.orders()?;
    let mode = cfg.field_mode()?;
    let family = cfg.box_family()?;
    let functions = cfg.resolved_functions()?;
    let mut files: Vec<(String, String)> = Vec::new();
    let mut verdicts: Vec<Verdict> = Vec::new();
    let mut cells: Vec<EquivalenceCell> = Vec::new();

    files.push(("config.toml".to_string(), cfg.to_toml_string()?));

    // Kernel bound sups, one report per order.
    let probe = ProbeGrid::default_probe();
    let mut bound_reports = Vec::new();
    for &order in &orders {
        let report = kernel_bound_report(order, &probe)?;
        let finite = report.rows.iter().all(|r| r.sup.is_finite() && r.sup > 0.0);
        let max_sup = report.rows.iter().map(|r| r.sup).fold(0.0f64, f64::max);
        verdicts.push(verdict(
            format!("kernel-bounds-finite-lambda-{}", order.lambda()),
            finite,
            max_sup,
            "all sup-ratios finite and positive over the probe grid",
        ));
        bound_reports.push(report);
    }
    files.push(("bounds.csv".to_string(), bound_reports_csv(&bound_reports)));

    // Mean-value normalization calibration.
    let mut calibration = Vec::new();
    for &order in &orders {
        let mut worst = 0.0f64;
        for &radius in &[0.5, 1.0] {
            let ball = HyperbolicBall::new(HalfPlanePoint::new(1.0, 0.0)?, radius)?;
            let calibrated = calibrate_normalization(order, &ball, CIRCLE_NODES)?;
            let oracle = normalization_oracle(order, radius)?;
            worst = worst.max((calibrated - oracle).abs() / oracle);
            calibration.push(CalibrationRow {
                lambda: order.lambda(),
                radius,
                calibrated,
                oracle,
            });
        }
        verdicts.push(verdict(
            format!("mean-value-normalization-lambda-{}", order.lambda()),
            worst <= cfg.tolerances.radial_mean_rel,
            worst,
            format!("calibrated vs closed form ≤ {}", cfg.tolerances.radial_mean_rel),
        ));
    }
    files.push(("calibration.csv".to_string(), calibration_csv(&calibration)));

    for &order in &orders {
        let lambda = order.lambda();
        let lambda_dir = format!("lambda_{lambda}");

        // Admissibility of every boundary function in this run.
        let mut admissibility = Vec::new();
        for name in &functions {
            let e = entry(order, name)?;
            if e.boundary_fn().is_err() {
                continue;
            }
            let src = Source::from_catalog(&e)?;
            let report = weighted_l1_check(order, &src)?;
            verdicts.push(verdict(
                format!("admissible-lambda-{lambda}-{name}"),
                report.admissible(),
                report.inverse_square_weighted,
                "both weighted-L¹ integrals converge",
            ));
            admissibility.push((name.clone(), report));
        }
        if !admissibility.is_empty() {
            files.push((
                format!("{lambda_dir}/admissibility.csv"),
                report::admissibility_csv(&admissibility),
            ));
        }

        for name in &functions {
            let e = entry(order, name)?;
            let subdir = format!("{lambda_dir}/{name}");

            if let Ok(density) = Density::from_control_entry(&e) {
                // Control density: box sweep only.
                let report = carleson_norm(&density, &family)?;
                files.push((format!("{subdir}/carleson.csv"), carleson_report_csv(&report)));
                files.push((format!("{subdir}/carleson.json"), to_json(&report)?));
                let slope = origin_scale_slope(&report)?;
                verdicts.push(verdict(
                    format!("control-scale-slope-lambda-{lambda}-{name}"),
                    (slope - 1.0).abs() <= cfg.tolerances.control_slope_band,
                    slope,
                    format!("origin scale slope within {} of 1", cfg.tolerances.control_slope_band),
                ));
                verdicts.push(verdict(
                    format!("carleson-flag-lambda-{lambda}-{name}"),
                    report.divergent != e.expected_carleson,
                    report.norm,
                    "divergence flag matches the expected classification",
                ));
                continue;
            }

            let src = Source::from_catalog(&e)?;

            let bmo = bmo_o_norm(&src, &family)?;
            files.push((format!("{subdir}/bmo.csv"), bmo_report_csv(&bmo)));
            files.push((format!("{subdir}/bmo.json"), to_json(&bmo)?));
            verdicts.push(verdict(
                format!("bmo-flag-lambda-{lambda}-{name}"),
                bmo.divergent != e.expected_bmo_o,
                bmo.norm,
                "odd-BMO divergence flag matches the expected classification",
            ));

            let (field, fell_back) =
                build_field_with_fallback(order, &src, cfg.x_grid()?, cfg.t_nodes_vec()?, mode)?;
            if fell_back {
                verdicts.push(verdict(
                    format!("spectral-fallback-lambda-{lambda}-{name}"),
                    true,
                    f64::NAN,
                    "spectral pipeline rejected the input; field computed by direct quadrature",
                ));
            }
            files.extend(
                solution_field_files(&field)?
                    .into_iter()
                    .map(|(f, c)| (format!("{subdir}/{f}"), c)),
            );

            let full = carleson_norm(&Density::gradient(&field), &family)?;
            let time = carleson_norm(&Density::time_derivative(&field), &family)?;
            files.push((format!("{subdir}/carleson_full.csv"), carleson_report_csv(&full)));
            files.push((format!("{subdir}/carleson_full.json"), to_json(&full)?));
            files.push((format!("{subdir}/carleson_time.csv"), carleson_report_csv(&time)));
            files.push((format!("{subdir}/carleson_time.json"), to_json(&time)?));
            verdicts.push(verdict(
                format!("vertical-below-gradient-lambda-{lambda}-{name}"),
                time.norm <= full.norm + 1e-10,
                time.norm / full.norm,
                "time-derivative Carleson norm ≤ gradient Carleson norm",
            ));
            verdicts.push(verdict(
                format!("carleson-flag-lambda-{lambda}-{name}"),
                full.divergent != e.expected_carleson,
                full.norm,
                "divergence flag matches the expected classification",
            ));

            let bmo_sq = bmo.norm * bmo.norm;
            cells.push(EquivalenceCell {
                lambda,
                function: name.clone(),
                bmo_sq,
                carleson_full: full.norm,
                carleson_time: time.norm,
                full_over_bmo: full.norm / bmo_sq,
                time_over_full: time.norm / full.norm,
                bmo_divergent: bmo.divergent,
                carleson_divergent: full.divergent,
            });
        }
    }

    files.push(("equivalence.csv".to_string(), equivalence_csv(&cells)));
    files.push(("verdicts.csv".to_string(), verdicts_csv(&verdicts)));
    #[derive(serde::Serialize)]
    struct Summary<'a> {
        all_passed: bool,
        verdicts: usize,
        failed: Vec<&'a str>,
        mode: String,
        refine: f64,
    }
    let summary = Summary {
        all_passed: verdicts.iter().all(|v| v.passed),
        verdicts: verdicts.len(),
        failed: verdicts.iter().filter(|v| !v.passed).map(|v| v.name.as_str()).collect(),
        mode: cfg.mode.clone(),
        refine,
    };
    files.push(("summary.json".to_string(), to_json(&summary)?));

    report::write_files(&out_dir, &files)?;
    Ok(RunOutcome {
        verdicts,
        files_written: files.len(),
        out_dir,
    })
}

/// The named check suites of `verify`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Kernels,
    Hankel,
    GFunction,
    Carleson,
    Geometry,
    All,
}

impl FromStr for Suite {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "kernels" => Ok(Suite::Kernels),
            "hankel" => Ok(Suite::Hankel),
            "gfunction" | "g-function" => Ok(Suite::GFunction),
            "carleson" => Ok(Suite::Carleson),
            "geometry" => Ok(Suite::Geometry),
            "all" => Ok(Suite::All),
            other => Err(LabError::Config(format!(
                "unknown suite {other:?}; expected kernels, hankel, gfunction, carleson, geometry or all"
            ))),
        }
    }
}

impl std::fmt::Display for Suite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Suite::Kernels => "kernels",
            Suite::Hankel => "hankel",
            Suite::GFunction => "gfunction",
            Suite::Carleson => "carleson",
            Suite::Geometry => "geometry",
            Suite::All => "all",
        };
        write!(f, "{name}")
    }
}

/// Outcome of a `verify` invocation.
#[derive(Debug, serde::Serialize)]
pub struct VerifySummary {
    pub suite: String,
    pub verdicts: Vec<Verdict>,
    pub all_passed: bool,
    pub elapsed_secs: f64,
}

/// Run one suite (or all of them) and summarize.
pub fn verify(suite: Suite, config: &ExperimentConfig) -> Result<VerifySummary> {
    let start = Instant::now();
    let mut verdicts = Vec::new();
    let suites: Vec<Suite> = match suite {
        Suite::All => vec![
            Suite::Kernels,
            Suite::Hankel,
            Suite::GFunction,
            Suite::Carleson,
            Suite::Geometry,
        ],
        s => vec![s],
    };
    for s in suites {
        match s {
            Suite::Kernels => verdicts.extend(suite_kernels()?),
            Suite::Hankel => verdicts.extend(suite_hankel()?),
            Suite::GFunction => verdicts.extend(suite_gfunction()?),
            Suite::Carleson => verdicts.extend(suite_carleson(config)?),
            Suite::Geometry => verdicts.extend(suite_geometry(config)?),
            Suite::All => unreachable!(),
        }
    }
    Ok(VerifySummary {
        suite: suite.to_string(),
        all_passed: verdicts.iter().all(|v| v.passed),
        verdicts,
        elapsed_secs: start.elapsed().as_secs_f64(),
    })
}

/// Kernel checks: the weighted moment identity, scale covariance and
/// bound-sup stability under probe refinement.
fn suite_kernels() -> Result<Vec<Verdict>> {
    let mut out = Vec::new();

    let mut worst = 0.0f64;
    for &lambda in &[1.2, 2.0, 3.5] {
        let order = BesselOrder::new(lambda)?;
        for &x in &[0.3, 1.0, 5.0] {
            for &t in &[0.1, 1.0, 10.0] {
                worst = worst.max((normalized_kernel_mass(order, x, t)? - 1.0).abs());
            }
        }
    }
    out.push(verdict(
        "kernel-moment-identity",
        worst <= 1e-6,
        worst,
        "x^{-λ} ∫ P y^λ dy = 1 to 1e-6 over the 3×3×3 probe",
    ));

    let mut worst = 0.0f64;
    for &lambda in &[1.2, 2.0, 3.5] {
        let order = BesselOrder::new(lambda)?;
        let (x, y, t, s) = (1.3, 0.8, 0.6, 3.7);
        let base = poisson_kernel(order, x, y, t)?;
        let scaled = s * poisson_kernel(order, s * x, s * y, s * t)?;
        worst = worst.max((scaled - base).abs() / base.abs());
    }
    out.push(verdict(
        "kernel-scale-covariance",
        worst <= 1e-9,
        worst,
        "s P^λ_{st}(sx, sy) = P^λ_t(x, y) to 1e-9",
    ));

    for &lambda in &[1.2, 2.0, 3.5] {
        let order = BesselOrder::new(lambda)?;
        let coarse = kernel_bound_report(order, &ProbeGrid::default_probe())?;
        let fine = kernel_bound_report(order, &ProbeGrid::default_probe().refined_double())?;
        let mut drift = 0.0f64;
        let mut finite = true;
        for (a, b) in coarse.rows.iter().zip(&fine.rows) {
            finite &= a.sup.is_finite() && b.sup.is_finite() && a.sup > 0.0;
            drift = drift.max((b.sup - a.sup).abs() / a.sup);
        }
        out.push(verdict(
            format!("kernel-bound-sup-stability-lambda-{lambda}"),
            finite && drift <= 0.05,
            drift,
            "sups finite; doubling the probe grid moves them ≤ 5%",
        ));
    }
    Ok(out)
}

/// Hankel checks: the transform is an isometry at production size and fixes
/// its eigenfunction.
fn suite_hankel() -> Result<Vec<Verdict>> {
    let mut out = Vec::new();
    for &lambda in &[1.2, 2.0] {
        let order = BesselOrder::new(lambda)?;
        let grid = RadialGrid::gauss_panels(0.0, 12.0, 128, 8)?; // N = 1024
        let f = GridFunction::sample(
            grid,
            |y| y.powf(lambda) * (-0.5 * y * y).exp() * (1.0 + 0.5 * y.cos()),
            TailPolicy::truncate_at(12.0),
        )?;
        let xi = RadialGrid::gauss_panels(0.0, 40.0, 160, 8)?;
        let clock = Instant::now();
        let transformed = hankel_transform(order, &f, &xi)?;
        let elapsed = clock.elapsed().as_secs_f64();
        let iso = (transformed.norm_l2() - f.norm_l2()).abs() / f.norm_l2();
        out.push(verdict(
            format!("hankel-isometry-lambda-{lambda}"),
            iso <= 1e-6 && elapsed < 10.0,
            iso,
            format!("‖h f‖ = ‖f‖ to 1e-6 at N=1024 in under 10 s (took {elapsed:.2} s)"),
        ));

        let eigen_grid = RadialGrid::gauss_panels(0.0, 12.0, 96, 8)?;
        let eigen = GridFunction::sample(
            eigen_grid.clone(),
            |y| y.powf(lambda) * (-0.5 * y * y).exp(),
            TailPolicy::truncate_at(12.0),
        )?;
        let back = hankel_transform(order, &eigen, &eigen_grid)?;
        let dev = back.max_abs_difference(&eigen)?;
        out.push(verdict(
            format!("hankel-fixed-point-lambda-{lambda}"),
            dev <= 1e-8,
            dev,
            "y^λ e^{-y²/2} is a fixed point to 1e-8",
        ));
    }
    Ok(out)
}

/// Littlewood–Paley check: the time-derivative square function carries
/// exactly a quarter of the input energy.
fn suite_gfunction() -> Result<Vec<Verdict>> {
    let mut out = Vec::new();
    for &lambda in &[1.2, 2.0] {
        let order = BesselOrder::new(lambda)?;
        let grid = RadialGrid::gauss_panels(0.0, 12.0, 96, 8)?;
        let f = GridFunction::sample(
            grid,
            |y| y.powf(lambda) * (-0.5 * y * y).exp(),
            TailPolicy::truncate_at(12.0),
        )?;
        let report = g_function_identity(order, &f)?;
        let dev = (report.ratio() - 0.25).abs() / 0.25;
        out.push(verdict(
            format!("g-function-quarter-lambda-{lambda}"),
            dev <= 1e-3,
            report.ratio(),
            "∫ ‖t ∂_t u‖² dt/t = ‖f‖²/4 to 1e-3 relative",
        ));
    }
    Ok(out)
}

/// The verification grid for extension fields (kept in lockstep with the
/// committed equivalence bands).
pub fn verify_field_grid() -> Result<(RadialGrid, Vec<f64>)> {
    Ok((
        RadialGrid::gauss_log_panels(1e-2, 1e2, VERIFY_X_PANELS, VERIFY_X_PER_PANEL)?,
        crate::grid::geometric_nodes(1e-2, 20.0, VERIFY_T_NODES)?,
    ))
}

/// Measure the equivalence cells the golden bands track: odd-BMO squared
/// norm and both Carleson norms for the indicator and the bump, at
/// λ ∈ {1.2, 2}, on the verification grid.
pub fn equivalence_reference_cells() -> Result<Vec<EquivalenceCell>> {
    let family = BoxFamily::standard();
    let mut cells = Vec::new();
    for &lambda in &[1.2, 2.0] {
        let order = BesselOrder::new(lambda)?;
        for name in ["chi_12", "bump"] {
            let e = entry(order, name)?;
            let src = Source::from_catalog(&e)?;
            let bmo = bmo_o_norm(&src, &family)?;
            let (x_grid, t_nodes) = verify_field_grid()?;
            let field = SolutionField::build(order, &src, x_grid, t_nodes, FieldMode::Direct)?;
            let full = carleson_norm(&Density::gradient(&field), &family)?;
            let time = carleson_norm(&Density::time_derivative(&field), &family)?;
            let bmo_sq = bmo.norm * bmo.norm;
            cells.push(EquivalenceCell {
                lambda,
                function: name.to_string(),
                bmo_sq,
                carleson_full: full.norm,
                carleson_time: time.norm,
                full_over_bmo: full.norm / bmo_sq,
                time_over_full: time.norm / full.norm,
                bmo_divergent: bmo.divergent,
                carleson_divergent: full.divergent,
            });
        }
    }
    Ok(cells)
}

fn parse_golden() -> Vec<(f64, String, f64, f64, f64)> {
    GOLDEN_EQUIVALENCE
        .lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .filter_map(|line| {
            let parts: Vec<&str> = line.split(',').collect();
            if parts.len() < 5 {
                return None;
            }
            Some((
                parts[0].parse().ok()?,
                parts[1].to_string(),
                parts[2].parse().ok()?,
                parts[3].parse().ok()?,
                parts[4].parse().ok()?,
            ))
        })
        .collect()
}

/// Carleson/BMO checks: equivalence cells against the committed bands, the
/// vertical-vs-gradient domination, the Lebesgue control slope and the
/// logarithmic-growth classification.
fn suite_carleson(config: &ExperimentConfig) -> Result<Vec<Verdict>> {
    let tols = &config.tolerances;
    let mut out = Vec::new();
    let golden = parse_golden();
    let cells = equivalence_reference_cells()?;

    for cell in &cells {
        out.push(verdict(
            format!("vertical-below-gradient-lambda-{}-{}", cell.lambda, cell.function),
            cell.carleson_time <= cell.carleson_full + 1e-10,
            cell.time_over_full,
            "time-derivative Carleson norm ≤ gradient Carleson norm",
        ));
        out.push(verdict(
            format!("carleson-classification-lambda-{}-{}", cell.lambda, cell.function),
            !cell.bmo_divergent && !cell.carleson_divergent,
            cell.carleson_full,
            "indicator and bump are BMO/Carleson class (no divergence flags)",
        ));
        let reference = golden
            .iter()
            .find(|(l, f, ..)| (*l - cell.lambda).abs() < 1e-12 && f == &cell.function);
        match reference {
            Some(&(_, _, g_bmo, g_full, g_time)) => {
                let drift = [
                    (cell.bmo_sq, g_bmo),
                    (cell.carleson_full, g_full),
                    (cell.carleson_time, g_time),
                ]
                .iter()
                .map(|&(m, g)| (m - g).abs() / g.abs())
                .fold(0.0f64, f64::max);
                out.push(verdict(
                    format!("equivalence-band-lambda-{}-{}", cell.lambda, cell.function),
                    drift <= tols.equivalence_band,
                    drift,
                    format!("norms within {} of the committed reference", tols.equivalence_band),
                ));
            }
            None => out.push(verdict(
                format!("equivalence-band-lambda-{}-{}", cell.lambda, cell.function),
                false,
                f64::NAN,
                "committed reference row missing; regenerate the golden file",
            )),
        }
    }

    // Lebesgue control measure: scale slope 1.
    let order = BesselOrder::new(2.0)?;
    let control = entry(order, "lebesgue_control")?;
    let density = Density::from_control_entry(&control)?;
    let family = BoxFamily::standard();
    let control_report = carleson_norm(&density, &family)?;
    let slope = origin_scale_slope(&control_report)?;
    out.push(verdict(
        "lebesgue-control-slope",
        (slope - 1.0).abs() <= tols.control_slope_band,
        slope,
        format!("origin scale slope within {} of 1", tols.control_slope_band),
    ));
    out.push(verdict(
        "lebesgue-control-flagged",
        control_report.divergent,
        control_report.norm,
        "the control measure is not Carleson: the divergence flag must trip",
    ));

    // Logarithmic growth: flagged by the size condition, and the size column
    // actually grows like ln² (√size regresses linearly on ln(e+b)).
    let log_entry = entry(order, "log_growth")?;
    let log_src = Source::from_catalog(&log_entry)?;
    let log_bmo = bmo_o_norm(&log_src, &family)?;
    out.push(verdict(
        "log-growth-flagged",
        log_bmo.divergent,
        log_bmo.size_sup,
        "logarithmic growth must trip the origin size condition",
    ));
    let mut pts: Vec<(f64, f64)> = log_bmo
        .rows
        .iter()
        .filter(|r| r.kind == crate::carleson::IntervalKind::Size && r.len >= 1.0)
        .map(|r| ((std::f64::consts::E + r.len).ln(), r.value.sqrt()))
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let n = pts.len() as f64;
    let (sx, sy): (f64, f64) = pts.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let (num, den) = pts.iter().fold((0.0, 0.0), |(num, den), &(x, y)| {
        (num + (x - mx) * (y - my), den + (x - mx) * (x - mx))
    });
    let (a, b) = (num / den, my - num / den * mx);
    let worst_fit = pts
        .iter()
        .map(|&(x, y)| ((a * x + b - y) / y).abs())
        .fold(0.0f64, f64::max);
    out.push(verdict(
        "log-growth-ln2-fit",
        worst_fit <= 0.10,
        worst_fit,
        "√size is linear in ln(e+b) to 10% over lengths ≥ 1",
    ));
    Ok(out)
}

/// Geometry checks: representation constants, mean-value identity on radial
/// solutions and Poisson slices, λ-harmonicity residual orders and the
/// randomized subharmonicity probe.
fn suite_geometry(config: &ExperimentConfig) -> Result<Vec<Verdict>> {
    let tols = &config.tolerances;
    let mut out = Vec::new();

    let mut worst = 0.0f64;
    for &lambda in &[1.2, 2.0, 3.5] {
        let order = BesselOrder::new(lambda)?;
        let a = a_constant(order)?;
        for &(x, t) in &[(0.5, 0.0), (2.0, -3.0)] {
            let mass = representation_kernel_mass(order, x, t)?;
            worst = worst.max((mass - a).abs() / a);
        }
    }
    out.push(verdict(
        "representation-kernel-mass",
        worst <= 1e-8,
        worst,
        "∫ K_x(t,·) = A_λ to 1e-8 at every probe",
    ));

    let mut worst = 0.0f64;
    for &lambda in &[1.2, 2.0] {
        let order = BesselOrder::new(lambda)?;
        for &radius in &[0.5, 1.0] {
            let ball = HyperbolicBall::new(HalfPlanePoint::new(1.7, -3.0)?, radius)?;
            let calibrated = calibrate_normalization(order, &ball, CIRCLE_NODES)?;
            let oracle = normalization_oracle(order, radius)?;
            worst = worst.max((calibrated - oracle).abs() / oracle);
        }
    }
    out.push(verdict(
        "normalization-vs-legendre",
        worst <= 1e-8,
        worst,
        "calibrated N(λ, r) = π P_{λ-1}(cosh r) to 1e-8",
    ));

    let mut worst = 0.0f64;
    for &lambda in &[1.2, 2.0] {
        let order = BesselOrder::new(lambda)?;
        let ball = HyperbolicBall::new(HalfPlanePoint::new(1.7, -3.0)?, 0.8)?;
        let report = mean_value_check(
            order,
            &ball,
            |p: HalfPlanePoint| p.x.powf(1.0 - lambda),
            CIRCLE_NODES,
        )?;
        worst = worst.max(report.rel_error());
    }
    out.push(verdict(
        "mean-value-radial",
        worst <= tols.radial_mean_rel,
        worst,
        format!("x^{{1-λ}} mean value to {}", tols.radial_mean_rel),
    ));

    let order = BesselOrder::new(2.0)?;
    let chi = Source::from_catalog(&entry(order, "chi_12")?)?;
    let ball = HyperbolicBall::new(HalfPlanePoint::new(1.3, 0.9)?, 0.5)?;
    let slice_report = mean_value_check(
        order,
        &ball,
        |p: HalfPlanePoint| extension_value(order, &chi, p.x, p.t).unwrap_or(f64::NAN),
        96,
    )?;
    out.push(verdict(
        "mean-value-poisson-slice",
        slice_report.rel_error() <= tols.slice_mean_rel,
        slice_report.rel_error(),
        format!("Poisson slice mean value to {}", tols.slice_mean_rel),
    ));

    let steps = [0.2, 0.1, 0.05, 0.025];
    let o35 = BesselOrder::new(3.5)?;
    let s1 = residual_convergence_order(o35, |x: f64, _| x.powf(3.5), HalfPlanePoint::new(1.4, 0.3)?, &steps)?;
    let s2 = residual_convergence_order(order, |x: f64, _| 1.0 / x, HalfPlanePoint::new(0.7, -2.0)?, &steps)?;
    let s3 = residual_convergence_order(
        order,
        |x: f64, t: f64| extension_value(order, &chi, x, t).unwrap_or(f64::NAN),
        HalfPlanePoint::new(1.5, 0.8)?,
        &[0.4, 0.2, 0.1, 0.05],
    )?;
    let min_slope = s1.min(s2).min(s3);
    out.push(verdict(
        "weinstein-residual-order",
        min_slope >= 1.8,
        min_slope,
        "second differences of λ-harmonic functions converge at order ≥ 1.8",
    ));

    let balls = random_balls(config.seed, 20, (0.4, 3.0), (-2.0, 2.0), (0.2, 1.2), None)?;
    let sub = subharmonic_check(
        order,
        |p: HalfPlanePoint| 2.0 * p.x * p.x - 3.0 / p.x,
        &balls,
        8,
        96,
        1e-6,
    )?;
    out.push(verdict(
        "subharmonicity-radial",
        sub.violations == 0,
        sub.worst_gap,
        format!("|u| vs ball mean on {} seeded disks, tolerance 1e-6", sub.disks),
    ));

    let bump = Source::from_catalog(&entry(order, "bump")?)?;
    let slice_balls = random_balls(config.seed ^ 0x9E37, 8, (0.8, 1.8), (1.0, 2.0), (0.2, 0.4), Some(0.05))?;
    let sub_slice = subharmonic_check(
        order,
        |p: HalfPlanePoint| extension_value(order, &bump, p.x, p.t).unwrap_or(f64::NAN),
        &slice_balls,
        6,
        48,
        1e-6,
    )?;
    out.push(verdict(
        "subharmonicity-poisson-slice",
        sub_slice.violations == 0,
        sub_slice.worst_gap,
        format!("|P_t f| vs ball mean on {} seeded disks, tolerance 1e-6", sub_slice.disks),
    ));

    // Anchor: distances are symmetric (cheap structural invariant kept here
    // so a geometry regression cannot slip through a suite run unnoticed).
    let p = HalfPlanePoint::new(0.9, 1.4)?;
    let q = HalfPlanePoint::new(2.2, -0.3)?;
    let sym = (hyperbolic_distance(p, q) - hyperbolic_distance(q, p)).abs();
    out.push(verdict(
        "hyperbolic-distance-symmetric",
        sym <= 1e-15,
        sym,
        "d(p, q) = d(q, p)",
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_parse_from_names() {
        assert_eq!(Suite::from_str("kernels").unwrap(), Suite::Kernels);
        assert_eq!(Suite::from_str("g-function").unwrap(), Suite::GFunction);
        assert_eq!(Suite::from_str("ALL").unwrap(), Suite::All);
        assert!(Suite::from_str("everything").is_err());
    }

    #[test]
    fn refinement_scales_the_grid() {
        let config = ExperimentConfig::default();
        let finer = refined_config(&config, 2.0).unwrap();
        assert_eq!(finer.grid.x_nodes, 512);
        assert_eq!(finer.grid.t_nodes, 256);
        assert!(refined_config(&config, 100.0).is_err());
    }

    #[test]
    fn run_writes_a_small_deterministic_tree() {
        let config = ExperimentConfig::from_toml_str(
            r#"
lambdas = [2.0]
functions = ["chi_12", "lebesgue_control"]
[grid]
x_nodes = 32
t_nodes = 16
t_max = 10.0
[boxes]
offset_min = -2
offset_max = 2
length_min = -2
length_max = 3
"#,
        )
        .unwrap();
        let dir = std::env::temp_dir().join("bpl-lab-run-test");
        let _ = std::fs::remove_dir_all(&dir);
        let outcome = run(&config, &dir, 1.0).unwrap();
        assert!(outcome.files_written >= 8);
        for file in [
            "config.toml",
            "bounds.csv",
            "calibration.csv",
            "equivalence.csv",
            "verdicts.csv",
            "summary.json",
            "lambda_2/admissibility.csv",
            "lambda_2/chi_12/u.csv",
            "lambda_2/chi_12/carleson_full.csv",
            "lambda_2/lebesgue_control/carleson.json",
        ] {
            assert!(dir.join(file).is_file(), "missing {file}");
        }
        // The sweep itself must pass on an in-class function plus the
        // control measure.
        assert!(
            outcome.all_passed(),
            "failed verdicts: {:?}",
            outcome
                .verdicts
                .iter()
                .filter(|v| !v.passed)
                .map(|v| &v.name)
                .collect::<Vec<_>>()
        );
        let _ = std::fs::remove_dir_all(&dir);
    }

    #[test]
    fn fast_suites_pass() {
        let config = ExperimentConfig::default();
        let summary = verify(Suite::GFunction, &config).unwrap();
        assert!(summary.all_passed, "{:?}", summary.verdicts);
        assert_eq!(summary.suite, "gfunction");
    }
}
