//! Command-line front end for the Bessel–Poisson laboratory.
//!
//! Subcommands:
//!
//! * `run` — sweep the configured (order, function) matrix and write a
//!   CSV/JSON report tree;
//! * `verify` — execute a named check suite (`kernels`, `hankel`,
//!   `gfunction`, `carleson`, `geometry` or `all`) against committed
//!   tolerances and reference bands;
//! * `kernel-probe` — print the kernel bound sup-ratio report;
//! * `meanvalue` — calibrate the mean-value normalization against its
//!   closed form and check the identity on radial solutions;
//! * `report` — summarize the verdicts of an existing report tree.
//!
//! Exit code 0 means every verdict passed, 1 means at least one failed,
//! 2 means the invocation itself errored. `BPL_THREADS` caps the worker
//! pool.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use bessel_poisson_lab::config::ExperimentConfig;
use bessel_poisson_lab::geometry::{
    calibrate_normalization, mean_value_check, normalization_oracle, HalfPlanePoint,
    HyperbolicBall, CIRCLE_NODES,
};
use bessel_poisson_lab::kernels::{kernel_bound_report, ProbeGrid};
use bessel_poisson_lab::lab::{run, verify, Suite};
use bessel_poisson_lab::report::{
    bound_reports_csv, calibration_csv, to_json, verdicts_csv, write_files, CalibrationRow,
    Verdict,
};
use bessel_poisson_lab::{init_parallelism, LabError, Result};

#[derive(Parser)]
#[command(
    name = "bpl",
    version,
    about = "Numerical laboratory for the Bessel-Poisson semigroup on the half-line"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured experiment sweep and write a report tree.
    Run {
        /// Experiment configuration (TOML); defaults to config/experiment.toml
        /// when present, built-in defaults otherwise.
        #[arg(long, value_name = "path")]
        config: Option<PathBuf>,
        /// Output directory for the report tree.
        #[arg(long, value_name = "dir", default_value = "out")]
        out: PathBuf,
        /// Grid refinement factor for drift studies (scales node counts).
        #[arg(long, value_name = "factor", default_value_t = 1.0)]
        refine: f64,
        /// Override the configured random seed.
        #[arg(long, value_name = "int")]
        seed: Option<u64>,
    },
    /// Execute a verification suite against committed tolerances.
    Verify {
        /// Suite name: kernels, hankel, gfunction, carleson, geometry or all.
        #[arg(long, value_name = "name", default_value = "all")]
        suite: String,
        /// Experiment configuration (tolerances and seed are read from it).
        #[arg(long, value_name = "path")]
        config: Option<PathBuf>,
        /// If given, write verify.json and verdicts.csv here.
        #[arg(long, value_name = "dir")]
        out: Option<PathBuf>,
        /// Override the configured random seed.
        #[arg(long, value_name = "int")]
        seed: Option<u64>,
    },
    /// Probe the kernel bound sup-ratios and print the CSV report.
    KernelProbe {
        /// Experiment configuration (provides the list of orders λ).
        #[arg(long, value_name = "path")]
        config: Option<PathBuf>,
        /// If given, write bounds.csv here instead of printing.
        #[arg(long, value_name = "dir")]
        out: Option<PathBuf>,
        /// Probe refinement: every doubling of the factor doubles each axis.
        #[arg(long, value_name = "factor", default_value_t = 1.0)]
        refine: f64,
    },
    /// Calibrate the mean-value normalization and check the identity.
    Meanvalue {
        /// Experiment configuration (provides the list of orders λ).
        #[arg(long, value_name = "path")]
        config: Option<PathBuf>,
        /// If given, write calibration.csv and verdicts.csv here.
        #[arg(long, value_name = "dir")]
        out: Option<PathBuf>,
        /// Override the configured random seed (reserved for probe layouts).
        #[arg(long, value_name = "int")]
        seed: Option<u64>,
    },
    /// Summarize the verdicts of an existing report tree.
    Report {
        /// Report tree produced by `bpl run` or `bpl verify --out`.
        #[arg(long, value_name = "dir", default_value = "out")]
        out: PathBuf,
    },
}

/// Load the experiment configuration: explicit path, else the committed
/// `config/experiment.toml` when present, else built-in defaults.
fn load_config(path: Option<&PathBuf>, seed: Option<u64>) -> Result<ExperimentConfig> {
    let mut cfg = match path {
        Some(p) => ExperimentConfig::from_path(p)?,
        None => {
            let committed = PathBuf::from("config/experiment.toml");
            if committed.is_file() {
                ExperimentConfig::from_path(&committed)?
            } else {
                ExperimentConfig::default()
            }
        }
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn print_verdicts(verdicts: &[Verdict]) {
    for v in verdicts {
        let status = if v.passed { "PASS" } else { "FAIL" };
        println!("{status}  {:<44} measured {:<12.6e} ({})", v.name, v.measured, v.criterion);
    }
}

fn cmd_run(config: Option<&PathBuf>, out: &PathBuf, refine: f64, seed: Option<u64>) -> Result<bool> {
    let cfg = load_config(config, seed)?;
    let outcome = run(&cfg, out, refine)?;
    print_verdicts(&outcome.verdicts);
    println!(
        "wrote {} files under {}",
        outcome.files_written,
        outcome.out_dir.display()
    );
    Ok(outcome.all_passed())
}

fn cmd_verify(
    suite: &str,
    config: Option<&PathBuf>,
    out: Option<&PathBuf>,
    seed: Option<u64>,
) -> Result<bool> {
    let suite: Suite = suite.parse()?;
    let cfg = load_config(config, seed)?;
    let summary = verify(suite, &cfg)?;
    print_verdicts(&summary.verdicts);
    println!(
        "suite {}: {} verdicts, {} in {:.1} s",
        summary.suite,
        summary.verdicts.len(),
        if summary.all_passed { "all passed" } else { "FAILURES" },
        summary.elapsed_secs
    );
    if let Some(dir) = out {
        write_files(
            dir,
            &[
                ("verify.json".to_string(), to_json(&summary)?),
                ("verdicts.csv".to_string(), verdicts_csv(&summary.verdicts)),
            ],
        )?;
    }
    Ok(summary.all_passed)
}

fn cmd_kernel_probe(config: Option<&PathBuf>, out: Option<&PathBuf>, refine: f64) -> Result<bool> {
    let cfg = load_config(config, None)?;
    let mut probe = ProbeGrid::default_probe();
    let doublings = if refine > 1.0 { refine.log2().ceil() as u32 } else { 0 };
    for _ in 0..doublings {
        probe = probe.refined_double();
    }
    let mut reports = Vec::new();
    for order in cfg.orders()? {
        reports.push(kernel_bound_report(order, &probe)?);
    }
    let csv = bound_reports_csv(&reports);
    let finite = reports
        .iter()
        .flat_map(|r| &r.rows)
        .all(|row| row.sup.is_finite() && row.sup > 0.0);
    match out {
        Some(dir) => write_files(dir, &[("bounds.csv".to_string(), csv)])?,
        None => print!("{csv}"),
    }
    Ok(finite)
}

fn cmd_meanvalue(config: Option<&PathBuf>, out: Option<&PathBuf>, seed: Option<u64>) -> Result<bool> {
    let cfg = load_config(config, seed)?;
    let mut rows = Vec::new();
    let mut verdicts = Vec::new();
    for order in cfg.orders()? {
        let lambda = order.lambda();
        let mut worst_cal = 0.0f64;
        for &radius in &[0.25, 0.5, 1.0] {
            let ball = HyperbolicBall::new(HalfPlanePoint::new(1.0, 0.0)?, radius)?;
            let calibrated = calibrate_normalization(order, &ball, CIRCLE_NODES)?;
            let oracle = normalization_oracle(order, radius)?;
            worst_cal = worst_cal.max((calibrated - oracle).abs() / oracle);
            rows.push(CalibrationRow {
                lambda,
                radius,
                calibrated,
                oracle,
            });
        }
        verdicts.push(Verdict {
            name: format!("normalization-vs-legendre-lambda-{lambda}"),
            passed: worst_cal <= 1e-8,
            measured: worst_cal,
            criterion: "calibrated N(λ, r) matches π P_{λ-1}(cosh r) to 1e-8".to_string(),
        });

        // The singular radial solution is not used in the calibration, so it
        // is an independent check of the same normalization.
        let ball = HyperbolicBall::new(HalfPlanePoint::new(1.7, -3.0)?, 0.8)?;
        let report = mean_value_check(
            order,
            &ball,
            |p: HalfPlanePoint| p.x.powf(1.0 - lambda),
            CIRCLE_NODES,
        )?;
        verdicts.push(Verdict {
            name: format!("mean-value-singular-solution-lambda-{lambda}"),
            passed: report.rel_error() <= cfg.tolerances.radial_mean_rel,
            measured: report.rel_error(),
            criterion: format!(
                "x^{{1-λ}} circle mean reproduces the center to {}",
                cfg.tolerances.radial_mean_rel
            ),
        });
    }
    let calibration = calibration_csv(&rows);
    print!("{calibration}");
    print_verdicts(&verdicts);
    if let Some(dir) = out {
        write_files(
            dir,
            &[
                ("calibration.csv".to_string(), calibration),
                ("verdicts.csv".to_string(), verdicts_csv(&verdicts)),
            ],
        )?;
    }
    Ok(verdicts.iter().all(|v| v.passed))
}

fn cmd_report(out: &PathBuf) -> Result<bool> {
    let path = out.join("verdicts.csv");
    let text = std::fs::read_to_string(&path)
        .map_err(|e| LabError::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut total = 0usize;
    let mut failed = 0usize;
    for line in text.lines().skip(1).filter(|l| !l.trim().is_empty()) {
        let mut parts = line.splitn(4, ',');
        let name = parts.next().unwrap_or("?");
        let passed = parts.next() == Some("true");
        let measured = parts.next().unwrap_or("");
        let criterion = parts.next().unwrap_or("");
        total += 1;
        if !passed {
            failed += 1;
        }
        let status = if passed { "PASS" } else { "FAIL" };
        println!("{status}  {name:<44} measured {measured:<12} ({criterion})");
    }
    println!(
        "{}: {total} verdicts, {failed} failed",
        out.display()
    );
    Ok(failed == 0 && total > 0)
}

fn main() -> ExitCode {
    init_parallelism();
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run {
            config,
            out,
            refine,
            seed,
        } => cmd_run(config.as_ref(), out, *refine, *seed),
        Command::Verify {
            suite,
            config,
            out,
            seed,
        } => cmd_verify(suite, config.as_ref(), out.as_ref(), *seed),
        Command::KernelProbe {
            config,
            out,
            refine,
        } => cmd_kernel_probe(config.as_ref(), out.as_ref(), *refine),
        Command::Meanvalue { config, out, seed } => {
            cmd_meanvalue(config.as_ref(), out.as_ref(), *seed)
        }
        Command::Report { out } => cmd_report(out),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
