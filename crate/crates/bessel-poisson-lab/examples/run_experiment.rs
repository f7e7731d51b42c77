//! End-to-end experiment drive: parse a TOML configuration, sweep the
//! (order, function) matrix, and walk the report tree it writes — the same
//! path the `bpl run` subcommand takes.
//!
//! The grid here is kept small so the example finishes in seconds; the
//! committed `config/experiment.toml` shows the production defaults.

use bessel_poisson_lab::config::ExperimentConfig;
use bessel_poisson_lab::lab::run;
use bessel_poisson_lab::{init_parallelism, Result};

fn main() -> Result<()> {
    init_parallelism();
    let config = ExperimentConfig::from_toml_str(
        r#"
lambdas = [2.0]
functions = ["chi_12", "lebesgue_control"]
mode = "direct"

[grid]
x_nodes = 48
t_nodes = 24
t_max = 10.0

[boxes]
offset_min = -3
offset_max = 3
length_min = -3
length_max = 3
"#,
    )?;
    let out = std::env::temp_dir().join("bpl-example-run");
    let outcome = run(&config, &out, 1.0)?;

    println!(
        "wrote {} files under {}\n",
        outcome.files_written,
        outcome.out_dir.display()
    );
    for v in &outcome.verdicts {
        println!(
            "{}  {:<44} measured {:.6e}",
            if v.passed { "PASS" } else { "FAIL" },
            v.name,
            v.measured
        );
    }

    let equivalence = std::fs::read_to_string(out.join("equivalence.csv"))
        .map_err(bessel_poisson_lab::LabError::from)?;
    println!("\nequivalence.csv:\n{equivalence}");
    println!("all verdicts passed: {}", outcome.all_passed());
    Ok(())
}
