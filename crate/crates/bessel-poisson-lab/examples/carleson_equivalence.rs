//! Measure the three quantities the square-function theory ties together —
//! the squared odd-BMO norm of a boundary function, the Carleson norm of
//! `|t ∇_λ u|² dx dt / t`, and the Carleson norm of the `∂_t`-only density —
//! for the indicator and bump test functions at λ ∈ {1.2, 2}.
//!
//! Stdout is exactly the CSV consumed as the committed reference band:
//!
//! ```text
//! cargo run --release --example carleson_equivalence \
//!     > crates/bessel-poisson-lab/tests/golden/equivalence.csv
//! ```
//!
//! Commentary goes to stderr so redirection stays clean.

use bessel_poisson_lab::lab::equivalence_reference_cells;
use bessel_poisson_lab::report::equivalence_csv;
use bessel_poisson_lab::{init_parallelism, Result};

fn main() -> Result<()> {
    init_parallelism();
    eprintln!("measuring odd-BMO and Carleson norms on the verification grid ...");
    let cells = equivalence_reference_cells()?;
    for cell in &cells {
        eprintln!(
            "λ = {:<4} {:<8}  ‖f‖²_BMOo ≈ {:-10.6}  ‖μ_grad‖_C ≈ {:-10.6}  ‖μ_time‖_C ≈ {:-10.6}  ratio grad/BMO² = {:.4}",
            cell.lambda,
            cell.function,
            cell.bmo_sq,
            cell.carleson_full,
            cell.carleson_time,
            cell.full_over_bmo,
        );
    }
    print!("{}", equivalence_csv(&cells));
    Ok(())
}
