//! Classify boundary functions: weighted-L¹ admissibility and the odd-BMO
//! norm with its divergence verdict.
//!
//! Admissibility asks for both `∫ |f| x^λ (1+x²)^{−λ−1} dx` and
//! `∫ |f| (1+x²)^{−1} dx` to converge — the natural domain of the Poisson
//! extension. The odd-BMO norm estimator sweeps dyadic intervals, taking
//! mean-square oscillations everywhere plus plain mean squares on
//! origin-anchored intervals (the "size" condition that distinguishes the
//! odd half-line theory from classical BMO). The growth pattern of the
//! origin column drives the divergence verdict:
//!
//! * the indicator and bump have bounded sups — in class;
//! * `ln(e + x)` keeps growing like `ln²(b)` — flagged divergent;
//! * `x^λ` at λ = 2 is inadmissible outright (fails the second weight).

use bessel_poisson_lab::carleson::{bmo_o_norm, weighted_l1_check, BoxFamily};
use bessel_poisson_lab::catalog::{entry, SourceDecay};
use bessel_poisson_lab::field::Source;
use bessel_poisson_lab::specfun::BesselOrder;
use bessel_poisson_lab::{init_parallelism, Result};

fn main() -> Result<()> {
    init_parallelism();
    let family = BoxFamily::standard();
    for &lambda in &[1.2, 2.0] {
        let order = BesselOrder::new(lambda)?;
        println!("λ = {lambda}");
        println!(
            "  {:<14} {:>11} {:>13} {:>11} {:>11} {:>9}",
            "function", "admissible", "osc sup", "size sup", "norm", "verdict"
        );
        for name in ["chi_12", "bump", "rational_odd", "power_window", "log_growth"] {
            let e = entry(order, name)?;
            if e.boundary_fn().is_err() {
                continue;
            }
            let src = Source::from_catalog(&e)?;
            let adm = weighted_l1_check(order, &src)?;
            let bmo = bmo_o_norm(&src, &family)?;
            println!(
                "  {:<14} {:>11} {:>13.6} {:>11.6} {:>11.6} {:>9}",
                name,
                adm.admissible(),
                bmo.oscillation_sup,
                bmo.size_sup,
                bmo.norm,
                if bmo.divergent { "DIVERGES" } else { "in class" }
            );
        }
        println!();
    }
    println!("(sups are squared-scale; the norm is the square root of the larger sup)\n");

    // The regular radial solution itself: f(x) = x^λ at λ = 2 passes the
    // moment weight (combined tail x^{2−4}) but fails the companion weight
    // (x^{2−2} has no decay at all), so it sits outside the class.
    let order = BesselOrder::new(2.0)?;
    let power = Source::new(
        "x^2",
        |x: f64| x * x,
        SourceDecay::PowerLaw { exponent: -2.0 },
        vec![],
    );
    let adm = weighted_l1_check(order, &power)?;
    println!(
        "f(x) = x² at λ = 2:  moment integral {:.6}, companion integral {}, admissible: {}",
        adm.moment_weighted, adm.inverse_square_weighted, adm.admissible()
    );
    Ok(())
}
