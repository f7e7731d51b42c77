//! Mean-value identity for λ-harmonic functions on hyperbolic circles.
//!
//! The right geometry for the operator `L_λ = ∂²_t + ∂²_x − λ(λ−1)/x²` on
//! the half-plane `{x > 0}` is hyperbolic: a geodesic circle of radius `r`
//! about `a = (x₀, t₀)` is the Euclidean circle centered at
//! `(x₀ cosh r, t₀)` with radius `x₀ sinh r`. Averaging a λ-harmonic `u`
//! over it with the weight `(x₀/x)` reproduces the center value:
//!
//! ```text
//! u(a) = (1 / 2 N(λ, r)) ∮ u(γ(θ)) (x₀ / x(θ)) dθ,
//! ```
//!
//! and the normalization has the closed form `N(λ, r) = π P_{λ−1}(cosh r)`
//! in terms of the Legendre function. The example calibrates `N` from the
//! regular radial solution `x^λ`, compares with the closed form, and then
//! checks the identity on the *other* radial solution `x^{1−λ}`, on a
//! mixture, and on a Poisson-extension slice — none of which entered the
//! calibration.

use bessel_poisson_lab::catalog::entry;
use bessel_poisson_lab::field::{extension_value, Source};
use bessel_poisson_lab::geometry::{
    calibrate_normalization, mean_value_check, normalization_oracle, HalfPlanePoint,
    HyperbolicBall, CIRCLE_NODES,
};
use bessel_poisson_lab::specfun::BesselOrder;
use bessel_poisson_lab::{init_parallelism, Result};

fn main() -> Result<()> {
    init_parallelism();
    println!("normalization N(λ, r): calibrated vs π P_(λ-1)(cosh r)");
    for &lambda in &[1.2, 2.0] {
        let order = BesselOrder::new(lambda)?;
        for &radius in &[0.25, 0.5, 1.0] {
            let ball = HyperbolicBall::new(HalfPlanePoint::new(1.0, 0.0)?, radius)?;
            let calibrated = calibrate_normalization(order, &ball, CIRCLE_NODES)?;
            let oracle = normalization_oracle(order, radius)?;
            println!(
                "  λ = {lambda}, r = {radius}:  {calibrated:.12}  vs  {oracle:.12}  (rel gap {:.1e})",
                (calibrated - oracle).abs() / oracle
            );
        }
    }

    println!("\nmean values over the circle about (1.7, −3.0), r = 0.8:");
    for &lambda in &[1.2, 2.0] {
        let order = BesselOrder::new(lambda)?;
        let ball = HyperbolicBall::new(HalfPlanePoint::new(1.7, -3.0)?, 0.8)?;
        for (name, u) in [
            (
                "x^(1-λ)  (singular solution)",
                Box::new(move |p: HalfPlanePoint| p.x.powf(1.0 - lambda))
                    as Box<dyn Fn(HalfPlanePoint) -> f64>,
            ),
            (
                "2x^λ − 3x^(1-λ)",
                Box::new(move |p: HalfPlanePoint| {
                    2.0 * p.x.powf(lambda) - 3.0 * p.x.powf(1.0 - lambda)
                }),
            ),
        ] {
            let report = mean_value_check(order, &ball, u, CIRCLE_NODES)?;
            println!(
                "  λ = {lambda}, u = {name:<30} circle mean {:.10}  center {:.10}  rel gap {:.1e}",
                report.mean,
                report.center_value,
                report.rel_error()
            );
        }
    }

    let order = BesselOrder::new(2.0)?;
    let src = Source::from_catalog(&entry(order, "chi_12")?)?;
    let ball = HyperbolicBall::new(HalfPlanePoint::new(1.3, 0.9)?, 0.5)?;
    let report = mean_value_check(
        order,
        &ball,
        |p: HalfPlanePoint| extension_value(order, &src, p.x, p.t).unwrap_or(f64::NAN),
        96,
    )?;
    println!(
        "\nPoisson slice u = P_t(χ_(1,2)) at λ = 2, ball ((1.3, 0.9), 0.5):\n  circle mean {:.10}  center {:.10}  rel gap {:.1e}",
        report.mean,
        report.center_value,
        report.rel_error()
    );
    Ok(())
}
