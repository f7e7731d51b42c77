//! The modified Hankel transform `h_λ` is its own inverse and preserves the
//! `L²(0,∞)` norm. This example demonstrates all three facets on a
//! production-size grid (1024 nodes):
//!
//! * isometry: `‖h_λ f‖ = ‖f‖`,
//! * involution: `h_λ(h_λ f) = f` pointwise,
//! * the fixed point: `y^λ e^{−y²/2}` maps to itself.
//!
//! The transform refuses windows whose oscillation `x_max · ξ_max` exceeds
//! its budget, and rejects inputs that park real energy in the top octave of
//! the spectral window — the final section shows that guard firing.

use bessel_poisson_lab::grid::{GridFunction, RadialGrid};
use bessel_poisson_lab::hankel::{hankel_transform, SpectralPipeline};
use bessel_poisson_lab::quadrature::TailPolicy;
use bessel_poisson_lab::specfun::BesselOrder;
use bessel_poisson_lab::{init_parallelism, Result};

fn main() -> Result<()> {
    init_parallelism();
    for &lambda in &[1.2, 2.0] {
        let order = BesselOrder::new(lambda)?;
        let grid = RadialGrid::gauss_panels(0.0, 12.0, 128, 8)?;
        let f = GridFunction::sample(
            grid.clone(),
            |y| y.powf(lambda) * (-0.5 * y * y).exp() * (1.0 + 0.5 * y.cos()),
            TailPolicy::truncate_at(12.0),
        )?;
        let xi = RadialGrid::gauss_panels(0.0, 40.0, 160, 8)?;
        let transformed = hankel_transform(order, &f, &xi)?;
        let back = hankel_transform(order, &transformed, &grid)?;
        println!("λ = {lambda}: modulated Gaussian on 1024 nodes");
        println!(
            "  isometry   |‖h f‖ − ‖f‖| / ‖f‖    = {:.3e}",
            (transformed.norm_l2() - f.norm_l2()).abs() / f.norm_l2()
        );
        println!(
            "  involution sup |h(h f) − f|       = {:.3e}",
            back.max_abs_difference(&f)?
        );

        let eigen = GridFunction::sample(
            grid.clone(),
            |y| y.powf(lambda) * (-0.5 * y * y).exp(),
            TailPolicy::truncate_at(12.0),
        )?;
        let image = hankel_transform(order, &eigen, &grid)?;
        println!(
            "  fixed point sup |h f − f|         = {:.3e}",
            image.max_abs_difference(&eigen)?
        );
    }

    // Guard 1 — the oscillation budget: `J_ν(xξ)` needs nodes proportional
    // to `x_max · ξ_max`, so window pairs beyond the budget are refused
    // rather than silently under-resolved.
    let order = BesselOrder::new(2.0)?;
    let grid = RadialGrid::gauss_panels(0.0, 12.0, 64, 8)?;
    let smooth = GridFunction::sample(
        grid.clone(),
        |y| y * y * (-0.5 * y * y).exp(),
        TailPolicy::truncate_at(12.0),
    )?;
    let too_wide = RadialGrid::gauss_panels(0.0, 50.0, 200, 8)?;
    match hankel_transform(order, &smooth, &too_wide) {
        Err(e) => println!("\noscillation budget guard:\n  {e}"),
        Ok(_) => println!("\nunexpected: the budget guard did not fire"),
    }

    // Guard 2 — the top-octave tail: a high-frequency tone parks its
    // spectrum at the edge of the window, and the spectral pipeline refuses
    // to build semigroup fields on top of energy it cannot resolve.
    let spiky = GridFunction::sample(
        grid,
        |y| y * y * (-0.5 * y * y).exp() * (35.0 * y).cos(),
        TailPolicy::truncate_at(12.0),
    )?;
    let x_window = RadialGrid::gauss_panels(0.0, 5.0, 20, 8)?;
    match SpectralPipeline::new(order, &spiky, x_window) {
        Err(e) => println!("\ntop-octave tail guard:\n  {e}"),
        Ok(_) => println!("\nunexpected: the tail guard did not fire"),
    }
    Ok(())
}
