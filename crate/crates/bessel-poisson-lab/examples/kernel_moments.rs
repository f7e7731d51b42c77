//! The weighted moment identity of the Bessel–Poisson kernel:
//!
//! ```text
//! ∫₀^∞ P_t^λ(x, y) y^λ dy = x^λ        for every x, t > 0,
//! ```
//!
//! i.e. the kernel reproduces the regular radial solution `x^λ` exactly, at
//! every height. The sweep below evaluates the normalized mass
//! `x^{−λ} ∫ P y^λ dy` over a 3×3×3 probe per order and prints the worst
//! deviation from 1, together with a spot check of the exact scale
//! covariance `s P^λ_{st}(sx, sy) = P^λ_t(x, y)`.

use bessel_poisson_lab::kernels::{normalized_kernel_mass, poisson_kernel};
use bessel_poisson_lab::specfun::BesselOrder;
use bessel_poisson_lab::{init_parallelism, Result};

fn main() -> Result<()> {
    init_parallelism();
    println!("{:<6} {:<8} {:<8} {:<24}", "λ", "x", "t", "|x^{-λ} ∫ P y^λ dy − 1|");
    let mut worst = 0.0f64;
    for &lambda in &[1.2, 2.0, 3.5] {
        let order = BesselOrder::new(lambda)?;
        for &x in &[0.3, 1.0, 5.0] {
            for &t in &[0.1, 1.0, 10.0] {
                let dev = (normalized_kernel_mass(order, x, t)? - 1.0).abs();
                worst = worst.max(dev);
                println!("{lambda:<6} {x:<8} {t:<8} {dev:<24.3e}");
            }
        }
    }
    println!("\nworst deviation over the probe: {worst:.3e}");

    println!("\nscale covariance s·P_st(sx, sy) = P_t(x, y):");
    for &lambda in &[1.2, 2.0, 3.5] {
        let order = BesselOrder::new(lambda)?;
        let (x, y, t, s) = (1.3, 0.8, 0.6, 3.7);
        let base = poisson_kernel(order, x, y, t)?;
        let scaled = s * poisson_kernel(order, s * x, s * y, s * t)?;
        println!(
            "  λ = {lambda}: P = {base:.12e}, rescaled = {scaled:.12e}, rel gap {:.2e}",
            (scaled - base).abs() / base
        );
    }
    Ok(())
}
