//! Semigroup structure of the Poisson extension:
//!
//! * composition: extending a slice `u(·, t)` by height `s` lands on
//!   `u(·, s + t)` — `P_s P_t = P_{s+t}`;
//! * the power identity: applied to `f(y) = y^λ` the composition is exact
//!   at every height because `P_t(y^λ) = x^λ` for all `t`;
//! * far-field decay: for compactly supported data, `u(x, t)` falls off
//!   like `t^{−(2λ+1)}` as `t → ∞` (weighted-measure dimension `2λ + 1`).

use bessel_poisson_lab::catalog::entry;
use bessel_poisson_lab::field::{decay_exponent, semigroup_check, semigroup_power_identity, Source};
use bessel_poisson_lab::specfun::BesselOrder;
use bessel_poisson_lab::{init_parallelism, Result};

fn main() -> Result<()> {
    init_parallelism();
    for &lambda in &[1.2, 2.0] {
        let order = BesselOrder::new(lambda)?;
        let src = Source::from_catalog(&entry(order, "chi_12")?)?;
        println!("λ = {lambda}");
        println!("  composition P_s P_t f = P_(s+t) f on the indicator of (1, 2):");
        for &(x, s, t) in &[(1.5, 0.4, 0.8), (0.7, 1.0, 0.5), (3.0, 2.0, 1.0)] {
            let rep = semigroup_check(order, &src, x, s, t)?;
            println!(
                "    x = {x}, s = {s}, t = {t}:  one step {:.10}  two steps {:.10}  rel gap {:.2e}",
                rep.direct,
                rep.composed,
                rep.abs_error() / rep.direct.abs()
            );
        }
        println!("  power identity P_s P_t (y^λ) = x^λ:");
        for &(x, s, t) in &[(1.5, 0.4, 0.8), (0.7, 1.0, 0.5)] {
            let rep = semigroup_power_identity(order, x, s, t)?;
            println!(
                "    x = {x}, s = {s}, t = {t}:  both sides {:.10} / {:.10}  rel gap {:.2e}",
                rep.direct,
                rep.composed,
                rep.abs_error() / rep.direct.abs()
            );
        }
        let ts: Vec<f64> = (0..6).map(|k| 40.0 * 1.6f64.powi(k)).collect();
        let slope = decay_exponent(order, &src, 1.5, &ts)?;
        println!(
            "  far-field decay: fitted u(1.5, t) ~ t^({slope:.4}), predicted exponent {}\n",
            -(2.0 * lambda + 1.0)
        );
    }
    Ok(())
}
