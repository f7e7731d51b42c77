//! Hyperbolic geometry of the half-plane `{(x, t) : x > 0}` adapted to the
//! Weinstein operator, and the pointwise machinery built on it: mean values
//! of λ-harmonic functions over geodesic circles, the boundary representation
//! kernel on vertical lines, finite-difference residuals of λ-harmonicity and
//! randomized subharmonicity probes.
//!
//! The metric is the usual hyperbolic half-plane metric with the radial
//! variable as the height: `cosh d((x₁,t₁),(x₂,t₂)) = 1 + ((x₁−x₂)² +
//! (t₁−t₂)²)/(2x₁x₂)`. A geodesic circle of hyperbolic radius `r` around
//! `(x₀, t₀)` is the Euclidean circle with center `(x₀ cosh r, t₀)` and
//! radius `x₀ sinh r`, so its points are
//! `x(θ) = x₀ (cosh r + sinh r cos θ)`, `t(θ) = t₀ + x₀ sinh r sin θ` — never
//! touching the boundary `x = 0`.
//!
//! Solutions of `L_λ u = ∂²_t u + ∂²_x u − λ(λ−1) x^{−2} u = 0` satisfy a
//! mean-value identity over these circles against the weight `x₀ / x(θ)`:
//! the weight exponent is pinned uniquely by requiring both radial solutions
//! `x^λ` and `x^{1−λ}` to average correctly, and the normalization constant
//! is `N(λ, r) = π P_{λ−1}(cosh r)` (Legendre function; the two radial
//! solutions give degrees `λ−1` and `−λ`, equal by the reflection identity
//! `P_{−β−1} = P_β`).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{LabError, Result};
use crate::quadrature::{integrate, QuadratureSpec};
use crate::specfun::{gamma_fn, legendre_p, BesselOrder};

/// A point of the half-plane `{x > 0}`; `t` runs over the whole line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlanePoint {
    pub x: f64,
    pub t: f64,
}

impl HalfPlanePoint {
    pub fn new(x: f64, t: f64) -> Result<Self> {
        if !(x > 0.0) || !x.is_finite() || !t.is_finite() {
            return Err(LabError::domain(format!(
                "half-plane points need x > 0 and finite coordinates, got ({x}, {t})"
            )));
        }
        Ok(HalfPlanePoint { x, t })
    }
}

/// Hyperbolic distance `arcosh(1 + (|Δx|² + |Δt|²) / (2 x₁ x₂))`.
pub fn hyperbolic_distance(a: HalfPlanePoint, b: HalfPlanePoint) -> f64 {
    let dx = a.x - b.x;
    let dt = a.t - b.t;
    let sigma = 1.0 + (dx * dx + dt * dt) / (2.0 * a.x * b.x);
    sigma.acosh()
}

/// A geodesic ball; its boundary circle is Euclidean, which makes uniform
/// sampling in the angle both exact and cheap.
#[derive(Debug, Clone, Copy)]
pub struct HyperbolicBall {
    center: HalfPlanePoint,
    radius: f64,
}

impl HyperbolicBall {
    pub fn new(center: HalfPlanePoint, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(LabError::domain(format!(
                "hyperbolic radius must be positive and finite, got {radius}"
            )));
        }
        Ok(HyperbolicBall { center, radius })
    }

    pub fn center(&self) -> HalfPlanePoint {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn euclidean_center(&self) -> HalfPlanePoint {
        HalfPlanePoint {
            x: self.center.x * self.radius.cosh(),
            t: self.center.t,
        }
    }

    pub fn euclidean_radius(&self) -> f64 {
        self.center.x * self.radius.sinh()
    }

    /// The boundary circle, parameterized by the Euclidean angle.
    pub fn boundary_point(&self, theta: f64) -> HalfPlanePoint {
        let ec = self.euclidean_center();
        let er = self.euclidean_radius();
        HalfPlanePoint {
            x: ec.x + er * theta.cos(),
            t: ec.t + er * theta.sin(),
        }
    }

    /// Smallest `t` coordinate on the closed ball — positive clearance means
    /// the ball stays inside the quadrant `{t > 0}` where Poisson extensions
    /// live.
    pub fn lower_t(&self) -> f64 {
        self.center.t - self.euclidean_radius()
    }

    pub fn contains(&self, p: HalfPlanePoint) -> bool {
        hyperbolic_distance(self.center, p) < self.radius
    }

    /// Intrinsic circumference of the boundary circle: `2π sinh r`,
    /// independent of the center (the parameter measure `dθ` instead
    /// integrates to `2π`; the two differ by the metric factor `|γ'|/x`).
    pub fn circumference(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.radius.sinh()
    }
}

/// `∮_0^{2π} v(γ(θ)) (x(θ)/x₀)^w dθ` by the periodic trapezoid rule with `n`
/// nodes — geometrically convergent for integrands smooth on the circle.
pub fn weighted_circle_integral<V>(ball: &HyperbolicBall, v: V, weight_exponent: f64, n: usize) -> f64
where
    V: Fn(HalfPlanePoint) -> f64,
{
    let x0 = ball.center().x;
    let step = 2.0 * std::f64::consts::PI / n as f64;
    let mut sum = 0.0;
    for k in 0..n {
        let p = ball.boundary_point(k as f64 * step);
        sum += v(p) * (p.x / x0).powf(weight_exponent);
    }
    sum * step
}

/// The number of circle nodes used by the calibration and check routines.
pub const CIRCLE_NODES: usize = 256;

/// Mean-value normalization `N(λ, r)`, calibrated from the regular radial
/// solution `u = x^λ`:
///
/// `N = (1/(2 x₀^λ)) ∮ x(θ)^λ (x₀/x(θ)) dθ = ½ ∮ (x(θ)/x₀)^{λ−1} dθ`.
///
/// The value is center-independent (only `r` and `λ` enter through
/// `x(θ)/x₀ = cosh r + sinh r cos θ`) and equals `π P_{λ−1}(cosh r)`.
pub fn calibrate_normalization(order: BesselOrder, ball: &HyperbolicBall, n: usize) -> Result<f64> {
    if n < 8 {
        return Err(LabError::domain(format!(
            "normalization needs at least 8 circle nodes, got {n}"
        )));
    }
    let value = 0.5 * weighted_circle_integral(ball, |_| 1.0, order.lambda() - 1.0, n);
    if !value.is_finite() {
        return Err(LabError::NonFinite {
            context: "mean-value normalization".to_string(),
            location: ball.radius(),
        });
    }
    Ok(value)
}

/// Independent closed form for the normalization: `π P_{λ−1}(cosh r)`.
pub fn normalization_oracle(order: BesselOrder, radius: f64) -> Result<f64> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(LabError::domain(format!(
            "normalization oracle needs a positive finite radius, got {radius}"
        )));
    }
    Ok(std::f64::consts::PI * legendre_p(order.lambda() - 1.0, radius.cosh())?)
}

/// Both sides of the mean-value identity for one function on one circle.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct MeanValueReport {
    /// `∮ u(γ(θ)) (x₀/x(θ)) dθ / (2 N(λ, r))`.
    pub mean: f64,
    /// `u` at the hyperbolic center.
    pub center_value: f64,
}

impl MeanValueReport {
    pub fn abs_error(&self) -> f64 {
        (self.mean - self.center_value).abs()
    }

    pub fn rel_error(&self) -> f64 {
        self.abs_error() / self.center_value.abs().max(f64::MIN_POSITIVE)
    }
}

/// Test the mean-value identity `u(a) = ∮ u (x₀/x) dθ / (2N)` for a
/// λ-harmonic candidate `u` on the boundary circle of `ball`.
pub fn mean_value_check<U>(
    order: BesselOrder,
    ball: &HyperbolicBall,
    u: U,
    n: usize,
) -> Result<MeanValueReport>
where
    U: Fn(HalfPlanePoint) -> f64,
{
    let norm = calibrate_normalization(order, ball, n)?;
    let integral = weighted_circle_integral(ball, &u, -1.0, n);
    let mean = integral / (2.0 * norm);
    let center_value = u(ball.center());
    if !mean.is_finite() || !center_value.is_finite() {
        return Err(LabError::NonFinite {
            context: "mean-value check".to_string(),
            location: ball.center().x,
        });
    }
    Ok(MeanValueReport { mean, center_value })
}

/// The constant `A_λ = √π Γ(λ − 1/2) / Γ(λ)` normalizing the boundary
/// representation kernel; finite only for `λ > 1/2`.
pub fn a_constant(order: BesselOrder) -> Result<f64> {
    let lambda = order.lambda();
    if lambda <= 0.5 {
        return Err(LabError::Divergent(format!(
            "A_λ has a pole of Γ(λ − 1/2) at λ = 1/2 and below, got λ = {lambda}"
        )));
    }
    Ok(std::f64::consts::PI.sqrt() * gamma_fn(lambda - 0.5)? / gamma_fn(lambda)?)
}

/// Representation kernel `K_x(t, s) = x^{2λ−1} / ((t−s)² + x²)^λ` against
/// boundary data on a vertical line `{x} × ℝ`.
pub fn representation_kernel(order: BesselOrder, x: f64, t: f64, s: f64) -> f64 {
    let lambda = order.lambda();
    let d = (t - s) * (t - s) + x * x;
    x.powf(2.0 * lambda - 1.0) * d.powf(-lambda)
}

/// `∫_ℝ K_x(t, s) ds`, which collapses to `∫_ℝ (1+u²)^{−λ} du = A_λ` for
/// every `x > 0` and `t` — evaluated numerically as a cross-check of the
/// closed form.
pub fn representation_kernel_mass(order: BesselOrder, x: f64, t: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() || !t.is_finite() {
        return Err(LabError::domain(format!(
            "kernel mass needs x > 0 and finite t, got ({x}, {t})"
        )));
    }
    let spec = QuadratureSpec {
        abs_tol: 1e-13,
        rel_tol: 1e-11,
        max_subdivisions: 400,
        singularity_hints: vec![t - x, t, t + x],
    };
    let q = integrate(
        |s| representation_kernel(order, x, t, s),
        f64::NEG_INFINITY,
        f64::INFINITY,
        &spec,
    )?;
    Ok(q.value)
}

/// Exact second-difference on three points `c − h₋, c, c + h₊`:
/// `f'' ≈ 2 (h₋ f₊ − (h₋ + h₊) f₀ + h₊ f₋) / (h₋ h₊ (h₋ + h₊))`.
/// Second-order accurate when `h₋ = h₊`, first-order otherwise.
fn second_difference(f_minus: f64, f_center: f64, f_plus: f64, h_minus: f64, h_plus: f64) -> f64 {
    2.0 * (h_minus * f_plus - (h_minus + h_plus) * f_center + h_plus * f_minus)
        / (h_minus * h_plus * (h_minus + h_plus))
}

/// Finite-difference residual of the Weinstein operator
/// `L_λ u = ∂²_t u + ∂²_x u − λ(λ−1) x^{−2} u` at `p`, with step `h` in both
/// coordinates. The radial step toward the boundary is clamped to `x/2`
/// (the stencil stays exact on the nonuniform points, at the cost of one
/// convergence order when the clamp engages).
pub fn weinstein_residual<U>(order: BesselOrder, u: U, p: HalfPlanePoint, h: f64) -> Result<f64>
where
    U: Fn(f64, f64) -> f64,
{
    if !(h > 0.0) || !h.is_finite() {
        return Err(LabError::domain(format!("step must be positive and finite, got {h}")));
    }
    let hx_minus = h.min(0.5 * p.x);
    let center = u(p.x, p.t);
    let d2x = second_difference(
        u(p.x - hx_minus, p.t),
        center,
        u(p.x + h, p.t),
        hx_minus,
        h,
    );
    let d2t = second_difference(u(p.x, p.t - h), center, u(p.x, p.t + h), h, h);
    let residual = d2t + d2x - order.potential_coefficient() / (p.x * p.x) * center;
    if !residual.is_finite() {
        return Err(LabError::NonFinite {
            context: "Weinstein residual".to_string(),
            location: p.x,
        });
    }
    Ok(residual)
}

/// Least-squares slope of `ln |residual|` against `ln h` over the given
/// steps: ≈ 2 for λ-harmonic `u` (the residual is pure truncation error),
/// ≈ 0 for functions the operator does not annihilate.
pub fn residual_convergence_order<U>(
    order: BesselOrder,
    u: U,
    p: HalfPlanePoint,
    steps: &[f64],
) -> Result<f64>
where
    U: Fn(f64, f64) -> f64,
{
    if steps.len() < 2 {
        return Err(LabError::domain(format!(
            "convergence order needs at least 2 steps, got {}",
            steps.len()
        )));
    }
    let mut pts = Vec::with_capacity(steps.len());
    for &h in steps {
        let r = weinstein_residual(order, &u, p, h)?.abs();
        if r == 0.0 {
            return Err(LabError::domain(
                "residual vanished exactly; the convergence slope is undefined (function is in the stencil's null space)",
            ));
        }
        pts.push((h.ln(), r.ln()));
    }
    let n = pts.len() as f64;
    let (sx, sy): (f64, f64) = pts.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let (num, den) = pts.iter().fold((0.0, 0.0), |(num, den), &(x, y)| {
        (num + (x - mx) * (y - my), den + (x - mx) * (x - mx))
    });
    Ok(num / den)
}

/// Deterministic sample of geodesic balls: centers with log-uniform radial
/// coordinate and uniform `t`, radii uniform, all driven by a seeded ChaCha
/// stream so experiment reruns probe identical disks. `min_lower_t` (if any)
/// rejects balls dipping below that `t` level — Poisson-extension probes
/// need clearance above the boundary line `t = 0`.
pub fn random_balls(
    seed: u64,
    count: usize,
    x_range: (f64, f64),
    t_range: (f64, f64),
    radius_range: (f64, f64),
    min_lower_t: Option<f64>,
) -> Result<Vec<HyperbolicBall>> {
    if !(x_range.0 > 0.0 && x_range.0 <= x_range.1)
        || !(t_range.0 <= t_range.1)
        || !(radius_range.0 > 0.0 && radius_range.0 <= radius_range.1)
    {
        return Err(LabError::domain(format!(
            "ball sampler needs ordered positive ranges, got x {x_range:?}, t {t_range:?}, r {radius_range:?}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut balls = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while balls.len() < count {
        attempts += 1;
        if attempts > 1000 * count.max(1) {
            return Err(LabError::domain(
                "ball sampler exhausted its attempt budget; the clearance constraint is too tight for the ranges",
            ));
        }
        let x = x_range.0 * (x_range.1 / x_range.0).powf(rng.gen::<f64>());
        let t = t_range.0 + (t_range.1 - t_range.0) * rng.gen::<f64>();
        let r = radius_range.0 + (radius_range.1 - radius_range.0) * rng.gen::<f64>();
        let ball = HyperbolicBall::new(HalfPlanePoint { x, t }, r)?;
        if let Some(floor) = min_lower_t {
            if ball.lower_t() < floor {
                continue;
            }
        }
        balls.push(ball);
    }
    Ok(balls)
}

/// Outcome of a randomized subharmonicity probe.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct SubharmonicReport {
    pub disks: usize,
    /// Disks where the center value exceeded the ball mean beyond tolerance.
    pub violations: usize,
    /// Largest value of `|u(center)| − mean(|u|)` seen (negative when the
    /// inequality holds strictly everywhere).
    pub worst_gap: f64,
    pub tolerance: f64,
}

/// Check `|u(a)| ≤ ` weighted ball mean of `|u|` on every disk — the
/// subharmonicity consequence of the circle mean-value identity (the weight
/// is positive, so averaging commutes with the absolute value only in the
/// `≤` direction). The ball mean stacks the circle means in polar form:
///
/// `mean = ∫₀^r [∮ |u| (x₀/x) dθ] sinh ρ dρ / ∫₀^r 2 N(λ, ρ) sinh ρ dρ`,
///
/// with Gauss nodes in `ρ` and periodic trapezoid nodes in `θ`.
pub fn subharmonic_check<U>(
    order: BesselOrder,
    u: U,
    balls: &[HyperbolicBall],
    radial_nodes: usize,
    circle_nodes: usize,
    tolerance: f64,
) -> Result<SubharmonicReport>
where
    U: Fn(HalfPlanePoint) -> f64 + Sync,
{
    if balls.is_empty() {
        return Err(LabError::domain("subharmonicity check needs at least one ball"));
    }
    let (rho_nodes, rho_weights) = crate::grid::gauss_legendre(radial_nodes.max(4));
    let gaps: Vec<Result<f64>> = balls
        .par_iter()
        .map(|ball| -> Result<f64> {
            let center = ball.center();
            let r = ball.radius();
            let mut num = 0.0;
            let mut den = 0.0;
            for (&node, &weight) in rho_nodes.iter().zip(&rho_weights) {
                let rho = 0.5 * r * (node + 1.0);
                let w = 0.5 * r * weight * rho.sinh();
                let shell = HyperbolicBall::new(center, rho)?;
                num += w * weighted_circle_integral(&shell, |p| u(p).abs(), -1.0, circle_nodes);
                den += w * 2.0 * normalization_oracle(order, rho)?;
            }
            let mean = num / den;
            let center_value = u(center).abs();
            if !mean.is_finite() || !center_value.is_finite() {
                return Err(LabError::NonFinite {
                    context: "subharmonicity ball mean".to_string(),
                    location: center.x,
                });
            }
            Ok(center_value - mean)
        })
        .collect();
    let mut worst_gap = f64::NEG_INFINITY;
    let mut violations = 0usize;
    for gap in gaps {
        let gap = gap?;
        worst_gap = worst_gap.max(gap);
        if gap > tolerance {
            violations += 1;
        }
    }
    Ok(SubharmonicReport {
        disks: balls.len(),
        violations,
        worst_gap,
        tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::entry;
    use crate::field::{extension_value, Source};

    fn order(lambda: f64) -> BesselOrder {
        BesselOrder::new(lambda).unwrap()
    }

    fn point(x: f64, t: f64) -> HalfPlanePoint {
        HalfPlanePoint::new(x, t).unwrap()
    }

    #[test]
    fn boundary_circle_sits_at_the_stated_radius() {
        let ball = HyperbolicBall::new(point(1.7, -3.2), 0.85).unwrap();
        for k in 0..24 {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / 24.0;
            let p = ball.boundary_point(theta);
            assert!(p.x > 0.0);
            let d = hyperbolic_distance(ball.center(), p);
            assert!(
                (d - ball.radius()).abs() <= 1e-12,
                "θ={theta}: distance {d} vs radius {}",
                ball.radius()
            );
        }
        // The parameter measure of the weight x₀/x is exactly 2π (Legendre
        // degree −1 ↔ degree 0 by reflection), for any center and radius.
        let raw = weighted_circle_integral(&ball, |_| 1.0, -1.0, 128);
        assert!((raw - 2.0 * std::f64::consts::PI).abs() <= 1e-12);
    }

    #[test]
    fn normalization_is_center_free_and_matches_the_legendre_form() {
        for &lambda in &[1.2, 2.0] {
            let o = order(lambda);
            for &r in &[0.5, 1.0] {
                let values: Vec<f64> = [point(1.0, 0.0), point(2.7, 5.0), point(0.3, -4.0)]
                    .iter()
                    .map(|&c| {
                        calibrate_normalization(o, &HyperbolicBall::new(c, r).unwrap(), CIRCLE_NODES)
                            .unwrap()
                    })
                    .collect();
                for v in &values[1..] {
                    assert!(
                        (v - values[0]).abs() <= 1e-10 * values[0],
                        "λ={lambda}, r={r}: center dependence {values:?}"
                    );
                }
                let oracle = normalization_oracle(o, r).unwrap();
                assert!(
                    (values[0] - oracle).abs() <= 1e-8 * oracle,
                    "λ={lambda}, r={r}: calibrated {} vs oracle {oracle}",
                    values[0]
                );
            }
        }
        // Frozen spot value: N(2, 1) = π cosh 1.
        let ball = HyperbolicBall::new(point(1.0, 0.0), 1.0).unwrap();
        let n21 = calibrate_normalization(order(2.0), &ball, CIRCLE_NODES).unwrap();
        assert!((n21 - 4.84773078623224).abs() <= 1e-10, "N(2,1) = {n21}");
    }

    #[test]
    fn mean_value_identity_holds_for_radial_solutions() {
        for &lambda in &[1.2, 2.0] {
            let o = order(lambda);
            let ball = HyperbolicBall::new(point(1.7, -3.0), 0.8).unwrap();
            let u = move |p: HalfPlanePoint| 2.0 * p.x.powf(lambda) - 3.0 * p.x.powf(1.0 - lambda);
            let report = mean_value_check(o, &ball, u, CIRCLE_NODES).unwrap();
            assert!(
                report.rel_error() <= 1e-8,
                "λ={lambda}: mean {} vs center {}",
                report.mean,
                report.center_value
            );
        }

        // Independent closed form at λ=2 for the singular solution x^{−1}:
        // ∮ (x₀/x) x^{−1} dθ = x₀^{−1} ∫ (cosh r + sinh r cos θ)^{−2} dθ
        // and ∫₀^{2π} (A + B cos θ)^{−2} dθ = 2πA/(A² − B²)^{3/2} with
        // A² − B² = 1.
        let ball = HyperbolicBall::new(point(1.3, 0.4), 0.65).unwrap();
        let raw = weighted_circle_integral(&ball, |p| 1.0 / p.x, -1.0, CIRCLE_NODES);
        let expected = 2.0 * std::f64::consts::PI * 0.65f64.cosh() / 1.3;
        assert!((raw - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn mean_value_identity_holds_on_poisson_slices() {
        let o = order(2.0);
        let src = Source::from_catalog(&entry(o, "chi_12").unwrap()).unwrap();
        let ball = HyperbolicBall::new(point(1.3, 0.9), 0.5).unwrap();
        assert!(ball.lower_t() > 0.1, "ball must clear the t = 0 boundary");
        let u = |p: HalfPlanePoint| extension_value(o, &src, p.x, p.t).unwrap_or(f64::NAN);
        let report = mean_value_check(o, &ball, u, 96).unwrap();
        assert!(
            report.rel_error() <= 1e-4,
            "mean {} vs center {} (rel {:.2e})",
            report.mean,
            report.center_value,
            report.rel_error()
        );
    }

    #[test]
    fn representation_kernel_mass_equals_the_gamma_constant() {
        // Closed forms: A_2 = π/2, A_1 = π.
        assert!((a_constant(order(2.0)).unwrap() - std::f64::consts::PI / 2.0).abs() <= 1e-14);
        assert!((a_constant(order(1.0)).unwrap() - std::f64::consts::PI).abs() <= 1e-13);
        assert!(a_constant(order(0.5)).is_err());

        for &lambda in &[1.2, 2.0, 3.5] {
            let o = order(lambda);
            let a = a_constant(o).unwrap();
            for &(x, t) in &[(0.5, 0.0), (2.0, -3.0), (17.0, 4.0)] {
                let mass = representation_kernel_mass(o, x, t).unwrap();
                assert!(
                    (mass - a).abs() <= 1e-8 * a,
                    "λ={lambda}, x={x}, t={t}: mass {mass} vs A {a}"
                );
            }
        }
    }

    #[test]
    fn residual_order_is_quadratic_on_harmonic_functions() {
        let steps = [0.2, 0.1, 0.05, 0.025];

        // Regular solution at an order where it is not a polynomial the
        // stencil reproduces exactly.
        let o = order(3.5);
        let slope = residual_convergence_order(
            o,
            |x: f64, _t: f64| x.powf(3.5),
            point(1.4, 0.3),
            &steps,
        )
        .unwrap();
        assert!(slope >= 1.8, "x^3.5 slope {slope}");

        // Singular solution x^{1−λ} at λ = 2.
        let o = order(2.0);
        let slope = residual_convergence_order(o, |x: f64, _t: f64| 1.0 / x, point(0.7, -2.0), &steps)
            .unwrap();
        assert!(slope >= 1.8, "x^{{-1}} slope {slope}");

        // A function the operator does not kill: the residual must stall at
        // a nonzero level instead of shrinking quadratically.
        let bad_slope = residual_convergence_order(
            o,
            |x: f64, t: f64| x * x + t * t,
            point(1.0, 0.7),
            &steps,
        )
        .unwrap();
        assert!(bad_slope.abs() <= 0.5, "non-solution slope {bad_slope}");
        let bad_res = weinstein_residual(o, |x: f64, t: f64| x * x + t * t, point(1.0, 0.7), 0.05)
            .unwrap();
        assert!(bad_res.abs() > 1e-3, "non-solution residual {bad_res}");
    }

    #[test]
    fn residual_order_is_quadratic_on_a_poisson_slice() {
        let o = order(2.0);
        let src = Source::from_catalog(&entry(o, "chi_12").unwrap()).unwrap();
        let u = |x: f64, t: f64| extension_value(o, &src, x, t).unwrap_or(f64::NAN);
        let slope =
            residual_convergence_order(o, u, point(1.5, 0.8), &[0.4, 0.2, 0.1, 0.05]).unwrap();
        assert!(slope >= 1.8, "Poisson slice residual slope {slope}");
    }

    #[test]
    fn harmonic_absolute_values_pass_the_subharmonicity_probe() {
        let o = order(2.0);
        let balls = random_balls(0xB5, 20, (0.4, 3.0), (-2.0, 2.0), (0.2, 1.2), None).unwrap();
        assert_eq!(balls.len(), 20);
        let u = |p: HalfPlanePoint| 2.0 * p.x * p.x - 3.0 / p.x;
        let report = subharmonic_check(o, u, &balls, 8, 96, 1e-6).unwrap();
        assert_eq!(report.violations, 0, "worst gap {:.3e}", report.worst_gap);

        // Reproducibility of the seeded sampler.
        let again = random_balls(0xB5, 20, (0.4, 3.0), (-2.0, 2.0), (0.2, 1.2), None).unwrap();
        for (a, b) in balls.iter().zip(&again) {
            assert_eq!(a.center(), b.center());
            assert_eq!(a.radius(), b.radius());
        }
    }

    #[test]
    fn poisson_slice_passes_the_subharmonicity_probe() {
        let o = order(2.0);
        let src = Source::from_catalog(&entry(o, "bump").unwrap()).unwrap();
        let balls =
            random_balls(17, 6, (0.8, 1.8), (1.0, 2.0), (0.2, 0.4), Some(0.05)).unwrap();
        let u = |p: HalfPlanePoint| extension_value(o, &src, p.x, p.t).unwrap_or(f64::NAN);
        let report = subharmonic_check(o, u, &balls, 6, 48, 1e-6).unwrap();
        assert_eq!(report.violations, 0, "worst gap {:.3e}", report.worst_gap);
    }
}
