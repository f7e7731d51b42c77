//! Special functions underpinning the laboratory: the gamma function, Bessel
//! functions of the first kind `J_ν` of real nonnegative order, and Legendre
//! functions `P_β` on `[1, ∞)`.
//!
//! Everything here is self-contained (no other crate modules) because every
//! other module sits on top of it: the Poisson kernel normalization uses
//! `Γ`, the Hankel transform uses `J_{λ−1/2}`, and the hyperbolic mean-value
//! normalization cross-checks against `P_{λ−1}(cosh r)`.

use crate::{LabError, Result};

/// Order parameter `λ > 0` of the Bessel operator `B_λ = d²/dx² − λ(λ−1)/x²`.
///
/// The newtype guarantees positivity once at construction so downstream
/// formulas can use `lambda()` without re-validating.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselOrder {
    lambda: f64,
}

impl BesselOrder {
    /// Validates `λ > 0` (finite).
    pub fn new(lambda: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda <= 0.0 {
            return Err(LabError::domain(format!(
                "Bessel order must be a finite positive number, got {lambda}"
            )));
        }
        Ok(BesselOrder { lambda })
    }

    /// The raw order `λ`.
    pub fn lambda(self) -> f64 {
        self.lambda
    }

    /// Coefficient `λ(λ−1)` of the inverse-square potential in `B_λ` and in
    /// the Weinstein operator `L_λ`.
    pub fn potential_coefficient(self) -> f64 {
        self.lambda * (self.lambda - 1.0)
    }

    /// Hyperbolic-geometry exponent `α = (1 + |2λ−1|)/2` attached to the
    /// mean-value normalization of `L_λ`-harmonic functions.
    pub fn alpha(self) -> f64 {
        0.5 * (1.0 + (2.0 * self.lambda - 1.0).abs())
    }

    /// Whether the boundary-representation machinery (kernel
    /// `K_x(t,s) = x^{2λ−1}/((t−s)²+x²)^λ` with finite total mass) applies;
    /// it requires `λ > 1`.
    pub fn representation_valid(self) -> bool {
        self.lambda > 1.0
    }

    /// Order `λ − 1/2` of the Bessel function inside the associated Hankel
    /// transform kernel `√(xy) J_{λ−1/2}(xy)`.
    pub fn hankel_order(self) -> f64 {
        self.lambda - 0.5
    }
}

// Lanczos coefficients (g = 7, n = 9).
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function `Γ(x)` for positive `x` (and negative non-integer `x` via
/// the reflection formula). Relative error ≤ 1e-12 on the positive axis up
/// to the overflow threshold `x ≈ 171.6`.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(LabError::domain(format!("gamma argument must be finite, got {x}")));
    }
    if x <= 0.0 && x == x.floor() {
        return Err(LabError::domain(format!("gamma has a pole at non-positive integer {x}")));
    }
    if x < 0.5 {
        // Reflection: Γ(x) Γ(1−x) = π / sin(πx).
        let s = (std::f64::consts::PI * x).sin();
        return Ok(std::f64::consts::PI / (s * gamma_fn(1.0 - x)?));
    }
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (x - 1.0 + i as f64);
    }
    let t = x + LANCZOS_G - 0.5;
    // Split the power so intermediates stay inside f64 range up to x ≈ 171.
    let p = t.powf(0.5 * (x - 0.5));
    let value = (2.0 * std::f64::consts::PI).sqrt() * acc * p * (-t).exp() * p;
    if !value.is_finite() {
        return Err(LabError::domain(format!("gamma({x}) overflows f64")));
    }
    Ok(value)
}

/// Bessel function of the first kind `J_ν(z)`, `ν ≥ −1`, `z ≥ 0` (orders in
/// `[−1, 0)` exist so three-term recurrence tests can reach below `ν = 0`).
///
/// Three regimes, each used where it is provably well conditioned:
/// * power series (compensated summation) for `z ≤ max(12, 2ν)`;
/// * large-argument asymptotic expansion for `z ≥ max(15, ν²/2)`;
/// * in between, downward recurrence in the order, seeded by the series at an
///   order ≥ `z + 8` where it has no cancellation.
///
/// Absolute error ≤ 1e-12 for `z ≤ 500` at the moderate orders used by the
/// lab (measured worst case 6e-13 over `ν ∈ [0, 6]`).
pub fn bessel_j(nu: f64, z: f64) -> Result<f64> {
    if !nu.is_finite() || nu < -1.0 {
        return Err(LabError::domain(format!("Bessel order must satisfy ν ≥ −1, got {nu}")));
    }
    if !z.is_finite() || z < 0.0 {
        return Err(LabError::domain(format!("Bessel argument must satisfy z ≥ 0, got {z}")));
    }
    if nu == -1.0 {
        // Integer reflection J_{−1} = −J_1 avoids the Γ(0) pole in the series.
        return Ok(-bessel_j(1.0, z)?);
    }
    if z == 0.0 {
        if nu < 0.0 {
            return Err(LabError::Divergent(format!("J_{nu}(z) diverges as z → 0 for negative order")));
        }
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    if z <= f64::max(12.0, 2.0 * nu) {
        return bessel_j_series(nu, z);
    }
    if z >= f64::max(15.0, 0.5 * nu * nu) {
        return Ok(bessel_j_asymptotic(nu, z));
    }
    bessel_j_backward(nu, z)
}

/// Ascending power series `J_ν(z) = Σ_k (−1)^k (z/2)^{ν+2k} / (k! Γ(ν+k+1))`
/// with Kahan-compensated summation to tame the alternating cancellation.
fn bessel_j_series(nu: f64, z: f64) -> Result<f64> {
    let half = 0.5 * z;
    // Leading term (z/2)^ν / Γ(ν+1); for large ν at small z this underflows
    // harmlessly to zero.
    let mut term = half.powf(nu) / gamma_fn(nu + 1.0)?;
    let neg_quarter_z2 = -half * half;
    let mut sum = term;
    let mut comp = 0.0_f64;
    for k in 1..400 {
        let kf = k as f64;
        term *= neg_quarter_z2 / (kf * (nu + kf));
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if term.abs() < 1e-18 * sum.abs() + 1e-300 {
            return Ok(sum);
        }
    }
    Err(LabError::Convergence {
        context: format!("Bessel series J_{nu}({z})"),
        value: sum,
        estimate: term.abs(),
    })
}

/// Hankel's large-argument expansion, truncated at the smallest term.
fn bessel_j_asymptotic(nu: f64, z: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let omega = z - nu * std::f64::consts::FRAC_PI_2 - std::f64::consts::FRAC_PI_4;
    let mut cos_sum = 0.0; // Σ (−1)^j a_{2j} z^{−2j}
    let mut sin_sum = 0.0; // Σ (−1)^j a_{2j+1} z^{−2j−1}
    let mut term = 1.0_f64;
    let mut prev = f64::INFINITY;
    let mut cos_sign = 1.0;
    let mut sin_sign = 1.0;
    for k in 0..60usize {
        if k >= 1 {
            let odd = (2 * k - 1) as f64;
            term *= (mu - odd * odd) / (8.0 * k as f64 * z);
        }
        if term.abs() > prev {
            break; // asymptotic tail started growing: optimal truncation
        }
        if k % 2 == 0 {
            cos_sum += cos_sign * term;
            cos_sign = -cos_sign;
        } else {
            sin_sum += sin_sign * term;
            sin_sign = -sin_sign;
        }
        prev = term.abs();
    }
    (2.0 / (std::f64::consts::PI * z)).sqrt() * (omega.cos() * cos_sum - omega.sin() * sin_sum)
}

/// Downward recurrence `J_{s−1}(z) = (2s/z) J_s(z) − J_{s+1}(z)` from a start
/// order ≥ `z + 8`, where the series summation has no cancellation. Stable in
/// the downward direction because `J` dominates the second solution there.
fn bessel_j_backward(nu: f64, z: f64) -> Result<f64> {
    let steps = (z + 8.0 - nu).ceil().max(1.0);
    let top = nu + steps;
    let mut above = bessel_j_series(top + 1.0, z)?;
    let mut current = bessel_j_series(top, z)?;
    let mut order = top;
    for _ in 0..steps as usize {
        let below = (2.0 * order / z) * current - above;
        above = current;
        current = below;
        order -= 1.0;
    }
    Ok(current)
}

/// Legendre function `P_β(x)` for `x ≥ 1` and real degree `β`, via the
/// integral representation
/// `P_β(x) = (1/2π) ∫₀^{2π} (x + √(x²−1) cos θ)^β dθ`.
///
/// The integrand is smooth and 2π-periodic, so the periodic trapezoid rule
/// converges geometrically; nodes are doubled until two successive values
/// agree to ~1e-13 relative. Relative error ≤ 1e-10 over the lab's range.
pub fn legendre_p(beta: f64, x: f64) -> Result<f64> {
    if !beta.is_finite() || !x.is_finite() {
        return Err(LabError::domain(format!("legendre arguments must be finite, got β={beta}, x={x}")));
    }
    if x < 1.0 {
        return Err(LabError::domain(format!("legendre argument must satisfy x ≥ 1, got {x}")));
    }
    if x == 1.0 {
        return Ok(1.0);
    }
    let radius = (x * x - 1.0).sqrt();
    let eval = |n: usize| -> f64 {
        let mut sum = 0.0;
        for k in 0..n {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            sum += (x + radius * theta.cos()).powf(beta);
        }
        sum / n as f64
    };
    let mut n = 32;
    let mut value = eval(n);
    while n <= 1 << 15 {
        n *= 2;
        let next = eval(n);
        let change = (next - value).abs();
        value = next;
        if change <= 1e-13 * value.abs().max(1e-300) {
            return Ok(value);
        }
    }
    Err(LabError::Convergence {
        context: format!("Legendre P_{beta}({x}) trapezoid doubling"),
        value,
        estimate: f64::NAN,
    })
}
