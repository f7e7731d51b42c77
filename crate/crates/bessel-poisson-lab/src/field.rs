//! Poisson extensions of boundary data: pointwise evaluation and full fields.
//!
//! A [`Source`] is boundary data as a closure plus a decay tag and breakpoint
//! hints. [`extension_value`] and friends evaluate `u(x, t) = ∫ P(x,y,t) f(y) dy`
//! and its `t`- and radial derivatives by adaptive quadrature against the
//! kernel — each call resolves the kernel's concentration near `y ≈ x` at
//! scale `t`, so accuracy does not hinge on any fixed sampling of `f`. This is
//! the *direct* route; it handles rough data (jumps, growth) that the spectral
//! route refuses.
//!
//! [`SolutionField`] assembles `u`, `∂_t u`, and `D_λ u` on an `(x, t)` grid,
//! either directly (adaptive per point, parallelized) or through a
//! [`SpectralPipeline`](crate::hankel::SpectralPipeline). The derivative
//! matrices come from the kernels' own differentiated representations — never
//! from differencing `u` — which is what the finite-difference consistency
//! tests here validate.
//!
//! Also here, because they are statements about extensions rather than about
//! kernels: the semigroup composition check (`u(·, s+t)` against the
//! extension of a slice `u(·, t)` by height `s`), the large-`t` decay-rate
//! probe, and the square-function norm identity
//! `∫₀^∞ ‖t D_λ u(·,t)‖² dt/t = ¼ ‖f‖²`.

use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;

use crate::catalog::{CatalogEntry, SourceDecay};
use crate::grid::{GridFunction, RadialGrid};
use crate::hankel::SpectralPipeline;
use crate::kernels;
use crate::quadrature::{integrate_semi_infinite, QuadratureSpec, TailPolicy};
use crate::specfun::BesselOrder;
use crate::{LabError, Result};

/// Relative tolerance for kernel evaluations inside field quadratures
/// (two orders looser than the outer quadrature target, so kernel noise
/// never drives the adaptive subdivision).
const FIELD_KERNEL_RTOL: f64 = 1e-9;

fn field_quad_spec(hints: Vec<f64>) -> QuadratureSpec {
    QuadratureSpec {
        abs_tol: 1e-12,
        rel_tol: 1e-7,
        max_subdivisions: 2000,
        singularity_hints: hints,
    }
}

/// Boundary data for the extension: evaluation closure, decay tag, and the
/// points where the function is not smooth.
#[derive(Clone)]
pub struct Source {
    name: String,
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    decay: SourceDecay,
    breakpoints: Vec<f64>,
}

impl std::fmt::Debug for Source {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Source")
            .field("name", &self.name)
            .field("decay", &self.decay)
            .field("breakpoints", &self.breakpoints)
            .finish()
    }
}

impl Source {
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        decay: SourceDecay,
        breakpoints: Vec<f64>,
    ) -> Self {
        Source {
            name: name.into(),
            f: Arc::new(f),
            decay,
            breakpoints,
        }
    }

    /// Wrap a boundary catalog entry (errors for the density entry).
    pub fn from_catalog(entry: &CatalogEntry) -> Result<Self> {
        let f = entry.boundary_fn()?;
        Ok(Source {
            name: entry.name.to_string(),
            f: Arc::new(move |y| f(y)),
            decay: entry.decay().expect("boundary entries carry decay"),
            breakpoints: entry.breakpoints.to_vec(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, y: f64) -> f64 {
        (self.f)(y)
    }

    pub fn decay(&self) -> SourceDecay {
        self.decay
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Tail policy for `∫ (kernel) · f dy`: the kernel itself decays like
    /// `y^{−λ−2}`, and the source's own decay (or growth) shifts the exponent.
    fn extension_tail(&self, order: BesselOrder) -> TailPolicy {
        let lambda = order.lambda();
        match self.decay {
            SourceDecay::CompactSupport { end } => TailPolicy::truncate_at(end),
            SourceDecay::PowerLaw { exponent } => TailPolicy::power_decay(exponent + lambda + 2.0),
            // log growth eats into the kernel decay by less than any power.
            SourceDecay::LogGrowth => TailPolicy::power_decay(lambda + 1.8),
        }
    }

    /// Quadrature hints: the kernel concentrates at `y ≈ x` on scale `t`,
    /// and the source contributes its breakpoints.
    fn extension_hints(&self, x: f64, t: f64) -> Vec<f64> {
        let mut hints = vec![x, (x - 2.0 * t).max(0.5 * x), x + 2.0 * t];
        hints.extend_from_slice(&self.breakpoints);
        hints.retain(|h| *h > 0.0);
        hints
    }

    /// Grid for sampling this source when feeding the spectral route. Panel
    /// edges land on multiples of 1/8, which contains every catalog breakpoint.
    pub fn sample_grid(&self) -> Result<RadialGrid> {
        let end = match self.decay {
            SourceDecay::CompactSupport { end } => end,
            _ => 40.0,
        };
        let panels = ((end / 0.125).round() as usize).max(8);
        RadialGrid::gauss_panels(0.0, end, panels, 8)
    }
}

#[derive(Debug, Clone, Copy)]
enum KernelKind {
    Value,
    DtValue,
    DlambdaValue,
}

fn extension_core(order: BesselOrder, src: &Source, x: f64, t: f64, kind: KernelKind) -> Result<f64> {
    if !(x > 0.0 && t > 0.0) {
        return Err(LabError::domain(format!(
            "extension evaluation needs x > 0 and t > 0, got x={x}, t={t}"
        )));
    }
    let integrand = |y: f64| {
        let k = match kind {
            KernelKind::Value => kernels::poisson_kernel_tol(order, x, y, t, FIELD_KERNEL_RTOL),
            KernelKind::DtValue => kernels::dt_poisson_kernel_tol(order, x, y, t, FIELD_KERNEL_RTOL),
            KernelKind::DlambdaValue => {
                kernels::dx_lambda_poisson_kernel_tol(order, x, y, t, FIELD_KERNEL_RTOL)
            }
        };
        k.map(|v| v * src.eval(y)).unwrap_or(f64::NAN)
    };
    let spec = field_quad_spec(src.extension_hints(x, t));
    let tail = src.extension_tail(order);
    Ok(integrate_semi_infinite(integrand, 0.0, &tail, &spec)?.value)
}

/// `u(x, t) = ∫₀^∞ P(x,y,t) f(y) dy` by adaptive quadrature.
pub fn extension_value(order: BesselOrder, src: &Source, x: f64, t: f64) -> Result<f64> {
    extension_core(order, src, x, t, KernelKind::Value)
}

/// `∂_t u(x, t)`, integrating the differentiated kernel.
pub fn extension_dt(order: BesselOrder, src: &Source, x: f64, t: f64) -> Result<f64> {
    extension_core(order, src, x, t, KernelKind::DtValue)
}

/// `D_λ u(x, t)`, integrating the differentiated kernel.
pub fn extension_dlambda(order: BesselOrder, src: &Source, x: f64, t: f64) -> Result<f64> {
    extension_core(order, src, x, t, KernelKind::DlambdaValue)
}

/// How a [`SolutionField`] is assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldMode {
    /// Adaptive kernel quadrature per grid point; handles rough data.
    Direct,
    /// Transform-damp-transform via bandlimited coefficients; smooth data only.
    Spectral,
}

impl FromStr for FieldMode {
    type Err = LabError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(FieldMode::Direct),
            "spectral" => Ok(FieldMode::Spectral),
            other => Err(LabError::Config(format!(
                "unknown field mode {other:?} (expected \"direct\" or \"spectral\")"
            ))),
        }
    }
}

/// The extension and its first derivatives on a tensor `(x, t)` grid.
/// Matrices are row-major with time as the slow index.
#[derive(Debug, Clone)]
pub struct SolutionField {
    order: BesselOrder,
    x_grid: RadialGrid,
    t_nodes: Vec<f64>,
    u: Vec<f64>,
    du_dt: Vec<f64>,
    dlambda_u: Vec<f64>,
    source_name: String,
    mode: FieldMode,
}

impl SolutionField {
    pub fn build(
        order: BesselOrder,
        src: &Source,
        x_grid: RadialGrid,
        t_nodes: Vec<f64>,
        mode: FieldMode,
    ) -> Result<Self> {
        if t_nodes.is_empty() || t_nodes.windows(2).any(|p| !(p[0] < p[1])) || !(t_nodes[0] > 0.0) {
            return Err(LabError::domain(
                "time nodes must be strictly increasing and positive".to_string(),
            ));
        }
        let (u, du_dt, dlambda_u) = match mode {
            FieldMode::Direct => {
                let nx = x_grid.len();
                let pairs: Vec<(usize, usize)> = (0..t_nodes.len())
                    .flat_map(|it| (0..nx).map(move |ix| (it, ix)))
                    .collect();
                let rows: Vec<(f64, f64, f64)> = pairs
                    .par_iter()
                    .map(|&(it, ix)| -> Result<(f64, f64, f64)> {
                        let x = x_grid.nodes()[ix];
                        let t = t_nodes[it];
                        Ok((
                            extension_value(order, src, x, t)?,
                            extension_dt(order, src, x, t)?,
                            extension_dlambda(order, src, x, t)?,
                        ))
                    })
                    .collect::<Result<_>>()?;
                let mut u = Vec::with_capacity(rows.len());
                let mut dt = Vec::with_capacity(rows.len());
                let mut dl = Vec::with_capacity(rows.len());
                for (a, b, c) in rows {
                    u.push(a);
                    dt.push(b);
                    dl.push(c);
                }
                (u, dt, dl)
            }
            FieldMode::Spectral => {
                let sampled = GridFunction::sample(
                    src.sample_grid()?,
                    |y| src.eval(y),
                    TailPolicy::truncate_at(src.sample_grid()?.max_node()),
                )?;
                let pipe = SpectralPipeline::new(order, &sampled, x_grid.clone())?;
                let n = x_grid.len() * t_nodes.len();
                let mut u = Vec::with_capacity(n);
                let mut dt = Vec::with_capacity(n);
                let mut dl = Vec::with_capacity(n);
                for &t in &t_nodes {
                    u.extend_from_slice(pipe.field_at(t)?.values());
                    dt.extend_from_slice(pipe.dt_at(t)?.values());
                    dl.extend_from_slice(pipe.dlambda_at(t)?.values());
                }
                (u, dt, dl)
            }
        };
        Ok(SolutionField {
            order,
            x_grid,
            t_nodes,
            u,
            du_dt,
            dlambda_u,
            source_name: src.name().to_string(),
            mode,
        })
    }

    pub fn order(&self) -> BesselOrder {
        self.order
    }

    pub fn x_grid(&self) -> &RadialGrid {
        &self.x_grid
    }

    pub fn t_nodes(&self) -> &[f64] {
        &self.t_nodes
    }

    pub fn source_name(&self) -> &str {
        &self.source_name
    }

    pub fn mode(&self) -> FieldMode {
        self.mode
    }

    fn idx(&self, it: usize, ix: usize) -> usize {
        it * self.x_grid.len() + ix
    }

    pub fn u_at(&self, it: usize, ix: usize) -> f64 {
        self.u[self.idx(it, ix)]
    }

    pub fn du_dt_at(&self, it: usize, ix: usize) -> f64 {
        self.du_dt[self.idx(it, ix)]
    }

    pub fn dlambda_at(&self, it: usize, ix: usize) -> f64 {
        self.dlambda_u[self.idx(it, ix)]
    }

    pub fn u_row(&self, it: usize) -> &[f64] {
        let nx = self.x_grid.len();
        &self.u[it * nx..(it + 1) * nx]
    }

    /// `|t ∇_λ u|²` at a grid point (time derivative plus radial derivative).
    pub fn gradient_density(&self, it: usize, ix: usize) -> f64 {
        let t = self.t_nodes[it];
        let a = self.du_dt_at(it, ix);
        let b = self.dlambda_at(it, ix);
        t * t * (a * a + b * b)
    }

    /// `|t ∂_t u|²` at a grid point.
    pub fn dt_density(&self, it: usize, ix: usize) -> f64 {
        let t = self.t_nodes[it];
        let a = self.du_dt_at(it, ix);
        t * t * a * a
    }
}

/// Both sides of the semigroup composition at one probe.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct SemigroupReport {
    /// `u(x, s + t)` evaluated in one step.
    pub direct: f64,
    /// The slice `u(·, t)` extended by height `s`, evaluated at `x`.
    pub composed: f64,
}

impl SemigroupReport {
    pub fn abs_error(&self) -> f64 {
        (self.direct - self.composed).abs()
    }

    pub fn rel_error(&self) -> f64 {
        self.abs_error() / self.direct.abs().max(1e-300)
    }
}

/// Compare `u(x, s+t)` with the extension of the slice `u(·, t)` by `s`.
/// The inner slice values are themselves adaptive evaluations, so this
/// exercises the full composition numerically.
pub fn semigroup_check(order: BesselOrder, src: &Source, x: f64, s: f64, t: f64) -> Result<SemigroupReport> {
    let direct = extension_value(order, src, x, s + t)?;
    let lambda = order.lambda();
    let integrand = |z: f64| {
        let inner = extension_value(order, src, z, t);
        let kernel = kernels::poisson_kernel_tol(order, x, z, s, FIELD_KERNEL_RTOL);
        match (inner, kernel) {
            (Ok(u), Ok(k)) => k * u,
            _ => f64::NAN,
        }
    };
    let mut hints = src.extension_hints(x, s + t);
    hints.push(x + s);
    let spec = QuadratureSpec {
        abs_tol: 1e-11,
        rel_tol: 1e-6,
        max_subdivisions: 2000,
        singularity_hints: hints,
    };
    // The slice decays at least like the kernel tail itself.
    let tail = TailPolicy::power_decay(lambda + 2.0);
    let composed = integrate_semi_infinite(integrand, 0.0, &tail, &spec)?.value;
    Ok(SemigroupReport { direct, composed })
}

/// Semigroup composition against the homogeneous solution: the extension of
/// `y^λ` is `x^λ` at every height, so composing a *numerically computed*
/// slice with a second extension must return `x^λ`.
pub fn semigroup_power_identity(order: BesselOrder, x: f64, s: f64, t: f64) -> Result<SemigroupReport> {
    let lambda = order.lambda();
    let integrand = |z: f64| {
        let inner = kernels::kernel_moment(order, z, t);
        let kernel = kernels::poisson_kernel_tol(order, x, z, s, FIELD_KERNEL_RTOL);
        match (inner, kernel) {
            (Ok(u), Ok(k)) => k * u,
            _ => f64::NAN,
        }
    };
    let spec = QuadratureSpec {
        abs_tol: 1e-13 * x.powf(lambda),
        rel_tol: 1e-8,
        max_subdivisions: 2000,
        singularity_hints: vec![(x - s).max(0.5 * x), x, x + s],
    };
    // Kernel decay y^{−λ−2} against growth y^{λ} leaves an exact y^{−2} tail.
    let tail = TailPolicy::power_decay(2.0);
    let composed = integrate_semi_infinite(integrand, 0.0, &tail, &spec)?.value;
    Ok(SemigroupReport {
        direct: x.powf(lambda),
        composed,
    })
}

/// Least-squares slope of `log u(x, ·)` against `log t` over the given times;
/// far beyond the data's support the extension decays like `t^{−(2λ+1)}`.
pub fn decay_exponent(order: BesselOrder, src: &Source, x: f64, ts: &[f64]) -> Result<f64> {
    if ts.len() < 2 {
        return Err(LabError::domain("decay fit needs at least two times".to_string()));
    }
    let mut pts = Vec::with_capacity(ts.len());
    for &t in ts {
        let u = extension_value(order, src, x, t)?;
        if !(u > 0.0) {
            return Err(LabError::UnstableEstimate(format!(
                "extension value {u} at t={t} is not positive; decay fit undefined"
            )));
        }
        pts.push((t.ln(), u.ln()));
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    Ok((n * sxy - sx * sy) / (n * sxx - sx * sx))
}

/// Outcome of the square-function norm identity experiment.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct GFunctionReport {
    /// `∫₀^∞ ‖t D_λ u(·,t)‖² dt/t` over the x-window.
    pub g_norm_sq: f64,
    /// `‖f‖²` on the input grid.
    pub input_norm_sq: f64,
}

impl GFunctionReport {
    /// Should be ¼ for any admissible input.
    pub fn ratio(&self) -> f64 {
        self.g_norm_sq / self.input_norm_sq
    }
}

/// Evaluate `∫₀^∞ ‖t D_λ u(·,t)‖²_{L²(dx)} dt/t` against `¼‖f‖²` through the
/// spectral pipeline: the radial derivative field is swept over a panel
/// quadrature in `t` (with an analytic `O(t²)` head below the first panel)
/// and integrated in `x` over a window wide enough to hold the energy.
pub fn g_function_identity(order: BesselOrder, f: &GridFunction) -> Result<GFunctionReport> {
    // 40 is wide enough that the neglected x-tail of ‖g‖² is ~1e-8 relative,
    // yet narrow enough to leave a spectral window (ξ ≤ 12.5) that holds
    // modulated Gaussian-mode inputs with room to spare.
    let out = RadialGrid::gauss_panels(0.0, 40.0, 80, 8)?;
    let t_rule = RadialGrid::gauss_log_panels(1e-3, 60.0, 36, 6)?;
    let pipe = SpectralPipeline::new(order, f, out.clone())?;

    let mut g_sq = vec![0.0; out.len()];
    for (&t, &wt) in t_rule.nodes().iter().zip(t_rule.weights()) {
        let dl = pipe.dlambda_at(t)?;
        for (gx, &v) in g_sq.iter_mut().zip(dl.values()) {
            *gx += wt * t * v * v;
        }
    }
    // Head [0, t_min]: the integrand is t·|D_λ u|² with D_λ u → D_λ f, so the
    // missing piece is ½ t_min² |D_λ u(x, 0)|² up to O(t_min⁴).
    let t_min = 1e-3;
    let dl0 = pipe.dlambda_at(0.0)?;
    for (gx, &v) in g_sq.iter_mut().zip(dl0.values()) {
        *gx += 0.5 * t_min * t_min * v * v;
    }

    let g_norm_sq = out.integrate(&g_sq);
    let input_norm_sq = f.norm_l2().powi(2);
    Ok(GFunctionReport {
        g_norm_sq,
        input_norm_sq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::grid::geometric_nodes;
    use approx::assert_relative_eq;

    fn entry_source(lambda: f64, name: &str) -> Source {
        let order = BesselOrder::new(lambda).unwrap();
        Source::from_catalog(&catalog::entry(order, name).unwrap()).unwrap()
    }

    #[test]
    fn direct_and_spectral_fields_agree_for_smooth_data() {
        let order = BesselOrder::new(2.0).unwrap();
        let src = entry_source(2.0, "bump");
        // x capped at 5 keeps the spectral window wide (ξ ≤ 100), which the
        // bump's stretched-exponential spectrum needs to pass the tail check.
        let x_grid = RadialGrid::gauss_log_panels(0.5, 5.0, 8, 4).unwrap();
        let t_nodes = vec![0.3, 1.0, 3.0];
        let direct =
            SolutionField::build(order, &src, x_grid.clone(), t_nodes.clone(), FieldMode::Direct).unwrap();
        let spectral =
            SolutionField::build(order, &src, x_grid, t_nodes.clone(), FieldMode::Spectral).unwrap();
        let mut worst: f64 = 0.0;
        for it in 0..t_nodes.len() {
            for ix in 0..direct.x_grid().len() {
                for (a, b) in [
                    (direct.u_at(it, ix), spectral.u_at(it, ix)),
                    (direct.du_dt_at(it, ix), spectral.du_dt_at(it, ix)),
                    (direct.dlambda_at(it, ix), spectral.dlambda_at(it, ix)),
                ] {
                    worst = worst.max((a - b).abs() / a.abs().max(1e-2));
                }
            }
        }
        assert!(worst < 1e-5, "direct vs spectral worst relative gap {worst}");
    }

    #[test]
    fn derivative_evaluators_match_finite_differences() {
        let order = BesselOrder::new(1.2).unwrap();
        let src = entry_source(1.2, "chi_12");
        let (x, t) = (1.4, 0.8);
        let u = |xx: f64, tt: f64| extension_value(order, &src, xx, tt).unwrap();

        // Richardson pairs at h and h/2 must shrink at order ≥ 1.8.
        let dt_exact = extension_dt(order, &src, x, t).unwrap();
        let fd = |h: f64| (u(x, t + h) - u(x, t - h)) / (2.0 * h);
        let (e1, e2) = ((fd(0.08) - dt_exact).abs(), (fd(0.04) - dt_exact).abs());
        assert!(e2 < e1, "t-derivative FD errors should shrink: {e1} vs {e2}");
        assert!(
            (e1 / e2).log2() > 1.8,
            "t-derivative observed order {} too low",
            (e1 / e2).log2()
        );

        // D_λ u = ∂_x u − (λ/x) u.
        let dl_exact = extension_dlambda(order, &src, x, t).unwrap();
        let dl_fd = |h: f64| {
            (u(x + h, t) - u(x - h, t)) / (2.0 * h) - order.lambda() / x * u(x, t)
        };
        let (e1, e2) = ((dl_fd(0.08) - dl_exact).abs(), (dl_fd(0.04) - dl_exact).abs());
        assert!(
            (e1 / e2).log2() > 1.8,
            "radial derivative observed order {} too low",
            (e1 / e2).log2()
        );
    }

    #[test]
    fn semigroup_composes_for_bounded_catalog_data() {
        let order = BesselOrder::new(2.0).unwrap();
        let src = entry_source(2.0, "chi_12");
        let report = semigroup_check(order, &src, 1.5, 0.7, 0.7).unwrap();
        assert!(
            report.abs_error() <= 1e-4 * report.direct.abs().max(1.0),
            "semigroup gap {} (direct {}, composed {})",
            report.abs_error(),
            report.direct,
            report.composed,
        );
    }

    #[test]
    fn semigroup_power_identity_is_sharp() {
        for lambda in [1.2, 2.0] {
            let order = BesselOrder::new(lambda).unwrap();
            let report = semigroup_power_identity(order, 1.7, 0.6, 1.1).unwrap();
            assert!(
                report.rel_error() <= 1e-6,
                "λ={lambda}: relative gap {}",
                report.rel_error()
            );
        }
    }

    #[test]
    fn far_field_decay_rate_matches_order() {
        let order = BesselOrder::new(1.2).unwrap();
        let src = entry_source(1.2, "chi_12");
        let ts = geometric_nodes(30.0, 120.0, 5).unwrap();
        let slope = decay_exponent(order, &src, 0.7, &ts).unwrap();
        let expected = -(2.0 * order.lambda() + 1.0);
        assert_relative_eq!(slope, expected, max_relative = 0.02);
    }

    #[test]
    fn g_function_ratio_is_one_quarter() {
        let order = BesselOrder::new(2.0).unwrap();
        let grid = RadialGrid::gauss_panels(0.0, 12.0, 96, 8).unwrap();
        let f = GridFunction::sample(
            grid,
            |y| y.powf(2.0) * (-0.5 * y * y).exp() * (1.0 + 0.5 * y.cos()),
            TailPolicy::exponential_decay(1.0),
        )
        .unwrap();
        let report = g_function_identity(order, &f).unwrap();
        assert_relative_eq!(report.ratio(), 0.25, max_relative = 1e-3);
    }

    #[test]
    fn spectral_mode_rejects_rough_data() {
        let order = BesselOrder::new(2.0).unwrap();
        let src = entry_source(2.0, "chi_12");
        let x_grid = RadialGrid::gauss_log_panels(0.5, 8.0, 4, 4).unwrap();
        let err = SolutionField::build(order, &src, x_grid, vec![0.5], FieldMode::Spectral).unwrap_err();
        assert!(matches!(err, LabError::RejectedInput(_)), "got {err}");
    }

    #[test]
    fn field_mode_parses_from_config_strings() {
        assert_eq!(FieldMode::from_str("direct").unwrap(), FieldMode::Direct);
        assert_eq!(FieldMode::from_str("spectral").unwrap(), FieldMode::Spectral);
        assert!(FieldMode::from_str("magic").is_err());
    }
}
