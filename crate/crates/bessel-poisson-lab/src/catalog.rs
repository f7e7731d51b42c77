//! Named test inputs with frozen expectations.
//!
//! Each entry is either a boundary function on the half-line or a control
//! density on the upper half-plane, tagged with what the experiments should
//! conclude about it: does it have finite odd-extension oscillation norm, and
//! is its square-function measure expected to satisfy the Carleson box
//! condition? The tags make the catalog double as a verdict table — positive
//! examples where both hold, and negative controls engineered to fail.
//!
//! The boundary entries:
//!
//! * `chi_12` — indicator of `(1, 2)`: bounded with jumps; both verdicts hold.
//! * `bump` — `C^∞` bump on `(0.5, 2.5)`: the smooth positive example, and the
//!   only rough-free entry the spectral route accepts.
//! * `rational_odd` — `x/(1+x²)`: bounded, algebraic tail `~1/x`.
//! * `power_window` — `x^λ` tamed by a rational window at `x = 8`: bounded,
//!   carries the operator's homogeneity degree near the origin.
//! * `log_growth` — `log(e+x)`: the classic unbounded-oscillation control.
//!   Its odd extension jumps by `2` at the origin while growing without bound,
//!   so the size condition on intervals `(0, b)` fails as `b → ∞`; by the
//!   equivalence theorem its square-function measure must fail the box
//!   condition too.
//!
//! The density entry `lebesgue_control` is `t·dx dt/t = dx dt`: plain area
//! measure. Box mass over `I × (0, |I|)` is `|I|²`, so the Carleson ratio
//! grows linearly in the box side — a density-level negative control whose
//! log–log ratio-vs-size slope is exactly `1`.

use std::sync::Arc;

use crate::grid::{GridFunction, RadialGrid};
use crate::quadrature::TailPolicy;
use crate::specfun::BesselOrder;
use crate::{LabError, Result};

/// How a boundary function behaves past any finite grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SourceDecay {
    /// Identically zero beyond `end`.
    CompactSupport { end: f64 },
    /// `|f(x)| ~ x^{−exponent}` as `x → ∞`.
    PowerLaw { exponent: f64 },
    /// `|f(x)| ~ log x` as `x → ∞` (grows, but slower than any power).
    LogGrowth,
}

pub type BoundaryFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type DensityFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// What kind of object an entry is.
#[derive(Clone)]
pub enum EntryKind {
    /// A function of `x` on the half-line, fed through the Poisson extension.
    BoundaryFunction { f: BoundaryFn, decay: SourceDecay },
    /// A density `d(x, t)` on the upper half-plane, measured directly against
    /// `dx dt / t` — no extension involved.
    ControlDensity { d: DensityFn },
}

impl std::fmt::Debug for EntryKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EntryKind::BoundaryFunction { decay, .. } => {
                f.debug_struct("BoundaryFunction").field("decay", decay).finish()
            }
            EntryKind::ControlDensity { .. } => f.debug_struct("ControlDensity").finish(),
        }
    }
}

/// A catalog entry: the object plus the verdicts the experiments should reach.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub kind: EntryKind,
    /// Finite odd-extension oscillation norm expected?
    pub expected_bmo_o: bool,
    /// Square-function (or intrinsic) measure expected to pass the box test?
    pub expected_carleson: bool,
    /// Locations where the function is not smooth (jumps, support edges);
    /// quadratures seed panel boundaries here.
    pub breakpoints: &'static [f64],
}

impl CatalogEntry {
    /// Evaluate a boundary entry at `x`; errors for the density entry.
    pub fn eval(&self, x: f64) -> Result<f64> {
        match &self.kind {
            EntryKind::BoundaryFunction { f, .. } => Ok(f(x)),
            EntryKind::ControlDensity { .. } => Err(LabError::domain(format!(
                "{} is a control density, not a boundary function",
                self.name
            ))),
        }
    }

    pub fn boundary_fn(&self) -> Result<BoundaryFn> {
        match &self.kind {
            EntryKind::BoundaryFunction { f, .. } => Ok(f.clone()),
            EntryKind::ControlDensity { .. } => Err(LabError::domain(format!(
                "{} is a control density, not a boundary function",
                self.name
            ))),
        }
    }

    pub fn decay(&self) -> Option<SourceDecay> {
        match &self.kind {
            EntryKind::BoundaryFunction { decay, .. } => Some(*decay),
            EntryKind::ControlDensity { .. } => None,
        }
    }

    pub fn control_density(&self) -> Result<DensityFn> {
        match &self.kind {
            EntryKind::ControlDensity { d } => Ok(d.clone()),
            EntryKind::BoundaryFunction { .. } => Err(LabError::domain(format!(
                "{} is a boundary function, not a control density",
                self.name
            ))),
        }
    }

    /// Tail policy for quadratures of the bare function over the half-line.
    pub fn tail_policy(&self) -> Option<TailPolicy> {
        self.decay().map(|d| match d {
            SourceDecay::CompactSupport { end } => TailPolicy::truncate_at(end),
            SourceDecay::PowerLaw { exponent } => TailPolicy::power_decay(exponent),
            // Growth has no standalone tail policy; callers must fold the
            // kernel decay in before integrating. Flag it loudly.
            SourceDecay::LogGrowth => TailPolicy::power_decay(0.0),
        })
    }

    /// Sample a boundary entry on a grid (tail policy from its decay tag).
    pub fn sample_on(&self, grid: RadialGrid) -> Result<GridFunction> {
        let f = self.boundary_fn()?;
        let tail = self
            .tail_policy()
            .expect("boundary entries always carry a decay tag");
        GridFunction::sample(grid, |x| f(x), tail)
    }
}

/// Smooth bump supported on `(center − width, center + width)`, height 1.
fn bump(x: f64, center: f64, width: f64) -> f64 {
    let s = (x - center) / width;
    if s.abs() < 1.0 {
        (1.0 - 1.0 / (1.0 - s * s)).exp()
    } else {
        0.0
    }
}

/// The full catalog for a given operator order (the power entry scales with it).
pub fn catalog(order: BesselOrder) -> Vec<CatalogEntry> {
    let lambda = order.lambda();
    vec![
        CatalogEntry {
            name: "chi_12",
            description: "indicator of the interval (1, 2)",
            kind: EntryKind::BoundaryFunction {
                f: Arc::new(|x| if (1.0..2.0).contains(&x) { 1.0 } else { 0.0 }),
                decay: SourceDecay::CompactSupport { end: 2.0 },
            },
            expected_bmo_o: true,
            expected_carleson: true,
            breakpoints: &[1.0, 2.0],
        },
        CatalogEntry {
            name: "bump",
            description: "smooth bump on (0.5, 2.5), height 1",
            kind: EntryKind::BoundaryFunction {
                f: Arc::new(|x| bump(x, 1.5, 1.0)),
                decay: SourceDecay::CompactSupport { end: 2.5 },
            },
            expected_bmo_o: true,
            expected_carleson: true,
            breakpoints: &[0.5, 2.5],
        },
        CatalogEntry {
            name: "rational_odd",
            description: "x / (1 + x²) — bounded with algebraic tail",
            kind: EntryKind::BoundaryFunction {
                f: Arc::new(|x| x / (1.0 + x * x)),
                decay: SourceDecay::PowerLaw { exponent: 1.0 },
            },
            expected_bmo_o: true,
            expected_carleson: true,
            breakpoints: &[],
        },
        CatalogEntry {
            name: "power_window",
            description: "x^λ damped by a rational window at x = 8",
            kind: EntryKind::BoundaryFunction {
                f: Arc::new(move |x: f64| {
                    x.powf(lambda) / (1.0 + (x / 8.0).powf(2.0 * lambda + 4.0))
                }),
                decay: SourceDecay::PowerLaw { exponent: lambda + 4.0 },
            },
            expected_bmo_o: true,
            expected_carleson: true,
            breakpoints: &[8.0],
        },
        CatalogEntry {
            name: "log_growth",
            description: "log(e + x) — unbounded odd-extension oscillation",
            kind: EntryKind::BoundaryFunction {
                f: Arc::new(|x| (std::f64::consts::E + x).ln()),
                decay: SourceDecay::LogGrowth,
            },
            expected_bmo_o: false,
            expected_carleson: false,
            breakpoints: &[],
        },
        CatalogEntry {
            name: "lebesgue_control",
            description: "density t (plain area measure dx dt); box ratio grows like the side",
            kind: EntryKind::ControlDensity {
                d: Arc::new(|_x, t| t),
            },
            expected_bmo_o: false,
            expected_carleson: false,
            breakpoints: &[],
        },
    ]
}

/// Look up one entry by name.
pub fn entry(order: BesselOrder, name: &str) -> Result<CatalogEntry> {
    catalog(order)
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| {
            let names: Vec<&str> = catalog(order).iter().map(|e| e.name).collect();
            LabError::Config(format!("unknown catalog entry {name:?}; known: {names:?}"))
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order() -> BesselOrder {
        BesselOrder::new(2.0).unwrap()
    }

    #[test]
    fn catalog_has_six_entries_with_unique_names() {
        let cat = catalog(order());
        assert_eq!(cat.len(), 6);
        let mut names: Vec<&str> = cat.iter().map(|e| e.name).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), 6);
    }

    #[test]
    fn compact_entries_vanish_outside_their_support() {
        for name in ["chi_12", "bump"] {
            let e = entry(order(), name).unwrap();
            let Some(SourceDecay::CompactSupport { end }) = e.decay() else {
                panic!("{name} should be compactly supported");
            };
            assert_eq!(e.eval(end + 0.1).unwrap(), 0.0);
            assert_eq!(e.eval(1e-3).unwrap(), 0.0, "{name} vanishes near the origin");
            assert!(e.eval(1.5).unwrap() > 0.0);
        }
    }

    #[test]
    fn bump_is_continuous_at_the_support_edge() {
        let e = entry(order(), "bump").unwrap();
        assert!(e.eval(2.4999).unwrap() < 1e-10);
        assert_eq!(e.eval(1.5).unwrap(), 1.0);
    }

    #[test]
    fn power_window_is_bounded_and_homogeneous_near_origin() {
        for lambda in [1.2, 3.5] {
            let ord = BesselOrder::new(lambda).unwrap();
            let e = entry(ord, "power_window").unwrap();
            // Near the origin the window is ≈ 1, so f(2x)/f(x) ≈ 2^λ.
            let ratio = e.eval(0.02).unwrap() / e.eval(0.01).unwrap();
            assert!((ratio - 2f64.powf(lambda)).abs() < 1e-3);
            // Window caps the growth: values stay finite and decay past 8.
            assert!(e.eval(8.0).unwrap().is_finite());
            assert!(e.eval(100.0).unwrap() < e.eval(8.0).unwrap());
        }
    }

    #[test]
    fn verdict_tags_match_design() {
        let cat = catalog(order());
        for e in &cat {
            let expected = match e.name {
                "log_growth" | "lebesgue_control" => (false, false),
                _ => (true, true),
            };
            assert_eq!((e.expected_bmo_o, e.expected_carleson), expected, "{}", e.name);
        }
    }

    #[test]
    fn density_entry_rejects_function_use() {
        let e = entry(order(), "lebesgue_control").unwrap();
        assert!(e.eval(1.0).is_err());
        assert!(e.boundary_fn().is_err());
        assert!(e.tail_policy().is_none());
    }

    #[test]
    fn sampling_respects_grid_and_tail() {
        let grid = RadialGrid::gauss_panels(0.0, 4.0, 8, 4).unwrap();
        let f = entry(order(), "rational_odd").unwrap().sample_on(grid).unwrap();
        assert_eq!(f.values().len(), 32);
        assert_eq!(f.tail(), TailPolicy::power_decay(1.0));
    }

    #[test]
    fn unknown_name_is_a_config_error() {
        assert!(matches!(entry(order(), "mystery"), Err(LabError::Config(_))));
    }
}
