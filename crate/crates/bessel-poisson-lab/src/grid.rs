//! Sampled functions on the half-line with quadrature structure.
//!
//! A [`RadialGrid`] is a strictly increasing set of positive nodes equipped
//! with positive quadrature weights — composite Gauss–Legendre panels, either
//! uniform or geometric. Built this way, the same node set serves three
//! masters at once: it samples a function accurately, it integrates smooth
//! integrands against the samples with spectral-grade accuracy (which the
//! Hankel transform and the semigroup checks rely on), and it spans several
//! decades cheaply when panels are laid out geometrically.
//!
//! A [`GridFunction`] couples samples on such a grid with a [`TailPolicy`]
//! declaring how the function continues past the last node. The CSV form is
//! two columns (`node,value`) under a tail-metadata comment line; quadrature
//! weights are an artifact of construction, so reading a CSV re-equips the
//! samples with trapezoid weights.

use crate::quadrature::{TailKind, TailPolicy};
use crate::{LabError, Result};

/// Gauss–Legendre nodes and weights on `[−1, 1]` by Newton iteration on the
/// Legendre polynomial (machine accurate for the small `n` used per panel).
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Chebyshev-based initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n(x) and P_n'(x) by the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { x } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Plain geometric progression of `n` nodes from `lo` to `hi` (inclusive);
/// used for time grids where no quadrature structure is needed.
pub fn geometric_nodes(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo) || n < 2 {
        return Err(LabError::domain(format!(
            "geometric nodes need 0 < lo < hi and n ≥ 2, got [{lo}, {hi}] with {n}"
        )));
    }
    let step = (hi / lo).ln() / (n - 1) as f64;
    Ok((0..n).map(|i| lo * (step * i as f64).exp()).collect())
}

/// Positive, strictly increasing quadrature nodes with positive weights.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl RadialGrid {
    /// Validated construction from raw nodes and weights.
    pub fn new(nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if nodes.is_empty() || nodes.len() != weights.len() {
            return Err(LabError::domain(format!(
                "grid needs equal, nonzero node/weight counts, got {} and {}",
                nodes.len(),
                weights.len()
            )));
        }
        for pair in nodes.windows(2) {
            if !(pair[0] < pair[1]) {
                return Err(LabError::domain(format!(
                    "grid nodes must be strictly increasing, got {} then {}",
                    pair[0], pair[1]
                )));
            }
        }
        if !(nodes[0] > 0.0) {
            return Err(LabError::domain(format!(
                "grid nodes must be positive, got first node {}",
                nodes[0]
            )));
        }
        if weights.iter().any(|&w| !(w > 0.0) || !w.is_finite()) {
            return Err(LabError::domain("grid weights must be positive and finite"));
        }
        Ok(RadialGrid { nodes, weights })
    }

    /// Composite Gauss–Legendre rule on `[a, b]` with uniform panels.
    pub fn gauss_panels(a: f64, b: f64, panels: usize, per_panel: usize) -> Result<Self> {
        if !(a >= 0.0 && b > a) || panels == 0 || per_panel == 0 {
            return Err(LabError::domain(format!(
                "gauss panels need 0 ≤ a < b and nonzero counts, got [{a}, {b}], {panels}×{per_panel}"
            )));
        }
        let width = (b - a) / panels as f64;
        let bounds: Vec<f64> = (0..=panels).map(|i| a + width * i as f64).collect();
        Self::from_panel_bounds(&bounds, per_panel)
    }

    /// Composite Gauss–Legendre rule with geometrically growing panels over
    /// `[a, b]`, `a > 0` — the workhorse for multi-decade half-line grids.
    pub fn gauss_log_panels(a: f64, b: f64, panels: usize, per_panel: usize) -> Result<Self> {
        if !(a > 0.0 && b > a) || panels == 0 || per_panel == 0 {
            return Err(LabError::domain(format!(
                "log panels need 0 < a < b and nonzero counts, got [{a}, {b}], {panels}×{per_panel}"
            )));
        }
        let step = (b / a).ln() / panels as f64;
        let bounds: Vec<f64> = (0..=panels).map(|i| a * (step * i as f64).exp()).collect();
        Self::from_panel_bounds(&bounds, per_panel)
    }

    fn from_panel_bounds(bounds: &[f64], per_panel: usize) -> Result<Self> {
        let (ref_nodes, ref_weights) = gauss_legendre(per_panel);
        let mut nodes = Vec::with_capacity((bounds.len() - 1) * per_panel);
        let mut weights = Vec::with_capacity(nodes.capacity());
        for w in bounds.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            let half = 0.5 * (w[1] - w[0]);
            for (&r, &wt) in ref_nodes.iter().zip(&ref_weights) {
                nodes.push(mid + half * r);
                weights.push(half * wt);
            }
        }
        Self::new(nodes, weights)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn max_node(&self) -> f64 {
        *self.nodes.last().expect("grids are nonempty")
    }

    /// `Σ w_i v_i` for samples aligned with this grid.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.len());
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }

    /// Trapezoid weights for the same nodes (used when re-reading CSV data
    /// that carries no quadrature structure).
    pub fn trapezoid(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(LabError::domain("trapezoid grid needs at least two nodes"));
        }
        let n = nodes.len();
        let mut weights = vec![0.0; n];
        for i in 0..n - 1 {
            let h = nodes[i + 1] - nodes[i];
            weights[i] += 0.5 * h;
            weights[i + 1] += 0.5 * h;
        }
        Self::new(nodes, weights)
    }
}

/// Samples of a function on a [`RadialGrid`], plus its declared tail behavior
/// past the last node.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: RadialGrid,
    values: Vec<f64>,
    tail: TailPolicy,
}

impl GridFunction {
    pub fn from_samples(grid: RadialGrid, values: Vec<f64>, tail: TailPolicy) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(LabError::domain(format!(
                "value count {} does not match grid size {}",
                values.len(),
                grid.len()
            )));
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(LabError::NonFinite {
                context: "grid function sample".into(),
                location: grid.nodes()[bad],
            });
        }
        Ok(GridFunction { grid, values, tail })
    }

    /// Sample a closure on the grid.
    pub fn sample(grid: RadialGrid, f: impl Fn(f64) -> f64, tail: TailPolicy) -> Result<Self> {
        let values: Vec<f64> = grid.nodes().iter().map(|&x| f(x)).collect();
        Self::from_samples(grid, values, tail)
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn tail(&self) -> TailPolicy {
        self.tail
    }

    /// Discrete `L²(0,∞)` norm `√(Σ w_i v_i²)`.
    pub fn norm_l2(&self) -> f64 {
        self.grid
            .weights()
            .iter()
            .zip(&self.values)
            .map(|(w, v)| w * v * v)
            .sum::<f64>()
            .sqrt()
    }

    /// Pointwise rescaling by a constant.
    pub fn scaled(&self, c: f64) -> Self {
        GridFunction {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| c * v).collect(),
            tail: self.tail,
        }
    }

    /// Largest pointwise discrepancy against another sampling on the same grid.
    pub fn max_abs_difference(&self, other: &GridFunction) -> Result<f64> {
        if self.grid.nodes() != other.grid.nodes() {
            return Err(LabError::domain("grid functions live on different grids"));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// Two-column CSV (`node,value`) under a tail-policy comment header.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let (kind, param) = match self.tail.kind {
            TailKind::PowerDecay { exponent } => ("power_decay", exponent),
            TailKind::ExponentialDecay { rate } => ("exponential_decay", rate),
            TailKind::TruncateAt { point } => ("truncate_at", point),
        };
        out.push_str(&format!(
            "# tail: {kind} {param} bound {}\n",
            self.tail.estimated_tail_bound
        ));
        out.push_str("node,value\n");
        for (x, v) in self.grid.nodes().iter().zip(&self.values) {
            out.push_str(&format!("{x},{v}\n"));
        }
        out
    }

    /// Parse the CSV form; samples get trapezoid quadrature weights.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| LabError::Config("empty grid-function CSV".into()))?;
        let tail = parse_tail_header(header)?;
        let mut nodes = Vec::new();
        let mut values = Vec::new();
        for line in lines {
            let line = line.trim();
            if line.is_empty() || line == "node,value" {
                continue;
            }
            let (a, b) = line
                .split_once(',')
                .ok_or_else(|| LabError::Config(format!("bad CSV row: {line}")))?;
            nodes.push(parse_f64(a)?);
            values.push(parse_f64(b)?);
        }
        Self::from_samples(RadialGrid::trapezoid(nodes)?, values, tail)
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|e| LabError::Config(format!("bad number {s:?}: {e}")))
}

fn parse_tail_header(header: &str) -> Result<TailPolicy> {
    let rest = header
        .strip_prefix("# tail:")
        .ok_or_else(|| LabError::Config(format!("missing tail header, got {header:?}")))?;
    let parts: Vec<&str> = rest.split_whitespace().collect();
    if parts.len() != 4 || parts[2] != "bound" {
        return Err(LabError::Config(format!("malformed tail header: {header:?}")));
    }
    let param = parse_f64(parts[1])?;
    let bound = parse_f64(parts[3])?;
    let policy = match parts[0] {
        "power_decay" => TailPolicy::power_decay(param),
        "exponential_decay" => TailPolicy::exponential_decay(param),
        "truncate_at" => TailPolicy::truncate_at(param),
        other => return Err(LabError::Config(format!("unknown tail kind {other:?}"))),
    };
    Ok(policy.with_tail_bound(bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn gauss_panels_integrate_polynomials_exactly() {
        // 8-point Gauss is exact through degree 15 per panel.
        let grid = RadialGrid::gauss_panels(0.0, 2.0, 3, 8).unwrap();
        let values: Vec<f64> = grid.nodes().iter().map(|&x| x.powi(7)).collect();
        assert_relative_eq!(grid.integrate(&values), 2.0_f64.powi(8) / 8.0, max_relative = 1e-13);
    }

    #[test]
    fn log_panels_cover_decades_and_integrate_smooth_decay() {
        let grid = RadialGrid::gauss_log_panels(1e-2, 1e2, 32, 8).unwrap();
        assert_eq!(grid.len(), 256);
        // ∫ x e^{−x} over [1e-2, 1e2] ≈ Γ(2) up to boundary defects ~1e-4.
        let values: Vec<f64> = grid.nodes().iter().map(|&x| x * (-x).exp()).collect();
        let exact = 1.0 - (1.0e-2_f64) * 1e-2 / 2.0; // 1 − O(a²) head loss, tail ~ e⁻¹⁰⁰ negligible
        assert_abs_diff_eq!(grid.integrate(&values), exact, epsilon = 1e-6);
    }

    #[test]
    fn grid_validation_rejects_bad_input() {
        assert!(RadialGrid::new(vec![1.0, 1.0], vec![0.5, 0.5]).is_err());
        assert!(RadialGrid::new(vec![-1.0, 1.0], vec![0.5, 0.5]).is_err());
        assert!(RadialGrid::new(vec![1.0, 2.0], vec![0.5, -0.5]).is_err());
        assert!(RadialGrid::new(vec![1.0, 2.0], vec![0.5]).is_err());
        assert!(RadialGrid::gauss_log_panels(0.0, 1.0, 4, 4).is_err());
    }

    #[test]
    fn grid_function_norm_matches_analytic_gaussian() {
        // ‖y e^{−y²/2}‖₂² = ∫ y² e^{−y²} dy over (0,∞) = √π/4.
        let grid = RadialGrid::gauss_panels(0.0, 12.0, 48, 8).unwrap();
        let f = GridFunction::sample(grid, |y| y * (-0.5 * y * y).exp(), TailPolicy::exponential_decay(1.0)).unwrap();
        let expected = (std::f64::consts::PI.sqrt() / 4.0).sqrt();
        assert_relative_eq!(f.norm_l2(), expected, max_relative = 1e-12);
    }

    #[test]
    fn rejects_non_finite_samples() {
        let grid = RadialGrid::gauss_panels(0.0, 1.0, 1, 4).unwrap();
        let mut values = vec![1.0; 4];
        values[2] = f64::NAN;
        let err = GridFunction::from_samples(grid, values, TailPolicy::truncate_at(1.0)).unwrap_err();
        assert!(matches!(err, LabError::NonFinite { .. }));
    }

    #[test]
    fn csv_round_trip_preserves_samples_and_tail() {
        let grid = RadialGrid::gauss_log_panels(0.1, 10.0, 4, 4).unwrap();
        let f = GridFunction::sample(
            grid,
            |y| (1.0 + y).recip(),
            TailPolicy::power_decay(2.0).with_tail_bound(1e-9),
        )
        .unwrap();
        let csv = f.to_csv();
        let g = GridFunction::from_csv(&csv).unwrap();
        assert_eq!(f.values(), g.values());
        assert_eq!(f.grid().nodes(), g.grid().nodes());
        assert_eq!(f.tail(), g.tail());
        // Byte-identical re-serialization (weights differ, samples do not).
        assert_eq!(csv, g.to_csv());
    }

    #[test]
    fn csv_rejects_malformed_headers() {
        assert!(GridFunction::from_csv("node,value\n1,2\n").is_err());
        assert!(GridFunction::from_csv("# tail: mystery 2 bound 0\nnode,value\n1,2\n").is_err());
    }
}
