//! TOML experiment configuration for the `run` driver and the examples.
//!
//! Every key has a default, so the empty document is a valid configuration;
//! unknown keys are rejected to catch typos. The full grammar:
//!
//! ```toml
//! # Orders λ > 1/2 to run.
//! lambdas = [1.2, 2.0]
//! # Catalog entries to run; the single entry "all" expands to every
//! # boundary function in the catalog.
//! functions = ["all"]
//! # How Poisson extensions are computed: "direct" (adaptive kernel
//! # quadrature per point) or "spectral" (Hankel-transform pipeline).
//! mode = "direct"
//! # Seed for the randomized probes (subharmonicity disks).
//! seed = 0
//!
//! [grid]
//! x_min = 0.01    # radial window (log-spaced Gauss panels)
//! x_max = 100.0
//! x_nodes = 256
//! t_min = 0.01    # time window (geometric nodes)
//! t_max = 20.0
//! t_nodes = 128
//!
//! [boxes]
//! offset_min = -6 # Carleson-box offsets {0} ∪ {2^j}, j in this window
//! offset_max = 6
//! length_min = -6 # box lengths 2^k, k in this window
//! length_max = 6
//!
//! [tolerances]
//! equivalence_band = 0.15  # allowed drift of equivalence ratios from the
//!                          # committed reference bands
//! control_slope_band = 0.05 # Lebesgue-control scale slope versus 1
//! radial_mean_rel = 1e-8   # mean-value identity on radial solutions
//! slice_mean_rel = 1e-4    # mean-value identity on Poisson slices
//! ```

use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::carleson::BoxFamily;
use crate::catalog::catalog;
use crate::error::{LabError, Result};
use crate::field::FieldMode;
use crate::grid::{geometric_nodes, RadialGrid};
use crate::specfun::BesselOrder;

fn default_lambdas() -> Vec<f64> {
    vec![1.2, 2.0]
}

fn default_functions() -> Vec<String> {
    vec!["all".to_string()]
}

fn default_mode() -> String {
    "direct".to_string()
}

/// Sampling windows for the extension fields.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    pub x_min: f64,
    pub x_max: f64,
    pub x_nodes: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub t_nodes: usize,
}

impl Default for GridSection {
    fn default() -> Self {
        GridSection {
            x_min: 1e-2,
            x_max: 1e2,
            x_nodes: 256,
            t_min: 1e-2,
            t_max: 20.0,
            t_nodes: 128,
        }
    }
}

/// Exponent windows of the Carleson box family.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct BoxSection {
    pub offset_min: i32,
    pub offset_max: i32,
    pub length_min: i32,
    pub length_max: i32,
}

impl Default for BoxSection {
    fn default() -> Self {
        BoxSection {
            offset_min: -6,
            offset_max: 6,
            length_min: -6,
            length_max: 6,
        }
    }
}

/// Pass/fail bands used by the drivers.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceSection {
    pub equivalence_band: f64,
    pub control_slope_band: f64,
    pub radial_mean_rel: f64,
    pub slice_mean_rel: f64,
}

impl Default for ToleranceSection {
    fn default() -> Self {
        ToleranceSection {
            equivalence_band: 0.15,
            control_slope_band: 0.05,
            radial_mean_rel: 1e-8,
            slice_mean_rel: 1e-4,
        }
    }
}

/// A full experiment description, loadable from TOML.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub lambdas: Vec<f64>,
    pub functions: Vec<String>,
    pub mode: String,
    pub seed: u64,
    pub grid: GridSection,
    pub boxes: BoxSection,
    pub tolerances: ToleranceSection,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            lambdas: default_lambdas(),
            functions: default_functions(),
            mode: default_mode(),
            seed: 0,
            grid: GridSection::default(),
            boxes: BoxSection::default(),
            tolerances: ToleranceSection::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: ExperimentConfig = toml::from_str(text)
            .map_err(|e| LabError::Config(format!("invalid experiment TOML: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| {
            LabError::Config(format!("cannot read config {}: {e}", path.display()))
        })?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string_pretty(self)
            .map_err(|e| LabError::Config(format!("cannot serialize config: {e}")))
    }

    pub fn validate(&self) -> Result<()> {
        if self.lambdas.is_empty() {
            return Err(LabError::Config("lambdas must not be empty".to_string()));
        }
        for &lambda in &self.lambdas {
            BesselOrder::new(lambda)
                .map_err(|e| LabError::Config(format!("bad order {lambda}: {e}")))?;
            // The kernel layer works for any λ > 0, but the experiment
            // pipeline (Hankel transform, representation constants) needs
            // λ > 1/2.
            if lambda <= 0.5 {
                return Err(LabError::Config(format!(
                    "experiment orders must satisfy λ > 1/2, got {lambda}"
                )));
            }
        }
        if self.functions.is_empty() {
            return Err(LabError::Config(
                "functions must not be empty; use [\"all\"] for the whole catalog".to_string(),
            ));
        }
        self.field_mode()?;
        self.resolved_functions()?;
        let g = &self.grid;
        if !(g.x_min > 0.0 && g.x_min < g.x_max && g.x_max.is_finite()) {
            return Err(LabError::Config(format!(
                "grid x window must satisfy 0 < x_min < x_max < ∞, got [{}, {}]",
                g.x_min, g.x_max
            )));
        }
        if !(g.t_min > 0.0 && g.t_min < g.t_max && g.t_max.is_finite()) {
            return Err(LabError::Config(format!(
                "grid t window must satisfy 0 < t_min < t_max < ∞, got [{}, {}]",
                g.t_min, g.t_max
            )));
        }
        if g.x_nodes < 8 || g.t_nodes < 8 {
            return Err(LabError::Config(format!(
                "grid needs at least 8 nodes per direction, got x_nodes={}, t_nodes={}",
                g.x_nodes, g.t_nodes
            )));
        }
        let b = &self.boxes;
        if b.offset_min > b.offset_max || b.length_min > b.length_max {
            return Err(LabError::Config(format!(
                "box exponent windows must be ordered, got offsets [{}, {}] and lengths [{}, {}]",
                b.offset_min, b.offset_max, b.length_min, b.length_max
            )));
        }
        let t = &self.tolerances;
        for (name, value) in [
            ("equivalence_band", t.equivalence_band),
            ("control_slope_band", t.control_slope_band),
            ("radial_mean_rel", t.radial_mean_rel),
            ("slice_mean_rel", t.slice_mean_rel),
        ] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(LabError::Config(format!(
                    "tolerance {name} must be positive and finite, got {value}"
                )));
            }
        }
        Ok(())
    }

    pub fn orders(&self) -> Result<Vec<BesselOrder>> {
        self.lambdas.iter().map(|&l| BesselOrder::new(l)).collect()
    }

    pub fn field_mode(&self) -> Result<FieldMode> {
        FieldMode::from_str(&self.mode)
    }

    /// The configured function names, with `"all"` expanded to every
    /// boundary entry of the catalog, and every name checked against it.
    pub fn resolved_functions(&self) -> Result<Vec<String>> {
        let reference = catalog(BesselOrder::new(2.0)?);
        let boundary: Vec<String> = reference
            .iter()
            .filter(|e| e.boundary_fn().is_ok())
            .map(|e| e.name.to_string())
            .collect();
        if self.functions.len() == 1 && self.functions[0] == "all" {
            return Ok(boundary);
        }
        let known: Vec<&str> = reference.iter().map(|e| e.name).collect();
        for name in &self.functions {
            if !known.contains(&name.as_str()) {
                return Err(LabError::Config(format!(
                    "unknown catalog function {name:?}; known names: {known:?}"
                )));
            }
        }
        Ok(self.functions.clone())
    }

    /// Log-spaced Gauss sampling grid over the radial window (node count
    /// rounded down to a multiple of the panel order 4).
    pub fn x_grid(&self) -> Result<RadialGrid> {
        let per_panel = 4;
        let panels = (self.grid.x_nodes / per_panel).max(2);
        RadialGrid::gauss_log_panels(self.grid.x_min, self.grid.x_max, panels, per_panel)
    }

    /// Geometric time nodes over the time window.
    pub fn t_nodes_vec(&self) -> Result<Vec<f64>> {
        geometric_nodes(self.grid.t_min, self.grid.t_max, self.grid.t_nodes)
    }

    pub fn box_family(&self) -> Result<BoxFamily> {
        BoxFamily::dyadic(
            (self.boxes.offset_min, self.boxes.offset_max),
            (self.boxes.length_min, self.boxes.length_max),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_yields_the_defaults() {
        let config = ExperimentConfig::from_toml_str("").unwrap();
        assert_eq!(config, ExperimentConfig::default());
        assert_eq!(config.x_grid().unwrap().len(), 256);
        assert_eq!(config.t_nodes_vec().unwrap().len(), 128);
        assert_eq!(config.box_family().unwrap().len(), 14 * 13);
    }

    #[test]
    fn round_trips_through_toml() {
        let config = ExperimentConfig::default();
        let text = config.to_toml_string().unwrap();
        let back = ExperimentConfig::from_toml_str(&text).unwrap();
        assert_eq!(config, back);
    }

    #[test]
    fn all_expands_to_the_boundary_catalog() {
        let config = ExperimentConfig::from_toml_str("").unwrap();
        let names = config.resolved_functions().unwrap();
        assert_eq!(
            names,
            ["chi_12", "bump", "rational_odd", "power_window", "log_growth"]
        );
    }

    #[test]
    fn rejects_bad_orders_unknown_functions_and_typos() {
        assert!(ExperimentConfig::from_toml_str("lambdas = [0.3]").is_err());
        assert!(ExperimentConfig::from_toml_str("functions = [\"nope\"]").is_err());
        assert!(ExperimentConfig::from_toml_str("mode = \"sideways\"").is_err());
        assert!(ExperimentConfig::from_toml_str("lambas = [2.0]").is_err());
        assert!(ExperimentConfig::from_toml_str("[grid]\nx_min = -1.0").is_err());
        assert!(ExperimentConfig::from_toml_str("[boxes]\noffset_min = 3\noffset_max = -3").is_err());
    }

    #[test]
    fn explicit_selection_is_preserved() {
        let config =
            ExperimentConfig::from_toml_str("functions = [\"bump\", \"lebesgue_control\"]").unwrap();
        assert_eq!(
            config.resolved_functions().unwrap(),
            ["bump", "lebesgue_control"]
        );
    }
}
