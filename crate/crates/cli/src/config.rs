use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use strictlyap::certify::GridSpec;
use strictlyap::systems::{Budget, Policy};

use crate::error::CliError;
use crate::gallery::{self, Example};

/// Version of the config and report formats.
pub const SCHEMA_VERSION: u32 = 1;

/// An experiment: a catalogued system, its numeric parameters, and the
/// sampling, simulation and tolerance settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub example: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    /// Certification grid; the example's default when absent.
    #[serde(default)]
    pub grid: Option<GridSpec>,
    /// Overrides the tolerance of every sampled decay inequality.
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Multiplies the certified decay bound; values above 1 ask for more
    /// decay than the construction guarantees.
    #[serde(default)]
    pub bound_scale: Option<f64>,
    #[serde(default)]
    pub simulation: Option<SimulationConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    /// Number of random initial states.
    #[serde(default)]
    pub initial_states: Option<usize>,
    /// Initial states are drawn uniformly from `[−radius, radius]ⁿ`.
    #[serde(default)]
    pub radius: Option<f64>,
    #[serde(default)]
    pub policy: Option<Policy>,
    #[serde(default)]
    pub budget: Option<Budget>,
}

/// A validated config with every default filled in.
#[derive(Debug, Clone)]
pub struct Settings {
    pub example: &'static Example,
    pub params: BTreeMap<String, f64>,
    pub grid: GridSpec,
    pub tol: Option<f64>,
    pub seed: u64,
    pub bound_scale: f64,
    pub initial_states: usize,
    pub radius: f64,
    pub policy: Policy,
    pub budget: Budget,
}

impl ExperimentConfig {
    /// The default config of a catalogued example.
    pub fn for_example(id: &str) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            example: id.to_string(),
            params: BTreeMap::new(),
            grid: None,
            tol: None,
            seed: None,
            bound_scale: None,
            simulation: None,
        }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Checks the schema version, the example id, every parameter bound and
    /// the grid, then fills in defaults.
    pub fn resolve(&self) -> Result<Settings, CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let example = gallery::find(&self.example)
            .ok_or_else(|| CliError::Config(format!("unknown example {:?}", self.example)))?;
        let params = example.resolve_params(&self.params)?;
        let grid = match &self.grid {
            Some(g) => g.clone(),
            None => example.default_grid(),
        };
        grid.validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        if let Some(t) = self.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::Config(format!("tol must be positive, got {t}")));
            }
        }
        let bound_scale = self.bound_scale.unwrap_or(1.0);
        if !(bound_scale.is_finite() && bound_scale >= 0.0) {
            return Err(CliError::Config(format!(
                "bound_scale must be finite and >= 0, got {bound_scale}"
            )));
        }
        let sim = self.simulation.clone().unwrap_or(SimulationConfig {
            initial_states: None,
            radius: None,
            policy: None,
            budget: None,
        });
        let defaults = example.sim_defaults(&params);
        let radius = sim.radius.unwrap_or(defaults.radius);
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(CliError::Config(format!(
                "radius must be positive, got {radius}"
            )));
        }
        let budget = sim.budget.unwrap_or(defaults.budget);
        if !(budget.step > 0.0) || !(budget.max_flow_time >= 0.0) {
            return Err(CliError::Config(
                "budget needs step > 0 and max_flow_time >= 0".into(),
            ));
        }
        Ok(Settings {
            example,
            params,
            grid,
            tol: self.tol,
            seed: self.seed.unwrap_or(0),
            bound_scale,
            initial_states: sim.initial_states.unwrap_or(defaults.initial_states),
            radius,
            policy: sim.policy.unwrap_or(defaults.policy),
            budget,
        })
    }
}
