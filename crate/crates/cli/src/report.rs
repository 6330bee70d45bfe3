//! The versioned `report.json` written by every command.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use strictlyap::certify::{nonfinite, CertificationReport};
use strictlyap::systems::StatusFile;

use crate::error::{exit, CliError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    IoError,
    ConstructionFailure,
    CertificationFailure,
    SimulationGuard,
    ConfigError,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Self::Pass => exit::PASS,
            Self::IoError => exit::IO,
            Self::ConstructionFailure => exit::CONSTRUCTION,
            Self::CertificationFailure => exit::CERTIFICATION,
            Self::SimulationGuard => exit::GUARD,
            Self::ConfigError => exit::CONFIG,
        }
    }

    pub fn of_error(e: &CliError) -> Self {
        match e {
            CliError::Config(_) => Self::ConfigError,
            CliError::Construction(_) => Self::ConstructionFailure,
            CliError::Guard(_) => Self::SimulationGuard,
            CliError::Io(_) => Self::IoError,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Constant {
    pub name: String,
    #[serde(with = "nonfinite")]
    pub value: f64,
}

/// A tabulated gain written to `gains/<file>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GainRecord {
    pub name: String,
    pub file: String,
    pub nodes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstructionRecord {
    pub kind: String,
    pub constants: Vec<Constant>,
    pub gains: Vec<GainRecord>,
}

/// A simulated arc written to `arcs/<file>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcRecord {
    pub file: String,
    pub x0: Vec<f64>,
    pub status: StatusFile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationRecord {
    pub arcs: Vec<ArcRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunReport {
    pub schema_version: u32,
    pub command: String,
    pub example: String,
    pub params: BTreeMap<String, f64>,
    pub seed: u64,
    pub outcome: Outcome,
    pub exit_code: i32,
    #[serde(default)]
    pub construction: Option<ConstructionRecord>,
    #[serde(default)]
    pub simulation: Option<SimulationRecord>,
    #[serde(default)]
    pub certification: Option<CertificationReport>,
    #[serde(default)]
    pub message: Option<String>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    /// Sets the outcome and its exit code.
    pub fn finish(&mut self, outcome: Outcome, message: Option<String>) {
        self.outcome = outcome;
        self.exit_code = outcome.exit_code();
        self.message = message;
    }
}
