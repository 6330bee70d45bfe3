//! Falsification-style verification: grid and random sweeps of pointwise
//! inequalities, arc decay checks, and rate fitting.
//!
//! A passing report means no violation was found on the samples; it is not a proof.

mod arcs;
mod grid;
mod report;
mod sweep;

pub use arcs::{check_arc_decay, fit_exponential_rate};
pub use grid::{GridSpec, Sample};
pub use report::{nonfinite, CertificationReport, InequalityRecord, Witness};
pub use sweep::{
    check_continuous_decay, check_continuous_usb, check_discrete_decay, check_discrete_usb,
    check_inequality, check_uppd, dv_along_flow, dv_finite_difference, norm, Check,
};

/// Default tolerance for inequalities built from exact evaluation chains.
pub const DISCRETE_TOL: f64 = 1e-6;
/// Default tolerance when a derivative comes from finite differences.
pub const CONTINUOUS_TOL: f64 = 1e-4;
/// Relative tolerance of envelope checks.
pub const UPPD_TOL: f64 = 1e-9;

#[derive(Debug, thiserror::Error)]
pub enum CertifyError {
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("arc ended in blow-up and cannot be certified")]
    BlowupArc,
    #[error("invalid arc: {0}")]
    InvalidArc(String),
    #[error("rate fit: {0}")]
    Fit(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}
