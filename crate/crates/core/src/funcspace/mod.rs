//! Scalar gains on `[0, ∞)`: grid carrier, comparison classes, inversion,
//! envelopes and the μ/κ/χ/γ construction.

mod comparison;
mod construct;
mod envelope;
mod field;
mod gain;
mod grid;
mod invert;

pub use comparison::{classify, ClassTag, ComparisonFunction, Verdict};
pub use construct::{build_gamma, build_mu_kappa_chi, MuKappaChi};
pub use envelope::{increasing_majorant, lipschitz_pd_minorant, minorize_pd, unimodal_envelope};
pub use field::ScalarField;
pub use gain::Gain;
pub(crate) use grid::format_f64;
pub use grid::{default_nodes, linear_nodes, log_nodes, merge_nodes, GridFunction, RightExtension};
pub use invert::{invert_monotone, INVERT_TOL};

#[derive(Debug, thiserror::Error)]
pub enum FuncError {
    #[error("malformed grid: {0}")]
    MalformedGrid(String),
    #[error("not in class {expected}: first violation at node {node} (s = {at})")]
    Class {
        expected: String,
        node: usize,
        at: f64,
    },
    #[error("argument out of range: {0}")]
    Range(String),
    #[error("inversion diverged: {0}")]
    Divergence(String),
    #[error("singular construction: {0}")]
    Singularity(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}
