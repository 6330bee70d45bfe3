//! Discrete, continuous and hybrid system models and their simulation.

mod arc;
mod flow;
mod model;
mod simulate;

pub use arc::{ArcPoint, ArcStatus, HybridArc, Segment, StatusFile};
pub use flow::{integrate_flow, rk4_step, FlowPath};
pub use model::{
    build_frozen_system, step_jump, ContinuousSystem, DiscreteSystem, HybridSystem, SetFn,
};
pub use simulate::{simulate_hybrid, Budget, Policy};

#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error("non-finite state at t = {t}, k = {k} (last finite time {last_good_t})")]
    Blowup { t: f64, k: i64, last_good_t: f64 },
    #[error("more than {limit} consecutive jumps at t = {t} (Zeno guard)")]
    Zeno { limit: usize, t: f64 },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}
