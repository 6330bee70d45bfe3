//! Persistently exciting signals and their window accumulators.

mod config;
mod continuous;
mod discrete;

pub use config::{ContinuousKind, Signal, SignalConfig};
pub use continuous::{
    check_r_bound, int_r, verify_continuous_pe, ContinuousPESignal, ContinuousSource, RCache,
};
pub use discrete::{check_s_bound, sum_s, verify_discrete_pe, DiscretePESignal, DiscreteSource};

/// Outcome of a finite-horizon check; `Fail` carries the first violating index or time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PeVerdict<T> {
    Pass,
    Fail(T),
}

impl<T> PeVerdict<T> {
    pub fn is_pass(&self) -> bool {
        matches!(self, PeVerdict::Pass)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum PeError {
    #[error("signal undefined at index {0}")]
    Domain(i64),
    #[error("signal undefined at time {0}")]
    TimeDomain(f64),
    #[error("configuration: {0}")]
    Config(String),
}
