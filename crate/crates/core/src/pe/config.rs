use serde::{Deserialize, Serialize};

use super::{ContinuousPESignal, ContinuousSource, DiscretePESignal, DiscreteSource, PeError};

/// JSON description of a signal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SignalConfig {
    Discrete {
        l: usize,
        delta: f64,
        samples: Vec<f64>,
        /// Index of the first sample; defaults to `−l`.
        #[serde(default)]
        start_index: Option<i64>,
        /// Repeat `samples` with period `samples.len()` (indices taken mod the length).
        #[serde(default)]
        periodic: bool,
        #[serde(default)]
        p_bar: Option<f64>,
    },
    Continuous {
        tau: f64,
        eps: f64,
        kind: ContinuousKind,
        #[serde(default)]
        value: Option<f64>,
        #[serde(default)]
        times: Vec<f64>,
        #[serde(default)]
        values: Vec<f64>,
        #[serde(default)]
        q_bar: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContinuousKind {
    Sin2,
    Table,
    Constant,
}

/// A built signal of either kind.
#[derive(Debug, Clone)]
pub enum Signal {
    Discrete(DiscretePESignal),
    Continuous(ContinuousPESignal),
}

impl SignalConfig {
    pub fn build(&self) -> Result<Signal, PeError> {
        let max = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
        match self {
            Self::Discrete {
                l,
                delta,
                samples,
                start_index,
                periodic,
                p_bar,
            } => {
                if samples.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
                    return Err(PeError::Config("samples must be finite and >= 0".into()));
                }
                let p_bar = p_bar.unwrap_or_else(|| max(samples));
                let source = if *periodic {
                    DiscreteSource::Periodic {
                        pattern: samples.clone(),
                    }
                } else {
                    DiscreteSource::Table {
                        start: start_index.unwrap_or(-(*l as i64)),
                        values: samples.clone(),
                    }
                };
                DiscretePESignal::new(source, *l, *delta, p_bar).map(Signal::Discrete)
            }
            Self::Continuous {
                tau,
                eps,
                kind,
                value,
                times,
                values,
                q_bar,
            } => {
                let (source, bound) = match kind {
                    ContinuousKind::Sin2 => (ContinuousSource::Sin2, 1.0),
                    ContinuousKind::Constant => {
                        let c = value.ok_or_else(|| {
                            PeError::Config("constant signal needs \"value\"".into())
                        })?;
                        if !(c >= 0.0) {
                            return Err(PeError::Config("value must be >= 0".into()));
                        }
                        (ContinuousSource::Constant(c), c)
                    }
                    ContinuousKind::Table => {
                        if values.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
                            return Err(PeError::Config("values must be finite and >= 0".into()));
                        }
                        (
                            ContinuousSource::Table {
                                times: times.clone(),
                                values: values.clone(),
                            },
                            max(values),
                        )
                    }
                };
                ContinuousPESignal::new(source, *tau, *eps, q_bar.unwrap_or(bound))
                    .map(Signal::Continuous)
            }
        }
    }
}
