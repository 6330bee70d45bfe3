//! PE strictification: discrete `U`, continuous `V_cts`, hybrid `V♯`.

mod continuous;
mod discrete;
mod hybrid;

use std::sync::Arc;

pub use continuous::{strictify_continuous_pe, ContinuousStrictification};
pub use discrete::{strictify_discrete_pe, DiscretePeConfig, DiscreteStrictification, ThetaGain};
pub use hybrid::{strictify_hybrid_pe, HybridPeConfig, HybridStrictification};

use crate::funcspace::FuncError;
use crate::pe::{verify_discrete_pe, DiscretePESignal, DiscreteSource, PeError, PeVerdict};

#[derive(Debug, thiserror::Error)]
pub enum StrictifyError {
    #[error("signal is not persistently exciting: window ending at k = {0} falls below delta")]
    NotPe(i64),
    #[error("signal is not persistently exciting: window ending at t = {0} falls below eps")]
    NotPeContinuous(f64),
    #[error(transparent)]
    Pe(#[from] PeError),
    #[error(transparent)]
    Func(#[from] FuncError),
    #[error("invalid parameter: {0}")]
    Parameter(String),
}

/// Window length after enlargement: `l` is raised to `⌈δ⌉ + 1` only when
/// `δ ≥ 4(l+1)`, the case where the rate formula is undefined.
pub fn effective_window(l: usize, delta: f64) -> usize {
    if delta >= 4.0 * (l as f64 + 1.0) {
        delta.ceil() as usize + 1
    } else {
        l
    }
}

/// Constant exponential jump rate `ln(4(l+1) / (4(l+1) − δ))`.
pub fn exp_rate_for_dis(l: usize, delta: f64) -> Result<f64, StrictifyError> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(StrictifyError::Parameter(format!(
            "delta must be positive, got {delta}"
        )));
    }
    let w = 4.0 * (effective_window(l, delta) as f64 + 1.0);
    Ok((w / (w - delta)).ln())
}

/// `p(k) = 1 − e^{−r(k)}` (with `r = +∞ ↦ 1`), keeping `l` and taking `δ` as
/// the smallest window sum over `0 ≤ k ≤ horizon`.
pub fn pe_from_exp(r: &DiscretePESignal, horizon: i64) -> Result<DiscretePESignal, StrictifyError> {
    if horizon < 0 {
        return Err(StrictifyError::Parameter("empty horizon".into()));
    }
    let map = |v: f64| 1.0 - (-v).exp();
    let source = match &r.source {
        DiscreteSource::Table { start, values } => DiscreteSource::Table {
            start: *start,
            values: values.iter().map(|&v| map(v)).collect(),
        },
        DiscreteSource::Periodic { pattern } => DiscreteSource::Periodic {
            pattern: pattern.iter().map(|&v| map(v)).collect(),
        },
        DiscreteSource::Func(f) => {
            let f = Arc::clone(f);
            DiscreteSource::Func(Arc::new(move |k| map(f(k))))
        }
    };
    let p_bar = map(r.p_bar);
    // Provisional δ; replaced by the sweep minimum below.
    let mut p = DiscretePESignal::new(source, r.l, f64::MIN_POSITIVE, p_bar)?;
    let mut delta = f64::INFINITY;
    for k in 0..=horizon {
        delta = delta.min(p.window_sum(k)?);
    }
    if !(delta > 0.0) {
        return Err(StrictifyError::NotPe(0));
    }
    p.delta = delta;
    Ok(p)
}

pub(crate) fn require_pe(p: &DiscretePESignal, horizon: i64) -> Result<(), StrictifyError> {
    match verify_discrete_pe(p, horizon)? {
        PeVerdict::Pass => Ok(()),
        PeVerdict::Fail(k) => Err(StrictifyError::NotPe(k)),
    }
}

/// A horizon that covers one full period of `p` (plus its window), or every
/// tabulated index.
pub(crate) fn default_horizon(p: &DiscretePESignal) -> i64 {
    match &p.source {
        DiscreteSource::Periodic { pattern } => (pattern.len() + p.l) as i64,
        DiscreteSource::Table { start, values } => start + values.len() as i64 - 1,
        DiscreteSource::Func(_) => 1000,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_rate_closed_forms() {
        assert!((exp_rate_for_dis(1, 1.0).unwrap() - (8.0f64 / 7.0).ln()).abs() < 1e-15);
        assert!((exp_rate_for_dis(3, 2.0).unwrap() - (16.0f64 / 14.0).ln()).abs() < 1e-15);
        assert!(exp_rate_for_dis(1, 1e-9).unwrap() < 1e-9);
        assert!(exp_rate_for_dis(1, 0.0).is_err());
        // δ = 8 ≥ 4(l+1) with l = 1: l becomes 9.
        assert!((exp_rate_for_dis(1, 8.0).unwrap() - (40.0f64 / 32.0).ln()).abs() < 1e-15);
    }

    #[test]
    fn exp_signal() {
        let zero = DiscretePESignal::periodic(vec![0.0], 0, 1.0).unwrap();
        assert!(matches!(
            pe_from_exp(&zero, 10),
            Err(StrictifyError::NotPe(_))
        ));
        let half = DiscretePESignal::periodic(vec![2f64.ln()], 0, 0.1).unwrap();
        let p = pe_from_exp(&half, 10).unwrap();
        assert!((p.p(3).unwrap() - 0.5).abs() < 1e-15);
        let alt = DiscretePESignal::periodic(vec![0.0, 2f64.ln()], 1, 0.1).unwrap();
        let p = pe_from_exp(&alt, 10).unwrap();
        assert!((p.delta - 0.5).abs() < 1e-15);
        assert_eq!(p.l, 1);
        assert!(pe_from_exp(&alt, -1).is_err());
        let inf = DiscretePESignal::periodic(vec![0.0, f64::INFINITY], 1, 1.0).unwrap();
        let p = pe_from_exp(&inf, 10).unwrap();
        assert_eq!((p.p(1).unwrap(), p.p_bar, p.delta), (1.0, 1.0, 1.0));
    }
}
