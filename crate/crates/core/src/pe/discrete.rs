use std::fmt;
use std::sync::Arc;

use super::{PeError, PeVerdict};

/// Where the samples of a discrete signal come from.
#[derive(Clone)]
pub enum DiscreteSource {
    /// `values[i]` is `p(start + i)`; undefined outside the table.
    Table { start: i64, values: Vec<f64> },
    /// `p(k) = pattern[k mod len]` for every integer `k`.
    Periodic { pattern: Vec<f64> },
    /// Arbitrary total function.
    Func(Arc<dyn Fn(i64) -> f64 + Send + Sync>),
}

impl fmt::Debug for DiscreteSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Table { start, values } => f
                .debug_struct("Table")
                .field("start", start)
                .field("len", &values.len())
                .finish(),
            Self::Periodic { pattern } => f
                .debug_struct("Periodic")
                .field("pattern", pattern)
                .finish(),
            Self::Func(_) => f.write_str("Func(..)"),
        }
    }
}

/// A nonnegative sequence `p` with window length `l`, excitation level `δ`
/// and upper bound `p̄`.
#[derive(Debug, Clone)]
pub struct DiscretePESignal {
    pub source: DiscreteSource,
    pub l: usize,
    pub delta: f64,
    pub p_bar: f64,
}

impl DiscretePESignal {
    pub fn new(source: DiscreteSource, l: usize, delta: f64, p_bar: f64) -> Result<Self, PeError> {
        // p̄ may be +∞ for rate signals whose exponential image is bounded.
        if !(delta > 0.0) || !(p_bar >= 0.0) {
            return Err(PeError::Config(format!(
                "need delta > 0 and p_bar >= 0 (delta={delta}, p_bar={p_bar})"
            )));
        }
        if let DiscreteSource::Periodic { pattern } = &source {
            if pattern.is_empty() {
                return Err(PeError::Config("empty periodic pattern".into()));
            }
        }
        Ok(Self {
            source,
            l,
            delta,
            p_bar,
        })
    }

    /// Periodic signal with `p̄` taken as the pattern maximum.
    pub fn periodic(pattern: Vec<f64>, l: usize, delta: f64) -> Result<Self, PeError> {
        let p_bar = pattern.iter().copied().fold(0.0, f64::max);
        Self::new(DiscreteSource::Periodic { pattern }, l, delta, p_bar)
    }

    pub fn p(&self, k: i64) -> Result<f64, PeError> {
        match &self.source {
            DiscreteSource::Table { start, values } => {
                let i = k - start;
                if i < 0 || i as usize >= values.len() {
                    Err(PeError::Domain(k))
                } else {
                    Ok(values[i as usize])
                }
            }
            DiscreteSource::Periodic { pattern } => {
                Ok(pattern[k.rem_euclid(pattern.len() as i64) as usize])
            }
            DiscreteSource::Func(f) => Ok(f(k)),
        }
    }

    /// `Σ_{i=k−l}^{k} p(i)`.
    pub fn window_sum(&self, k: i64) -> Result<f64, PeError> {
        let mut acc = 0.0;
        for i in k - self.l as i64..=k {
            acc += self.p(i)?;
        }
        Ok(acc)
    }

    /// `S(k) = Σ_{s=k−l}^{k} Σ_{j=s}^{k} p(j)`, summed with triangular weights.
    pub fn sum_s(&self, k: i64) -> Result<f64, PeError> {
        let lo = k - self.l as i64;
        let mut acc = 0.0;
        for j in lo..=k {
            acc += (j - lo + 1) as f64 * self.p(j)?;
        }
        Ok(acc)
    }

    /// Upper bound `p̄(l+1)²` on `S`.
    pub fn s_bar(&self) -> f64 {
        let w = (self.l + 1) as f64;
        self.p_bar * w * w
    }

    /// The period of `p`, when known.
    pub fn period(&self) -> Option<usize> {
        match &self.source {
            DiscreteSource::Periodic { pattern } => Some(pattern.len()),
            _ => None,
        }
    }
}

/// Checks every window sum for `0 ≤ k ≤ horizon` against `δ`.
pub fn verify_discrete_pe(p: &DiscretePESignal, horizon: i64) -> Result<PeVerdict<i64>, PeError> {
    for k in 0..=horizon {
        if p.window_sum(k)? < p.delta {
            return Ok(PeVerdict::Fail(k));
        }
    }
    Ok(PeVerdict::Pass)
}

/// `S(k)` for the signal's own window length.
pub fn sum_s(p: &DiscretePESignal, k: i64) -> Result<f64, PeError> {
    p.sum_s(k)
}

/// Checks `0 ≤ S(k) ≤ p̄(l+1)²` for `0 ≤ k ≤ horizon`.
pub fn check_s_bound(p: &DiscretePESignal, horizon: i64) -> Result<PeVerdict<i64>, PeError> {
    let bound = p.s_bar();
    for k in 0..=horizon {
        let s = p.sum_s(k)?;
        if !(0.0..=bound).contains(&s) {
            return Ok(PeVerdict::Fail(k));
        }
    }
    Ok(PeVerdict::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn odd() -> DiscretePESignal {
        DiscretePESignal::periodic(vec![0.0, 1.0], 1, 1.0).unwrap()
    }

    #[test]
    fn constant_one_passes() {
        let p = DiscretePESignal::periodic(vec![1.0], 0, 1.0).unwrap();
        assert_eq!(verify_discrete_pe(&p, 100).unwrap(), PeVerdict::Pass);
    }

    #[test]
    fn odd_indicator_windows() {
        assert_eq!(verify_discrete_pe(&odd(), 100).unwrap(), PeVerdict::Pass);
        let short = DiscretePESignal::periodic(vec![0.0, 1.0], 0, 0.5).unwrap();
        assert_eq!(verify_discrete_pe(&short, 100).unwrap(), PeVerdict::Fail(0));
    }

    #[test]
    fn s_for_odd_indicator() {
        // S(k) = p(k−1) + 2p(k).
        let p = odd();
        assert_eq!(p.sum_s(4).unwrap(), 1.0);
        assert_eq!(p.sum_s(5).unwrap(), 2.0);
        assert_eq!(p.sum_s(0).unwrap(), 1.0);
    }

    #[test]
    fn s_for_constant() {
        let p = DiscretePESignal::periodic(vec![1.0], 2, 1.0).unwrap();
        assert_eq!(p.sum_s(7).unwrap(), 6.0);
        assert_eq!(check_s_bound(&p, 50).unwrap(), PeVerdict::Pass);
    }

    #[test]
    fn table_domain() {
        let p = DiscretePESignal::new(
            DiscreteSource::Table {
                start: 0,
                values: vec![1.0; 10],
            },
            1,
            1.0,
            1.0,
        )
        .unwrap();
        assert!(matches!(p.sum_s(0), Err(PeError::Domain(-1))));
        assert_eq!(p.sum_s(9).unwrap(), 3.0);
        assert!(matches!(
            verify_discrete_pe(&p, 9),
            Err(PeError::Domain(-1))
        ));
    }
}
