use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use super::{PeError, PeVerdict};
use crate::quad::simpson;

/// Window integrals may fall short of `ε` by this much before a check fails.
pub const PE_SLACK: f64 = 1e-6;
/// Slack on the `R ≤ τ²q̄/2` bound.
pub const R_BOUND_SLACK: f64 = 1e-8;

/// Where the values of a continuous signal come from.
#[derive(Clone)]
pub enum ContinuousSource {
    Constant(f64),
    /// `q(t) = sin²(t)`.
    Sin2,
    /// Linear interpolation through `(times[i], values[i])`.
    Table {
        times: Vec<f64>,
        values: Vec<f64>,
    },
    Func(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for ContinuousSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(c) => write!(f, "Constant({c})"),
            Self::Sin2 => f.write_str("Sin2"),
            Self::Table { times, .. } => write!(f, "Table({} points)", times.len()),
            Self::Func(_) => f.write_str("Func(..)"),
        }
    }
}

/// A nonnegative signal `q` on `[−τ, ∞)` with window `τ`, level `ε` and bound `q̄`.
#[derive(Debug, Clone)]
pub struct ContinuousPESignal {
    pub source: ContinuousSource,
    pub tau: f64,
    pub eps: f64,
    pub q_bar: f64,
}

impl ContinuousPESignal {
    pub fn new(source: ContinuousSource, tau: f64, eps: f64, q_bar: f64) -> Result<Self, PeError> {
        if !(tau > 0.0) || !(eps > 0.0) || !(q_bar >= 0.0) || !q_bar.is_finite() {
            return Err(PeError::Config(format!(
                "need tau > 0, eps > 0, finite q_bar >= 0 (tau={tau}, eps={eps}, q_bar={q_bar})"
            )));
        }
        if let ContinuousSource::Table { times, values } = &source {
            if times.len() < 2
                || times.len() != values.len()
                || times.windows(2).any(|w| !(w[1] > w[0]))
            {
                return Err(PeError::Config(
                    "table needs >= 2 strictly increasing times, one value each".into(),
                ));
            }
        }
        Ok(Self {
            source,
            tau,
            eps,
            q_bar,
        })
    }

    /// `q = sin²` with `τ = π`, `ε = π/2`, `q̄ = 1`.
    pub fn sin2() -> Self {
        Self::new(ContinuousSource::Sin2, PI, PI / 2.0, 1.0).expect("valid constants")
    }

    /// `q(t)`; tables are held constant beyond their ends.
    pub fn q(&self, t: f64) -> f64 {
        match &self.source {
            ContinuousSource::Constant(c) => *c,
            ContinuousSource::Sin2 => {
                let s = t.sin();
                s * s
            }
            ContinuousSource::Table { times, values } => interp(times, values, t),
            ContinuousSource::Func(f) => f(t),
        }
    }

    /// `q(t)`, or a domain error outside a table's range.
    pub fn q_checked(&self, t: f64) -> Result<f64, PeError> {
        if let ContinuousSource::Table { times, .. } = &self.source {
            if t < times[0] || t > times[times.len() - 1] {
                return Err(PeError::TimeDomain(t));
            }
        }
        Ok(self.q(t))
    }

    pub fn period(&self) -> Option<f64> {
        match self.source {
            ContinuousSource::Constant(_) => Some(self.tau),
            ContinuousSource::Sin2 => Some(PI),
            _ => None,
        }
    }

    pub fn default_step(&self) -> f64 {
        self.tau / 256.0
    }

    fn intervals(&self, h: f64) -> Result<usize, PeError> {
        if !(h > 0.0) || h > self.tau / 64.0 {
            return Err(PeError::Config(format!(
                "quadrature step {h} must lie in (0, tau/64 = {}]",
                self.tau / 64.0
            )));
        }
        Ok((self.tau / h).ceil() as usize)
    }

    fn check_range(&self, t: f64) -> Result<(), PeError> {
        if let ContinuousSource::Table { times, .. } = &self.source {
            if t - self.tau < times[0] || t > times[times.len() - 1] {
                return Err(PeError::TimeDomain(t));
            }
        }
        Ok(())
    }

    /// `∫_{t−τ}^{t} q`.
    pub fn window_integral(&self, t: f64, h: f64) -> Result<f64, PeError> {
        let n = self.intervals(h)?;
        self.check_range(t)?;
        Ok(simpson(|s| self.q(s), t - self.tau, t, n))
    }

    /// `R(t) = ∫_{t−τ}^{t} ∫_{z}^{t} q(ν) dν dz`, computed as the single
    /// integral `∫_{t−τ}^{t} (ν − t + τ) q(ν) dν`.
    pub fn int_r(&self, t: f64, h: f64) -> Result<f64, PeError> {
        let n = self.intervals(h)?;
        self.check_range(t)?;
        let a = t - self.tau;
        Ok(simpson(|s| (s - a) * self.q(s), a, t, n))
    }

    /// `R′(t) = τ q(t) − ∫_{t−τ}^{t} q`.
    pub fn int_r_dt(&self, t: f64, h: f64) -> Result<f64, PeError> {
        Ok(self.tau * self.q(t) - self.window_integral(t, h)?)
    }

    /// Upper bound `τ² q̄ / 2` on `R`.
    pub fn r_bar(&self) -> f64 {
        0.5 * self.tau * self.tau * self.q_bar
    }
}

fn interp(times: &[f64], values: &[f64], t: f64) -> f64 {
    let n = times.len();
    if t <= times[0] {
        return values[0];
    }
    if t >= times[n - 1] {
        return values[n - 1];
    }
    let i = times.partition_point(|&s| s <= t) - 1;
    let w = (t - times[i]) / (times[i + 1] - times[i]);
    values[i] + w * (values[i + 1] - values[i])
}

/// Checks `∫_{t−τ}^{t} q ≥ ε − 1e−6` on the step-`h` grid over `[0, horizon]`.
pub fn verify_continuous_pe(
    q: &ContinuousPESignal,
    horizon: f64,
    h: f64,
) -> Result<PeVerdict<f64>, PeError> {
    let steps = (horizon / h).floor() as usize;
    for i in 0..=steps {
        let t = i as f64 * h;
        if q.window_integral(t, h)? < q.eps - PE_SLACK {
            return Ok(PeVerdict::Fail(t));
        }
    }
    Ok(PeVerdict::Pass)
}

/// `R(t)` with quadrature step `h`.
pub fn int_r(q: &ContinuousPESignal, t: f64, h: f64) -> Result<f64, PeError> {
    q.int_r(t, h)
}

/// Checks `0 ≤ R(t) ≤ τ² q̄ / 2 + 1e−8` on the step-`h` grid over `[0, horizon]`.
pub fn check_r_bound(
    q: &ContinuousPESignal,
    horizon: f64,
    h: f64,
) -> Result<PeVerdict<f64>, PeError> {
    let bound = q.r_bar() + R_BOUND_SLACK;
    let steps = (horizon / h).floor() as usize;
    for i in 0..=steps {
        let t = i as f64 * h;
        let r = q.int_r(t, h)?;
        if !(-R_BOUND_SLACK..=bound).contains(&r) {
            return Ok(PeVerdict::Fail(t));
        }
    }
    Ok(PeVerdict::Pass)
}

/// Cubic Hermite table of `R` and `R′` on a uniform time grid.
///
/// Periodic signals are tabulated over one period and evaluated modulo it;
/// other signals fall back to direct quadrature outside `[t0, t1]`.
#[derive(Debug, Clone)]
pub struct RCache {
    signal: ContinuousPESignal,
    h: f64,
    t0: f64,
    step: f64,
    period: Option<f64>,
    r: Vec<f64>,
    dr: Vec<f64>,
}

impl RCache {
    /// Tabulates on `[t0, t1]` (or one period) with node spacing `step` and
    /// quadrature step `h`.
    pub fn new(
        signal: &ContinuousPESignal,
        t0: f64,
        t1: f64,
        step: f64,
        h: f64,
    ) -> Result<Self, PeError> {
        if !(step > 0.0) || !(t1 >= t0) {
            return Err(PeError::Config(format!(
                "bad cache range [{t0}, {t1}] step {step}"
            )));
        }
        let period = signal.period();
        let (t0, t1) = match period {
            Some(p) => (0.0, p),
            None => (t0, t1),
        };
        let n = ((t1 - t0) / step).ceil().max(1.0) as usize;
        let step = (t1 - t0) / n as f64;
        let mut r = Vec::with_capacity(n + 1);
        let mut dr = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let t = t0 + i as f64 * step;
            r.push(signal.int_r(t, h)?);
            dr.push(signal.int_r_dt(t, h)?);
        }
        Ok(Self {
            signal: signal.clone(),
            h,
            t0,
            step,
            period,
            r,
            dr,
        })
    }

    /// Cache over one period (or `[0, horizon]`) at spacing `τ/256`.
    pub fn for_signal(signal: &ContinuousPESignal, horizon: f64) -> Result<Self, PeError> {
        let h = signal.default_step();
        Self::new(signal, 0.0, horizon.max(signal.tau), h, h)
    }

    pub fn signal(&self) -> &ContinuousPESignal {
        &self.signal
    }

    fn locate(&self, t: f64) -> Option<(usize, f64)> {
        let t = match self.period {
            Some(p) => t.rem_euclid(p),
            None => t,
        };
        let x = (t - self.t0) / self.step;
        let last = self.r.len() - 1;
        if !(x >= 0.0) || x > last as f64 {
            return None;
        }
        let i = (x.floor() as usize).min(last - 1);
        Some((i, x - i as f64))
    }

    /// `R(t)`.
    pub fn r(&self, t: f64) -> f64 {
        match self.locate(t) {
            Some((i, u)) => {
                let (h00, h10, h01, h11) = hermite_basis(u);
                let s = self.step;
                h00 * self.r[i]
                    + h10 * s * self.dr[i]
                    + h01 * self.r[i + 1]
                    + h11 * s * self.dr[i + 1]
            }
            None => self.signal.int_r(t, self.h).unwrap_or(f64::NAN),
        }
    }

    /// `R′(t)`.
    pub fn dr(&self, t: f64) -> f64 {
        match self.locate(t) {
            Some((i, u)) => {
                let s = self.step;
                let d00 = 6.0 * u * u - 6.0 * u;
                let d10 = 3.0 * u * u - 4.0 * u + 1.0;
                let d01 = -d00;
                let d11 = 3.0 * u * u - 2.0 * u;
                (d00 * self.r[i] + d01 * self.r[i + 1]) / s
                    + d10 * self.dr[i]
                    + d11 * self.dr[i + 1]
            }
            None => self.signal.int_r_dt(t, self.h).unwrap_or(f64::NAN),
        }
    }
}

fn hermite_basis(u: f64) -> (f64, f64, f64, f64) {
    let u2 = u * u;
    let u3 = u2 * u;
    (
        2.0 * u3 - 3.0 * u2 + 1.0,
        u3 - 2.0 * u2 + u,
        -2.0 * u3 + 3.0 * u2,
        u3 - u2,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant(c: f64, tau: f64, eps: f64) -> ContinuousPESignal {
        ContinuousPESignal::new(ContinuousSource::Constant(c), tau, eps, c).unwrap()
    }

    #[test]
    fn constant_signal() {
        let q = constant(1.0, 2.0, 2.0);
        let h = q.default_step();
        assert!(verify_continuous_pe(&q, 10.0, h).unwrap().is_pass());
        assert!((q.int_r(3.0, h).unwrap() - 2.0).abs() < 1e-12);
        assert!(check_r_bound(&q, 10.0, h).unwrap().is_pass());
        assert_eq!(constant(0.0, 2.0, 1.0).int_r(1.0, h).unwrap(), 0.0);
    }

    #[test]
    fn sin2_windows() {
        let q = ContinuousPESignal::sin2();
        let h = q.default_step();
        assert!(verify_continuous_pe(&q, 20.0, h).unwrap().is_pass());
        let too_much = ContinuousPESignal::new(ContinuousSource::Sin2, PI, 2.0, 1.0).unwrap();
        assert!(!verify_continuous_pe(&too_much, 20.0, h).unwrap().is_pass());
        assert!((q.int_r(PI, h).unwrap() - PI * PI / 4.0).abs() < 1e-8);
    }

    #[test]
    fn coarse_step_rejected() {
        let q = ContinuousPESignal::sin2();
        assert!(matches!(q.int_r(1.0, PI / 10.0), Err(PeError::Config(_))));
    }

    #[test]
    fn cache_matches_direct() {
        let q = ContinuousPESignal::sin2();
        let c = RCache::for_signal(&q, 10.0).unwrap();
        let h = q.default_step();
        for i in 0..200 {
            let t = 0.037 * i as f64;
            assert!((c.r(t) - q.int_r(t, h).unwrap()).abs() < 1e-8);
            assert!((c.dr(t) - q.int_r_dt(t, h).unwrap()).abs() < 1e-5);
        }
    }

    #[test]
    fn table_domain() {
        let q = ContinuousPESignal::new(
            ContinuousSource::Table {
                times: vec![-1.0, 0.0, 4.0],
                values: vec![1.0, 1.0, 1.0],
            },
            1.0,
            1.0,
            1.0,
        )
        .unwrap();
        let h = q.default_step();
        assert!((q.int_r(1.0, h).unwrap() - 0.5).abs() < 1e-12);
        assert!(matches!(q.int_r(5.0, h), Err(PeError::TimeDomain(_))));
        assert!(q.q_checked(-2.0).is_err());
    }
}
