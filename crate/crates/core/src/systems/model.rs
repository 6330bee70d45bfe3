use std::fmt;
use std::sync::Arc;

use super::SimError;
use crate::funcspace::Gain;
use crate::pe::{DiscretePESignal, DiscreteSource};

type JumpFn = dyn Fn(&[f64], i64) -> Vec<f64> + Send + Sync;
type FlowFn = dyn Fn(&[f64], f64) -> Vec<f64> + Send + Sync;
/// Membership predicate for a flow or jump set.
pub type SetFn = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;

/// `x_{k+1} = F(x_k, k)` with an optional growth envelope `|F(x,k)| ≤ μ_F(|x|)`.
#[derive(Clone)]
pub struct DiscreteSystem {
    f: Arc<JumpFn>,
    pub usb: Option<Gain>,
}

impl fmt::Debug for DiscreteSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DiscreteSystem")
            .field("usb", &self.usb.is_some())
            .finish()
    }
}

impl DiscreteSystem {
    pub fn new(f: impl Fn(&[f64], i64) -> Vec<f64> + Send + Sync + 'static) -> Self {
        Self {
            f: Arc::new(f),
            usb: None,
        }
    }

    pub fn with_usb(mut self, mu_f: Gain) -> Self {
        self.usb = Some(mu_f);
        self
    }

    pub fn apply(&self, x: &[f64], k: i64) -> Vec<f64> {
        (self.f)(x, k)
    }
}

/// `ẋ = G(x, t)` with an optional growth envelope `|G(x,t)| ≤ μ_G(|x|)`.
#[derive(Clone)]
pub struct ContinuousSystem {
    g: Arc<FlowFn>,
    pub usb: Option<Gain>,
}

impl fmt::Debug for ContinuousSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ContinuousSystem")
            .field("usb", &self.usb.is_some())
            .finish()
    }
}

impl ContinuousSystem {
    pub fn new(g: impl Fn(&[f64], f64) -> Vec<f64> + Send + Sync + 'static) -> Self {
        Self {
            g: Arc::new(g),
            usb: None,
        }
    }

    pub fn with_usb(mut self, mu_g: Gain) -> Self {
        self.usb = Some(mu_g);
        self
    }

    pub fn rhs(&self, x: &[f64], t: f64) -> Vec<f64> {
        (self.g)(x, t)
    }
}

/// Flow `G` on `C`, jumps `F` on `D`.
#[derive(Clone)]
pub struct HybridSystem {
    pub dim: usize,
    pub c: SetFn,
    pub d: SetFn,
    pub flow: ContinuousSystem,
    pub jump: DiscreteSystem,
}

impl fmt::Debug for HybridSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HybridSystem")
            .field("dim", &self.dim)
            .field("flow", &self.flow)
            .field("jump", &self.jump)
            .finish()
    }
}

impl HybridSystem {
    pub fn new(
        dim: usize,
        c: impl Fn(&[f64]) -> bool + Send + Sync + 'static,
        d: impl Fn(&[f64]) -> bool + Send + Sync + 'static,
        flow: ContinuousSystem,
        jump: DiscreteSystem,
    ) -> Self {
        Self {
            dim,
            c: Arc::new(c),
            d: Arc::new(d),
            flow,
            jump,
        }
    }

    pub fn in_c(&self, x: &[f64]) -> bool {
        (self.c)(x)
    }

    pub fn in_d(&self, x: &[f64]) -> bool {
        (self.d)(x)
    }
}

/// One jump `x′ = F(x, k)`.
pub fn step_jump(sys: &DiscreteSystem, x: &[f64], k: i64) -> Result<Vec<f64>, SimError> {
    let y = sys.apply(x, k);
    if y.iter().all(|v| v.is_finite()) {
        Ok(y)
    } else {
        Err(SimError::Blowup {
            t: f64::NAN,
            k,
            last_good_t: f64::NAN,
        })
    }
}

/// `F_p(x, k) = [1 − p(k+1)]x + p(k+1)F(x, k)`, freezing the dynamics where `p = 0`.
///
/// Tabulated and periodic `p` are checked against `[0, 1]` up front; indices
/// where `p` is undefined produce a non-finite state.
pub fn build_frozen_system(
    base: &DiscreteSystem,
    p: &DiscretePESignal,
) -> Result<DiscreteSystem, SimError> {
    let samples: &[f64] = match &p.source {
        DiscreteSource::Table { values, .. } => values,
        DiscreteSource::Periodic { pattern } => pattern,
        DiscreteSource::Func(_) => &[],
    };
    if let Some(bad) = samples.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(SimError::Parameter(format!("p value {bad} outside [0, 1]")));
    }
    let (base, p) = (base.clone(), p.clone());
    let usb = base.usb.clone();
    let mut sys = DiscreteSystem::new(move |x, k| {
        let w = match p.p(k + 1) {
            Ok(w) => w,
            Err(_) => return vec![f64::NAN; x.len()],
        };
        let fx = base.apply(x, k);
        x.iter()
            .zip(fx)
            .map(|(xi, fi)| (1.0 - w) * xi + w * fi)
            .collect()
    });
    // |F_p| ≤ max(|x|, μ_F(|x|)).
    if let Some(mu) = usb {
        sys = sys.with_usb(mu.max(&Gain::identity()));
    }
    Ok(sys)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn halve() -> DiscreteSystem {
        DiscreteSystem::new(|x, _| x.iter().map(|v| v / 2.0).collect())
    }

    #[test]
    fn jumps() {
        assert_eq!(step_jump(&halve(), &[1.0], 0).unwrap(), vec![0.5]);
        let zero = DiscreteSystem::new(|x, _| vec![0.0; x.len()]);
        assert_eq!(step_jump(&zero, &[3.0], 0).unwrap(), vec![0.0]);
        let bad = DiscreteSystem::new(|_, _| vec![f64::INFINITY]);
        assert!(step_jump(&bad, &[1.0], 0).is_err());
    }

    #[test]
    fn frozen_endpoints() {
        let p = DiscretePESignal::periodic(vec![0.0, 1.0], 1, 1.0).unwrap();
        let fp = build_frozen_system(&halve(), &p).unwrap();
        // p(1) = 1: the base map; p(2) = 0: identity.
        assert_eq!(fp.apply(&[2.0], 0), vec![1.0]);
        assert_eq!(fp.apply(&[2.0], 1), vec![2.0]);
    }

    #[test]
    fn frozen_rejects_out_of_range_p() {
        let p = DiscretePESignal::periodic(vec![0.0, 1.5], 1, 1.0).unwrap();
        assert!(build_frozen_system(&halve(), &p).is_err());
    }
}
