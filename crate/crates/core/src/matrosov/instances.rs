//! Reference Matrosov data with quadratic `V₁`, vanishing `V₂`, and an
//! excitation that switches the decay on and off.

use std::sync::Arc;

use crate::funcspace::{Gain, ScalarField};
use crate::pe::{ContinuousPESignal, DiscretePESignal};
use crate::systems::{ContinuousSystem, DiscreteSystem};

use super::{MatrosovData, Mode};

/// Rotation speed of the hybrid flow.
pub const HYBRID_OMEGA: f64 = 1.0;

fn sq(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

fn quadratic_v1() -> ScalarField {
    ScalarField::of_state(sq).with_grad(|x, _, _| x.iter().map(|v| 2.0 * v).collect())
}

fn odd_indicator() -> DiscretePESignal {
    DiscretePESignal::periodic(vec![0.0, 1.0], 1, 1.0).expect("valid signal")
}

fn base(dim: usize, nu1: f64) -> MatrosovData {
    MatrosovData {
        dim,
        v1: quadratic_v1(),
        v2: ScalarField::zero(),
        n1: ScalarField::zero(),
        n2: ScalarField::zero(),
        w: ScalarField::of_state(|x| 0.75 * sq(x)),
        w_radial: Gain::power(0.75, 2.0),
        phi1: Gain::constant(1.0),
        phi2: Gain::identity(),
        alpha1: Gain::power(1.0, 2.0),
        alpha2: Gain::power(1.0, 2.0),
        sigma2: Gain::constant(0.0),
        sigma3: Gain::power(1.0, 2.0),
        nu1: Gain::power(nu1, 2.0),
        mu_f: None,
        p: None,
        q: None,
        jump: None,
        flow: None,
        jump_set: None,
        flow_set: None,
    }
}

/// `x⁺ = (1 − p(k+1)/2)x` with `p(k) = k mod 2`.
pub fn sstar_discrete() -> MatrosovData {
    let p = odd_indicator();
    let (pj, pn) = (p.clone(), p.clone());
    let mut d = base(1, 0.75);
    d.n1 = ScalarField::new(move |x, _, k| 0.75 * pn.p(k + 1).unwrap_or(f64::NAN) * sq(x))
        .with_dependence(false, true);
    d.jump = Some(DiscreteSystem::new(move |x, k| {
        let f = 1.0 - 0.5 * pj.p(k + 1).unwrap_or(f64::NAN);
        x.iter().map(|v| f * v).collect()
    }));
    d.mu_f = Some(Gain::identity());
    d.p = Some(p);
    d
}

/// `ẋ = −¾ sin²(t) x`.
pub fn sstar_continuous() -> MatrosovData {
    let q = ContinuousPESignal::sin2();
    let (qg, qn) = (q.clone(), q.clone());
    let mut d = base(1, 1.5);
    d.n1 = ScalarField::new(move |x, t, _| 1.5 * qn.q(t) * sq(x)).with_dependence(true, false);
    d.flow = Some(ContinuousSystem::new(move |x, t| {
        let f = -0.75 * qg.q(t);
        x.iter().map(|v| f * v).collect()
    }));
    d.q = Some(q);
    d
}

/// Planar hybrid data: flows `ẋ = −¾ sin²(t) x + ωJx` on `x₁ ≥ 0`, jumps
/// `x⁺ = −(1 − p(k+1)/2)x` on `x₁ < 0`.
pub fn sstar_hybrid() -> MatrosovData {
    let p = odd_indicator();
    let q = ContinuousPESignal::sin2();
    let (pj, pn, qg, qn) = (p.clone(), p.clone(), q.clone(), q.clone());
    let mut d = base(2, 1.5);
    d.n1 = ScalarField::new(move |x, t, k| {
        if x[0] < 0.0 {
            0.75 * pn.p(k + 1).unwrap_or(f64::NAN) * sq(x)
        } else {
            1.5 * qn.q(t) * sq(x)
        }
    })
    .with_dependence(true, true);
    d.jump = Some(DiscreteSystem::new(move |x, k| {
        let f = -(1.0 - 0.5 * pj.p(k + 1).unwrap_or(f64::NAN));
        x.iter().map(|v| f * v).collect()
    }));
    d.flow = Some(ContinuousSystem::new(move |x, t| {
        let f = -0.75 * qg.q(t);
        vec![
            f * x[0] - HYBRID_OMEGA * x[1],
            f * x[1] + HYBRID_OMEGA * x[0],
        ]
    }));
    d.mu_f = Some(Gain::identity());
    d.p = Some(p);
    d.q = Some(q);
    d.jump_set = Some(Arc::new(|x: &[f64]| x[0] < 0.0));
    d.flow_set = Some(Arc::new(|x: &[f64]| x[0] >= 0.0));
    d
}

/// The reference instance for `mode`.
pub fn sstar(mode: Mode) -> MatrosovData {
    match mode {
        Mode::Discrete => sstar_discrete(),
        Mode::Continuous => sstar_continuous(),
        Mode::Hybrid => sstar_hybrid(),
    }
}
