use rayon::prelude::*;

use super::grid::{GridSpec, Sample};
use super::report::{InequalityRecord, Witness};
use super::{CertifyError, UPPD_TOL};
use crate::funcspace::{Gain, ScalarField};
use crate::systems::{ContinuousSystem, DiscreteSystem};

/// Name, anchor, tolerance and scaling of one inequality `lhs ≤ rhs`.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub anchor: String,
    pub tol: f64,
    /// Divide margins by `max(1, |rhs|)`.
    pub relative: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, anchor: impl Into<String>, tol: f64) -> Self {
        Self {
            name: name.into(),
            anchor: anchor.into(),
            tol,
            relative: false,
        }
    }

    pub fn relative(mut self) -> Self {
        self.relative = true;
        self
    }
}

/// Euclidean norm.
pub fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

#[derive(Clone, Copy)]
struct Worst {
    margin: f64,
    idx: usize,
    lhs: f64,
    rhs: f64,
}

fn worse(a: Worst, b: Worst) -> Worst {
    if a.margin > b.margin || (a.margin == b.margin && a.idx < b.idx) {
        a
    } else {
        b
    }
}

/// Evaluates `f(sample) = Some((lhs, rhs))` in parallel and keeps the largest
/// margin (lowest sample index on ties, so the result is deterministic).
/// `None` skips a sample; a NaN margin counts as an infinite violation.
pub fn check_inequality<F>(check: &Check, samples: &[Sample], f: F) -> InequalityRecord
where
    F: Fn(&Sample) -> Option<(f64, f64)> + Sync,
{
    let evaluated: Vec<Worst> = samples
        .par_iter()
        .enumerate()
        .filter_map(|(idx, s)| {
            let (lhs, rhs) = f(s)?;
            let mut margin = lhs - rhs;
            if check.relative {
                margin /= rhs.abs().max(1.0);
            }
            if margin.is_nan() {
                margin = f64::INFINITY;
            }
            Some(Worst {
                margin,
                idx,
                lhs,
                rhs,
            })
        })
        .collect();
    let worst = evaluated.iter().copied().reduce(worse);
    let worst_margin = worst.map_or(f64::NEG_INFINITY, |w| w.margin);
    InequalityRecord {
        name: check.name.clone(),
        anchor: check.anchor.clone(),
        worst_margin,
        witness: worst.map(|w| {
            let s = &samples[w.idx];
            Witness {
                x: s.x.clone(),
                t: s.t,
                k: s.k,
                lhs: w.lhs,
                rhs: w.rhs,
            }
        }),
        samples_checked: evaluated.len(),
        tolerance: check.tol,
        pass: worst_margin <= check.tol,
    }
}

/// `α₁(|x|) ≤ V(x,t,k) ≤ α₂(|x|)`, with margins relative to the envelope value.
pub fn check_uppd(
    v: &ScalarField,
    alpha1: &Gain,
    alpha2: &Gain,
    grid: &GridSpec,
) -> Result<InequalityRecord, CertifyError> {
    let samples = grid.samples()?;
    let check = Check::new("uppd", "envelopes of the Lyapunov function", UPPD_TOL).relative();
    let lower = check_inequality(&check, &samples, |s| {
        Some((alpha1.eval(norm(&s.x)), v.eval(&s.x, s.t, s.k)))
    });
    let upper = check_inequality(&check, &samples, |s| {
        Some((v.eval(&s.x, s.t, s.k), alpha2.eval(norm(&s.x))))
    });
    Ok(if lower.worst_margin >= upper.worst_margin {
        lower
    } else {
        upper
    })
}

/// `U(F(x,k), t, k+1) − U(x,t,k) ≤ bound(x,t,k)`.
pub fn check_discrete_decay(
    u: &ScalarField,
    sys: &DiscreteSystem,
    bound: &ScalarField,
    grid: &GridSpec,
    tol: f64,
) -> Result<InequalityRecord, CertifyError> {
    let samples = grid.samples()?;
    let check = Check::new("discrete_decay", "decrease along jumps", tol);
    Ok(check_inequality(&check, &samples, |s| {
        let y = sys.apply(&s.x, s.k);
        let du = u.eval(&y, s.t, s.k + 1) - u.eval(&s.x, s.t, s.k);
        Some((du, bound.eval(&s.x, s.t, s.k)))
    }))
}

fn fd_eta(x: &[f64]) -> f64 {
    1e-5 * (norm(x) + 1.0)
}

/// `𝒟V(x,t,k) = ∂V/∂t + ∇V·G(x,t)`, from oracles when `V` provides them and
/// otherwise by one finite difference along `(G, 1)`: central, or
/// second-order forward when `t < η`.
pub fn dv_along_flow(v: &ScalarField, sys: &ContinuousSystem, x: &[f64], t: f64, k: i64) -> f64 {
    let g = sys.rhs(x, t);
    if let Some(grad) = v.grad_x(x, t, k) {
        let vt = if v.depends_on_t {
            v.dt(x, t, k)
        } else {
            Some(0.0)
        };
        if let Some(vt) = vt {
            return vt + grad.iter().zip(&g).map(|(a, b)| a * b).sum::<f64>();
        }
    }
    dv_finite_difference(v, &g, x, t, k)
}

/// Finite-difference `𝒟V` along the direction `g`.
pub fn dv_finite_difference(v: &ScalarField, g: &[f64], x: &[f64], t: f64, k: i64) -> f64 {
    let eta = fd_eta(x);
    let shift = |a: f64| -> Vec<f64> { x.iter().zip(g).map(|(xi, gi)| xi + a * gi).collect() };
    if t >= eta || !v.depends_on_t {
        (v.eval(&shift(eta), t + eta, k) - v.eval(&shift(-eta), t - eta, k)) / (2.0 * eta)
    } else {
        (-3.0 * v.eval(x, t, k) + 4.0 * v.eval(&shift(eta), t + eta, k)
            - v.eval(&shift(2.0 * eta), t + 2.0 * eta, k))
            / (2.0 * eta)
    }
}

/// `𝒟V(x,t,k) ≤ bound(x,t,k)`.
pub fn check_continuous_decay(
    v: &ScalarField,
    sys: &ContinuousSystem,
    bound: &ScalarField,
    grid: &GridSpec,
    tol: f64,
) -> Result<InequalityRecord, CertifyError> {
    let samples = grid.samples()?;
    let check = Check::new("continuous_decay", "decrease along flows", tol);
    Ok(check_inequality(&check, &samples, |s| {
        Some((
            dv_along_flow(v, sys, &s.x, s.t, s.k),
            bound.eval(&s.x, s.t, s.k),
        ))
    }))
}

/// `|F(x,k)| ≤ μ_F(|x|)` for the declared envelope.
pub fn check_discrete_usb(
    sys: &DiscreteSystem,
    grid: &GridSpec,
) -> Result<Option<InequalityRecord>, CertifyError> {
    let Some(mu) = &sys.usb else { return Ok(None) };
    let samples = grid.samples()?;
    let check = Check::new("jump_growth", "growth envelope of the jump map", UPPD_TOL).relative();
    Ok(Some(check_inequality(&check, &samples, |s| {
        Some((norm(&sys.apply(&s.x, s.k)), mu.eval(norm(&s.x))))
    })))
}

/// `|G(x,t)| ≤ μ_G(|x|)` for the declared envelope.
pub fn check_continuous_usb(
    sys: &ContinuousSystem,
    grid: &GridSpec,
) -> Result<Option<InequalityRecord>, CertifyError> {
    let Some(mu) = &sys.usb else { return Ok(None) };
    let samples = grid.samples()?;
    let check = Check::new("flow_growth", "growth envelope of the flow map", UPPD_TOL).relative();
    Ok(Some(check_inequality(&check, &samples, |s| {
        Some((norm(&sys.rhs(&s.x, s.t)), mu.eval(norm(&s.x))))
    })))
}
