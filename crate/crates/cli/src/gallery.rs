//! Catalogue of code-registered systems with numeric parameters.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use strictlyap::certify::GridSpec;
use strictlyap::matrosov::{instances, Mode};
use strictlyap::pe::{ContinuousPESignal, DiscretePESignal};
use strictlyap::systems::{Budget, ContinuousSystem, DiscreteSystem, HybridSystem, Policy, SetFn};

use crate::error::CliError;

/// A numeric parameter with its default and admissible range.
#[derive(Debug, Clone, Copy)]
pub struct ParamSpec {
    pub name: &'static str,
    pub default: f64,
    /// Exclusive lower bound.
    pub above: Option<f64>,
    /// Exclusive upper bound.
    pub below: Option<f64>,
    pub integer: bool,
    pub doc: &'static str,
}

const fn real(
    name: &'static str,
    default: f64,
    above: Option<f64>,
    below: Option<f64>,
    doc: &'static str,
) -> ParamSpec {
    ParamSpec {
        name,
        default,
        above,
        below,
        integer: false,
        doc,
    }
}

const fn int(name: &'static str, default: f64, above: f64, doc: &'static str) -> ParamSpec {
    ParamSpec {
        name,
        default,
        above: Some(above),
        below: None,
        integer: true,
        doc,
    }
}

/// Which construction an example runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    FrozenHalving,
    FrozenConvexLinear,
    HpSin2,
    Sin2Flow,
    Matrosov(Mode),
    /// Simulation only: jumps forever from every state.
    ZenoForced,
}

/// Simulation defaults of an example.
#[derive(Debug, Clone)]
pub struct SimDefaults {
    pub initial_states: usize,
    pub radius: f64,
    pub policy: Policy,
    pub budget: Budget,
}

#[derive(Debug)]
pub struct Example {
    pub id: &'static str,
    pub summary: &'static str,
    /// Shown by `examples list`; unlisted entries are reachable from configs only.
    pub listed: bool,
    pub kind: Kind,
    pub params: &'static [ParamSpec],
}

static CATALOG: &[Example] = &[
    Example {
        id: "frozen-halving",
        summary: "x+ = x/2 frozen on even steps; PE strictification of V = x^2",
        listed: true,
        kind: Kind::FrozenHalving,
        params: &[
            real(
                "factor",
                0.5,
                Some(-1.0),
                Some(1.0),
                "contraction of the active map",
            ),
            real(
                "delta",
                1.0,
                Some(0.0),
                None,
                "claimed excitation level of p(k) = k mod 2",
            ),
        ],
    },
    Example {
        id: "frozen-convex-linear",
        summary:
            "planar x+ = a R(angle) x frozen outside a duty cycle; convexity bound on V = |x|^2",
        listed: true,
        kind: Kind::FrozenConvexLinear,
        params: &[
            real("a", 0.5, Some(0.0), Some(1.0), "gain of the active map"),
            real("angle", 0.7, None, None, "rotation angle of the active map"),
            int("period", 4.0, 0.0, "length of the duty cycle"),
            int("on", 1.0, 0.0, "active steps per cycle"),
        ],
    },
    Example {
        id: "hp-sin2",
        summary: "hybrid system with annihilating jumps on odd steps and sin^2-damped flow",
        listed: true,
        kind: Kind::HpSin2,
        params: &[
            real(
                "spacing",
                0.5,
                Some(0.0),
                None,
                "time between scheduled jumps",
            ),
            int("segments", 10.0, 0.0, "flow segments per arc"),
        ],
    },
    Example {
        id: "sin2-flow",
        summary: "x' = -a sin^2(t) x; continuous PE strictification",
        listed: true,
        kind: Kind::Sin2Flow,
        params: &[real("a", 1.0, Some(0.0), None, "damping gain")],
    },
    Example {
        id: "matrosov-sstar",
        summary: "Matrosov pipeline on the discrete reference instance",
        listed: true,
        kind: Kind::Matrosov(Mode::Discrete),
        params: &[],
    },
    Example {
        id: "matrosov-sstar-continuous",
        summary: "Matrosov pipeline on the continuous reference instance",
        listed: true,
        kind: Kind::Matrosov(Mode::Continuous),
        params: &[],
    },
    Example {
        id: "matrosov-sstar-hybrid",
        summary: "Matrosov pipeline on the planar hybrid reference instance",
        listed: true,
        kind: Kind::Matrosov(Mode::Hybrid),
        params: &[],
    },
    Example {
        id: "zeno-forced",
        summary: "identity jumps on the whole space; exercises the Zeno guard",
        listed: false,
        kind: Kind::ZenoForced,
        params: &[],
    },
];

pub fn catalog() -> &'static [Example] {
    CATALOG
}

pub fn find(id: &str) -> Option<&'static Example> {
    CATALOG.iter().find(|e| e.id == id)
}

/// Ids shown by `examples list`.
pub fn listed() -> impl Iterator<Item = &'static Example> {
    CATALOG.iter().filter(|e| e.listed)
}

/// `p(k) = k mod 2`.
pub fn odd_indicator(l: usize, delta: f64) -> Result<DiscretePESignal, CliError> {
    Ok(DiscretePESignal::periodic(vec![0.0, 1.0], l, delta)?)
}

fn always(_: &[f64]) -> bool {
    true
}

fn never(_: &[f64]) -> bool {
    false
}

fn identity_jump() -> DiscreteSystem {
    DiscreteSystem::new(|x, _| x.to_vec())
}

fn still_flow() -> ContinuousSystem {
    ContinuousSystem::new(|x, _| vec![0.0; x.len()])
}

impl Example {
    pub fn dim(&self) -> usize {
        match self.kind {
            Kind::FrozenConvexLinear | Kind::Matrosov(Mode::Hybrid) => 2,
            _ => 1,
        }
    }

    /// Fills defaults and checks every parameter against its range.
    pub fn resolve_params(
        &self,
        given: &BTreeMap<String, f64>,
    ) -> Result<BTreeMap<String, f64>, CliError> {
        for name in given.keys() {
            if !self.params.iter().any(|p| p.name == name) {
                return Err(CliError::Config(format!(
                    "example {} has no parameter {name:?}",
                    self.id
                )));
            }
        }
        let mut out = BTreeMap::new();
        for spec in self.params {
            let v = given.get(spec.name).copied().unwrap_or(spec.default);
            let ok = v.is_finite()
                && spec.above.is_none_or(|a| v > a)
                && spec.below.is_none_or(|b| v < b)
                && (!spec.integer || v.fract() == 0.0);
            if !ok {
                return Err(CliError::Config(format!(
                    "parameter {} = {v} is out of range ({})",
                    spec.name, spec.doc
                )));
            }
            out.insert(spec.name.to_string(), v);
        }
        if self.kind == Kind::FrozenConvexLinear && out["on"] > out["period"] {
            return Err(CliError::Config(
                "parameter on must not exceed period".into(),
            ));
        }
        Ok(out)
    }

    pub fn default_grid(&self) -> GridSpec {
        match self.kind {
            Kind::FrozenHalving => GridSpec::cube(1, 10.0, 201).with_index(0, 100),
            Kind::FrozenConvexLinear => GridSpec::cube(2, 5.0, 41).with_index(0, 20),
            Kind::HpSin2 => GridSpec::cube(1, 5.0, 101)
                .with_time(0.0, 2.0 * PI, 33)
                .with_index(0, 3),
            Kind::Sin2Flow => GridSpec::cube(1, 5.0, 101).with_time(0.0, 4.0 * PI, 65),
            Kind::Matrosov(Mode::Discrete) => GridSpec::cube(1, 5.0, 201).with_index(0, 50),
            Kind::Matrosov(Mode::Continuous) => {
                GridSpec::cube(1, 5.0, 101).with_time(0.0, 2.0 * PI, 33)
            }
            Kind::Matrosov(Mode::Hybrid) => GridSpec::cube(2, 5.0, 21)
                .with_time(0.0, PI, 9)
                .with_index(0, 3),
            Kind::ZenoForced => GridSpec::cube(1, 1.0, 3),
        }
    }

    /// Simulation defaults; the scheduled jumps of `hp-sin2` follow its parameters.
    pub fn sim_defaults(&self, params: &BTreeMap<String, f64>) -> SimDefaults {
        let budget = |flow: f64, jumps: usize| Budget {
            max_flow_time: flow,
            max_jumps: jumps,
            ..Budget::default()
        };
        let (initial_states, radius, policy, budget) = match self.kind {
            Kind::FrozenHalving | Kind::FrozenConvexLinear => {
                (8, 5.0, Policy::JumpPriority, budget(0.0, 40))
            }
            Kind::HpSin2 => {
                let (spacing, segments) = (params["spacing"], params["segments"] as usize);
                let times = (1..segments).map(|i| i as f64 * spacing).collect();
                (
                    20,
                    5.0,
                    Policy::Schedule(times),
                    budget(spacing * segments as f64, segments - 1),
                )
            }
            Kind::Sin2Flow => (8, 5.0, Policy::JumpPriority, budget(8.0, 0)),
            Kind::Matrosov(Mode::Discrete) => (8, 5.0, Policy::JumpPriority, budget(0.0, 30)),
            Kind::Matrosov(Mode::Continuous) => (8, 5.0, Policy::JumpPriority, budget(8.0, 0)),
            Kind::Matrosov(Mode::Hybrid) => (8, 5.0, Policy::JumpPriority, budget(8.0, 40)),
            Kind::ZenoForced => (
                1,
                1.0,
                Policy::JumpPriority,
                Budget {
                    max_consecutive_jumps: 500,
                    ..budget(1.0, usize::MAX)
                },
            ),
        };
        SimDefaults {
            initial_states,
            radius,
            policy,
            budget,
        }
    }

    /// The hybrid system simulated for this example.
    pub fn hybrid_system(&self, params: &BTreeMap<String, f64>) -> Result<HybridSystem, CliError> {
        let dim = self.dim();
        Ok(match self.kind {
            Kind::FrozenHalving | Kind::FrozenConvexLinear => {
                let (sys, _) = frozen_parts(self.kind, params)?;
                HybridSystem::new(dim, never, always, still_flow(), sys)
            }
            Kind::HpSin2 => HybridSystem::new(dim, always, always, sin2_flow(1.0), hp_jump()?),
            Kind::Sin2Flow => {
                HybridSystem::new(dim, always, never, sin2_flow(params["a"]), identity_jump())
            }
            Kind::Matrosov(mode) => {
                let data = instances::sstar(mode);
                let flow = data.flow.clone().unwrap_or_else(still_flow);
                let jump = data.jump.clone().unwrap_or_else(identity_jump);
                let pick = |set: &Option<SetFn>, active: bool| -> SetFn {
                    match (set, active) {
                        (_, false) => Arc::new(never),
                        (Some(s), true) => s.clone(),
                        (None, true) => Arc::new(always),
                    }
                };
                let c = pick(&data.flow_set, mode.has_flows());
                let d = pick(&data.jump_set, mode.has_jumps());
                HybridSystem::new(
                    dim,
                    move |x: &[f64]| c(x),
                    move |x: &[f64]| d(x),
                    flow,
                    jump,
                )
            }
            Kind::ZenoForced => {
                HybridSystem::new(dim, always, always, still_flow(), identity_jump())
            }
        })
    }
}

/// `ẋ = −a sin²(t) x`.
pub fn sin2_flow(a: f64) -> ContinuousSystem {
    ContinuousSystem::new(move |x, t| {
        let f = -a * t.sin().powi(2);
        x.iter().map(|v| f * v).collect()
    })
}

/// `x⁺ = (1 − p(k+1))x` with `p(k) = k mod 2`.
pub fn hp_jump() -> Result<DiscreteSystem, CliError> {
    let p = odd_indicator(1, 1.0)?;
    Ok(DiscreteSystem::new(move |x, k| {
        let w = 1.0 - p.p(k + 1).unwrap_or(f64::NAN);
        x.iter().map(|v| w * v).collect()
    }))
}

/// The frozen jump map and its PE signal.
pub fn frozen_parts(
    kind: Kind,
    params: &BTreeMap<String, f64>,
) -> Result<(DiscreteSystem, DiscretePESignal), CliError> {
    let (base, p) = match kind {
        Kind::FrozenHalving => {
            let f = params["factor"];
            let base = DiscreteSystem::new(move |x, _| x.iter().map(|v| f * v).collect());
            (base, odd_indicator(1, params["delta"])?)
        }
        Kind::FrozenConvexLinear => {
            let (a, th) = (params["a"], params["angle"]);
            let (c, s) = (th.cos(), th.sin());
            let base = DiscreteSystem::new(move |x, _| {
                vec![a * (c * x[0] - s * x[1]), a * (s * x[0] + c * x[1])]
            });
            let (period, on) = (params["period"] as usize, params["on"] as usize);
            let pattern = (0..period)
                .map(|i| if i < on { 1.0 } else { 0.0 })
                .collect();
            (
                base,
                DiscretePESignal::periodic(pattern, period - 1, on as f64)?,
            )
        }
        _ => unreachable!("not a frozen example"),
    };
    Ok((strictlyap::systems::build_frozen_system(&base, &p)?, p))
}

/// Quadratic continuous signal for the sin² examples.
pub fn sin2_signal(a: f64) -> Result<ContinuousPESignal, CliError> {
    use strictlyap::pe::ContinuousSource;
    if a == 1.0 {
        return Ok(ContinuousPESignal::sin2());
    }
    let src = ContinuousSource::Func(Arc::new(move |t: f64| a * t.sin().powi(2)));
    Ok(ContinuousPESignal::new(src, PI, a * PI / 2.0, a)?)
}
