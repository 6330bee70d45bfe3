//! Constructions, certificates and arc checks of the catalogued examples.

use std::f64::consts::PI;

use strictlyap::certify::{
    check_arc_decay, check_continuous_decay, check_discrete_decay, check_inequality, dv_along_flow,
    norm, CertificationReport, Check, CONTINUOUS_TOL, DISCRETE_TOL,
};
use strictlyap::funcspace::{linear_nodes, Gain, GridFunction, RightExtension, ScalarField};
use strictlyap::matrosov::{
    check_assumption, construct, instances, Construction, MatrosovData, PipelineOptions,
};
use strictlyap::pe::DiscretePESignal;
use strictlyap::strictify::{
    strictify_continuous_pe, strictify_discrete_pe, strictify_hybrid_pe, ContinuousStrictification,
    DiscretePeConfig, DiscreteStrictification, HybridPeConfig, HybridStrictification, ThetaGain,
};
use strictlyap::systems::{ContinuousSystem, DiscreteSystem, HybridArc};

use crate::config::Settings;
use crate::error::CliError;
use crate::gallery::{frozen_parts, hp_jump, sin2_flow, sin2_signal, Kind};

/// Tolerance of the exact-arithmetic decay checks of the PE constructions.
pub const EXACT_TOL: f64 = 1e-9;
/// Tolerance of the per-step arc checks.
pub const ARC_TOL: f64 = 1e-6;
/// Slack subtracted from the guaranteed hybrid rate when checking arcs.
pub const ARC_RATE_SLACK: f64 = 0.05;

/// The constructed strict Lyapunov function of an example.
pub enum Built {
    Frozen {
        s: DiscreteStrictification,
        sys: DiscreteSystem,
        base: DiscreteSystem,
        p: DiscretePESignal,
        /// `1 − a²` of `ΔV ≤ −p(k+1)(1 − a²)V`.
        theta: f64,
    },
    Flow {
        s: ContinuousStrictification,
        sys: ContinuousSystem,
    },
    Hybrid {
        s: HybridStrictification,
        jump: DiscreteSystem,
        flow: ContinuousSystem,
        gamma: Gain,
    },
    Matrosov {
        data: Box<MatrosovData>,
        construction: Box<Construction>,
    },
    SimulationOnly,
}

fn quadratic() -> ScalarField {
    ScalarField::of_state(|x| x.iter().map(|v| v * v).sum())
        .with_grad(|x, _, _| x.iter().map(|v| 2.0 * v).collect())
}

/// Time horizon covering the grid and the simulations.
fn horizon(settings: &Settings) -> f64 {
    settings.grid.t_max.max(settings.budget.max_flow_time) + PI
}

fn k_horizon(settings: &Settings) -> i64 {
    let jumps = i64::try_from(settings.budget.max_jumps).unwrap_or(i64::MAX / 2);
    settings.grid.k_max.max(jumps.min(10_000)) + 1
}

impl Built {
    pub fn new(settings: &Settings) -> Result<Self, CliError> {
        let params = &settings.params;
        Ok(match settings.example.kind {
            kind @ (Kind::FrozenHalving | Kind::FrozenConvexLinear) => {
                let (sys, p) = frozen_parts(kind, params)?;
                let a = if kind == Kind::FrozenHalving {
                    params["factor"]
                } else {
                    params["a"]
                };
                let base = match kind {
                    Kind::FrozenHalving => {
                        DiscreteSystem::new(move |x, _| x.iter().map(|v| a * v).collect())
                    }
                    _ => {
                        let th = params["angle"];
                        let (c, s) = (th.cos(), th.sin());
                        DiscreteSystem::new(move |x, _| {
                            vec![a * (c * x[0] - s * x[1]), a * (s * x[0] + c * x[1])]
                        })
                    }
                };
                let theta = 1.0 - a * a;
                let s = strictify_discrete_pe(&DiscretePeConfig {
                    v: quadratic(),
                    theta: ThetaGain::Kinf(Gain::linear(theta)),
                    p: p.clone(),
                    horizon: Some(k_horizon(settings)),
                })?;
                Built::Frozen {
                    s,
                    sys,
                    base,
                    p,
                    theta,
                }
            }
            Kind::Sin2Flow => {
                let a = params["a"];
                let s = strictify_continuous_pe(&quadratic(), &sin2_signal(a)?, horizon(settings))?;
                Built::Flow {
                    s,
                    sys: sin2_flow(a),
                }
            }
            Kind::HpSin2 => {
                let gamma = Gain::linear(0.5);
                let s = strictify_hybrid_pe(&HybridPeConfig {
                    v: quadratic(),
                    r: Some(DiscretePESignal::periodic(
                        vec![0.0, f64::INFINITY],
                        1,
                        1.0,
                    )?),
                    q: Some(sin2_signal(1.0)?),
                    gamma: Some(gamma.clone()),
                    horizon_k: k_horizon(settings),
                    horizon_t: horizon(settings),
                })?;
                Built::Hybrid {
                    s,
                    jump: hp_jump()?,
                    flow: sin2_flow(1.0),
                    gamma,
                }
            }
            Kind::Matrosov(mode) => {
                let data = instances::sstar(mode);
                let opts = PipelineOptions {
                    horizon_t: horizon(settings),
                    ..PipelineOptions::default()
                };
                let construction = construct(&data, mode, &opts)?;
                Built::Matrosov {
                    data: Box::new(data),
                    construction: Box::new(construction),
                }
            }
            Kind::ZenoForced => Built::SimulationOnly,
        })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Built::Frozen { .. } => "discrete_pe",
            Built::Flow { .. } => "continuous_pe",
            Built::Hybrid { .. } => "hybrid_pe",
            Built::Matrosov { .. } => "matrosov",
            Built::SimulationOnly => "simulation_only",
        }
    }

    /// Scalar constants of the construction, in a fixed order.
    pub fn constants(&self) -> Vec<(String, f64)> {
        let named = |v: &[(&str, f64)]| v.iter().map(|(n, x)| (n.to_string(), *x)).collect();
        match self {
            Built::Frozen { s, p, theta, .. } => named(&[
                ("l", s.l as f64),
                ("delta", s.delta),
                ("theta", *theta),
                ("decay_coeff", s.decay_coeff),
                ("s_bar", p.s_bar()),
                ("jump_factor", self.arc_rates().0),
            ]),
            Built::Flow { s, .. } => named(&[
                ("tau", s.cache.signal().tau),
                ("eps", s.cache.signal().eps),
                ("rate", s.rate),
                ("certified_rate", s.certified_rate),
            ]),
            Built::Hybrid { s, .. } => named(&[
                ("rate", s.rate),
                ("jump_rate", s.jump_rate.unwrap_or(f64::NAN)),
                ("flow_rate", s.flow_rate.unwrap_or(f64::NAN)),
                (
                    "delta_tilde",
                    s.p_tilde.as_ref().map_or(f64::NAN, |p| p.delta),
                ),
                ("upper_factor", s.upper_factor),
            ]),
            Built::Matrosov {
                construction: c, ..
            } => named(&[
                ("decay", c.v6.decay),
                ("c", c.k34.c),
                ("base_weight", c.v6.base_weight),
                ("s_coeff", c.v6.s_coeff),
                ("r_coeff", c.v6.r_coeff),
                ("lambda1_lipschitz", c.gains.k1.lipschitz),
            ]),
            Built::SimulationOnly => Vec::new(),
        }
    }

    /// Tabulated gains and sections of the constructed function.
    pub fn gain_tables(
        &self,
        settings: &Settings,
    ) -> Result<Vec<(String, GridFunction)>, CliError> {
        let r = settings
            .grid
            .state_max
            .iter()
            .chain(&settings.grid.state_min)
            .fold(1.0, |m: f64, v| m.max(v.abs()));
        let radial = linear_nodes(r, 101);
        let along_axis = |f: &ScalarField, dim: usize, t: f64, k: i64| {
            GridFunction::from_fn(&radial, RightExtension::LinearContinuation, |s| {
                let mut x = vec![0.0; dim];
                x[0] = s;
                f.eval(&x, t, k)
            })
        };
        let dim = settings.example.dim();
        Ok(match self {
            Built::Frozen { s, p, .. } => {
                let period = p.period().unwrap_or(p.l + 1) as i64;
                let nodes = strictlyap::funcspace::default_nodes();
                let mut out = vec![
                    (
                        "kappa".to_string(),
                        s.kappa
                            .tabulate(&nodes, RightExtension::LinearContinuation)?,
                    ),
                    (
                        "gamma".to_string(),
                        s.gamma
                            .tabulate(&nodes, RightExtension::LinearContinuation)?,
                    ),
                ];
                for k in 0..period {
                    out.push((format!("u_k{k}"), along_axis(&s.u, dim, 0.0, k)?));
                }
                out
            }
            Built::Flow { s, .. } => {
                let tau = s.cache.signal().tau;
                let times = linear_nodes(horizon(settings), 257);
                vec![
                    (
                        "r".to_string(),
                        GridFunction::from_fn(&times, RightExtension::LinearContinuation, |t| {
                            s.cache.r(t)
                        })?,
                    ),
                    (
                        "v_cts_weight".to_string(),
                        GridFunction::from_fn(&times, RightExtension::LinearContinuation, |t| {
                            1.0 + s.cache.r(t) / tau
                        })?,
                    ),
                ]
            }
            Built::Hybrid { s, .. } => {
                let times = linear_nodes(horizon(settings), 257);
                let mut out = Vec::new();
                if let Some(c) = &s.cache {
                    out.push((
                        "r".to_string(),
                        GridFunction::from_fn(&times, RightExtension::LinearContinuation, |t| {
                            c.r(t)
                        })?,
                    ));
                }
                for k in 0..2 {
                    out.push((
                        format!("v_sharp_t0_k{k}"),
                        along_axis(&s.v_sharp, dim, 0.0, k)?,
                    ));
                }
                out
            }
            Built::Matrosov { construction, .. } => construction.gain_tables()?,
            Built::SimulationOnly => Vec::new(),
        })
    }

    /// The function checked along simulated arcs.
    pub fn lyapunov(&self) -> Option<&ScalarField> {
        match self {
            Built::Frozen { s, .. } => Some(&s.u),
            Built::Flow { s, .. } => Some(&s.v_cts),
            Built::Hybrid { s, .. } => Some(&s.v_sharp),
            Built::Matrosov { construction, .. } => Some(construction.v8()),
            Built::SimulationOnly => None,
        }
    }

    /// `(jump_factor, flow_rate)` guaranteed along arcs.
    pub fn arc_rates(&self) -> (f64, f64) {
        match self {
            Built::Frozen { s, p, .. } => {
                // U ≤ (1 + S̄γ/(4(l+1)))V and ΔU ≤ −(δ/(4(l+1)))γ(V) with γ linear.
                let g = s.gamma.eval(1.0);
                let w = 4.0 * (s.l as f64 + 1.0);
                (1.0 - s.decay_coeff * g / (1.0 + g * p.s_bar() / w), 0.0)
            }
            Built::Flow { s, .. } => (1.0, s.certified_rate),
            Built::Hybrid { s, .. } => {
                let r = s.rate - ARC_RATE_SLACK;
                ((-r).exp(), r)
            }
            Built::Matrosov { .. } | Built::SimulationOnly => (1.0, 0.0),
        }
    }

    /// Checks the constructed decay inequalities on the settings grid.
    pub fn certify(&self, settings: &Settings) -> Result<CertificationReport, CliError> {
        let grid = &settings.grid;
        let scale = settings.bound_scale;
        let mut rep = CertificationReport::new();
        match self {
            Built::Frozen {
                s, sys, base, p, ..
            } => {
                let c = s.decay_coeff * scale;
                let gamma = s.gamma.clone();
                let bound =
                    ScalarField::new(move |x, _, _| -c * gamma.eval(x.iter().map(|v| v * v).sum()));
                let mut r = check_discrete_decay(&s.u, sys, &bound, grid, EXACT_TOL)?;
                r.name = "u_jump_decay".into();
                r.anchor = "decrease of U along the frozen dynamics".into();
                rep.push(r);
                let v = quadratic();
                let (base, p) = (base.clone(), p.clone());
                rep.push(check_inequality(
                    &Check::new(
                        "convexity_chain",
                        "convex combination bound on V along the frozen map",
                        EXACT_TOL,
                    ),
                    &grid.samples()?,
                    |smp| {
                        let w = p.p(smp.k + 1).ok()?;
                        let lhs = v.eval(&sys.apply(&smp.x, smp.k), smp.t, smp.k + 1);
                        let fx = base.apply(&smp.x, smp.k);
                        Some((
                            lhs,
                            (1.0 - w) * v.eval(&smp.x, smp.t, smp.k)
                                + w * v.eval(&fx, smp.t, smp.k),
                        ))
                    },
                ));
            }
            Built::Flow { s, sys } => {
                let c = s.rate * scale;
                let bound =
                    ScalarField::new(move |x, _, _| -c * x.iter().map(|v| v * v).sum::<f64>());
                let mut r = check_continuous_decay(&s.v_cts, sys, &bound, grid, CONTINUOUS_TOL)?;
                r.name = "v_cts_flow_decay".into();
                r.anchor = "decrease of V_cts along flows".into();
                rep.push(r);
            }
            Built::Hybrid {
                s,
                jump,
                flow,
                gamma,
            } => {
                let samples = grid.samples()?;
                let v = quadratic();
                if let (Some(p), Some(_)) = (&s.p_tilde, s.jump_rate) {
                    let c = scale * p.delta / (4.0 * (p.l as f64 + 1.0));
                    rep.push(check_inequality(
                        &Check::new(
                            "v_sharp_jump_decay",
                            "decrease of V# along jumps",
                            EXACT_TOL,
                        ),
                        &samples,
                        |smp| {
                            let y = jump.apply(&smp.x, smp.k);
                            let d = s.v_sharp.eval(&y, smp.t, smp.k + 1)
                                - s.v_sharp.eval(&smp.x, smp.t, smp.k);
                            Some((d, -c * gamma.eval(v.eval(&smp.x, smp.t, smp.k))))
                        },
                    ));
                }
                if let Some(rate) = s.flow_rate {
                    let c = scale * rate;
                    rep.push(check_inequality(
                        &Check::new(
                            "v_sharp_flow_decay",
                            "decrease of V# along flows",
                            CONTINUOUS_TOL,
                        ),
                        &samples,
                        |smp| {
                            let d = dv_along_flow(&s.v_sharp, flow, &smp.x, smp.t, smp.k);
                            Some((d, -c * gamma.eval(v.eval(&smp.x, smp.t, smp.k))))
                        },
                    ));
                }
            }
            Built::Matrosov { data, construction } => {
                let mode = construction.mode;
                rep.merge(check_assumption(data, mode, grid)?);
                let (decay, _) = construction.certify(data, grid)?;
                rep.merge(decay);
                if scale != 1.0 {
                    rep.merge(scaled_matrosov(data, construction, settings)?);
                }
            }
            Built::SimulationOnly => {}
        }
        if let Some(tol) = settings.tol {
            rejudge(&mut rep, tol);
        }
        Ok(rep)
    }

    /// Checks the guaranteed decay of the Lyapunov function along each arc.
    pub fn check_arcs(&self, arcs: &[HybridArc]) -> Result<CertificationReport, CliError> {
        let mut rep = CertificationReport::new();
        let Some(v) = self.lyapunov() else {
            return Ok(rep);
        };
        let (jf, fr) = self.arc_rates();
        for (i, arc) in arcs.iter().enumerate() {
            for mut r in check_arc_decay(v, arc, jf, fr, ARC_TOL)?.records {
                r.name = format!("{}_{i:03}", r.name);
                rep.push(r);
            }
        }
        Ok(rep)
    }
}

/// `ΔV₈ ≤ −scale·α₃(|x|)` and `𝒟V₈ ≤ −scale·α₃(|x|)`.
fn scaled_matrosov(
    data: &MatrosovData,
    construction: &Construction,
    settings: &Settings,
) -> Result<CertificationReport, CliError> {
    let samples = settings.grid.samples()?;
    let (v8, alpha3, scale) = (
        construction.v8(),
        construction.alpha3(),
        settings.bound_scale,
    );
    let mut rep = CertificationReport::new();
    let in_set =
        |set: &Option<strictlyap::systems::SetFn>, x: &[f64]| set.as_ref().is_none_or(|f| f(x));
    if let (true, Some(f)) = (construction.mode.has_jumps(), &data.jump) {
        rep.push(check_inequality(
            &Check::new(
                "v8_scaled_jump",
                "scaled strict decrease of V8 along jumps",
                DISCRETE_TOL,
            ),
            &samples,
            |s| {
                if !in_set(&data.jump_set, &s.x) {
                    return None;
                }
                let d = v8.eval(&f.apply(&s.x, s.k), s.t, s.k + 1) - v8.eval(&s.x, s.t, s.k);
                Some((d, -scale * alpha3.eval(norm(&s.x))))
            },
        ));
    }
    if let (true, Some(g)) = (construction.mode.has_flows(), &data.flow) {
        rep.push(check_inequality(
            &Check::new(
                "v8_scaled_flow",
                "scaled strict decrease of V8 along flows",
                CONTINUOUS_TOL,
            ),
            &samples,
            |s| {
                if !in_set(&data.flow_set, &s.x) {
                    return None;
                }
                Some((
                    dv_along_flow(v8, g, &s.x, s.t, s.k),
                    -scale * alpha3.eval(norm(&s.x)),
                ))
            },
        ));
    }
    Ok(rep)
}

/// Replaces every record tolerance and recomputes the verdicts.
pub fn rejudge(rep: &mut CertificationReport, tol: f64) {
    for r in &mut rep.records {
        r.tolerance = tol;
        r.pass = r.worst_margin <= tol;
    }
    rep.pass = rep.records.iter().all(|r| r.pass);
}
