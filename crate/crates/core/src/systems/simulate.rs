use serde::{Deserialize, Serialize};

use super::arc::{ArcStatus, HybridArc};
use super::flow::{next_step, rk4_step};
use super::model::HybridSystem;
use super::SimError;

/// Rule for choosing between flowing and jumping, in particular on `C ∩ D`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum Policy {
    /// Jump whenever the state is in `D` (checked on the step grid).
    #[default]
    JumpPriority,
    /// Flow for the given duration, then jump if in `D`.
    FlowPriority(f64),
    /// Jump exactly at the listed times when the state is in `D`.
    Schedule(Vec<f64>),
}

/// Simulation limits and the RK4 step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Budget {
    pub max_flow_time: f64,
    pub max_jumps: usize,
    pub max_consecutive_jumps: usize,
    pub step: f64,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_flow_time: 10.0,
            max_jumps: 1000,
            max_consecutive_jumps: 10_000,
            step: 1e-3,
        }
    }
}

/// Simulates one hybrid arc from `(x0, t0, k = 0)`.
///
/// A state outside `C` that is in `D` jumps regardless of policy. The arc
/// ends with status `budget`, `dead` or `blowup`; too many consecutive jumps
/// is an error.
pub fn simulate_hybrid(
    sys: &HybridSystem,
    x0: &[f64],
    t0: f64,
    policy: &Policy,
    budget: &Budget,
) -> Result<HybridArc, SimError> {
    if !(budget.step > 0.0) || !(budget.max_flow_time >= 0.0) {
        return Err(SimError::Parameter(
            "budget needs step > 0 and max_flow_time >= 0".into(),
        ));
    }
    if x0.len() != sys.dim {
        return Err(SimError::Parameter(format!(
            "initial state has dimension {}, system has {}",
            x0.len(),
            sys.dim
        )));
    }
    let mut schedule: Vec<f64> = match policy {
        Policy::Schedule(ts) => {
            let mut ts: Vec<f64> = ts.iter().copied().filter(|&s| s >= t0).collect();
            ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
            ts.reverse();
            ts
        }
        _ => Vec::new(),
    };
    let t_end = t0 + budget.max_flow_time;
    let mut arc = HybridArc::start(x0, t0, 0);
    let mut consecutive = 0usize;
    let mut phase_start = t0;

    loop {
        let (t, k) = (arc.last().t, arc.last().k);
        let x = arc.last().x.clone();
        let in_c = sys.in_c(&x);
        let in_d = sys.in_d(&x);

        let mut due = false;
        while let Some(&ts) = schedule.last() {
            if ts < t {
                schedule.pop();
            } else {
                due = ts == t;
                break;
            }
        }
        let want_jump = in_d
            && (!in_c
                || match policy {
                    Policy::JumpPriority => true,
                    Policy::FlowPriority(period) => t >= phase_start + period,
                    Policy::Schedule(_) => due,
                });
        if due {
            schedule.pop();
        }
        if let Policy::FlowPriority(period) = policy {
            if t >= phase_start + period && !want_jump {
                phase_start = t;
            }
        }

        if want_jump {
            if arc.jumps() >= budget.max_jumps {
                arc.status = ArcStatus::Budget;
                break;
            }
            consecutive += 1;
            if consecutive > budget.max_consecutive_jumps {
                return Err(SimError::Zeno {
                    limit: budget.max_consecutive_jumps,
                    t,
                });
            }
            let y = sys.jump.apply(&x, k);
            if y.iter().any(|v| !v.is_finite()) {
                arc.status = ArcStatus::Blowup;
                arc.message = Some(format!(
                    "jump at t = {t}, k = {k} produced a non-finite state"
                ));
                break;
            }
            arc.push_jump(y);
            phase_start = t;
            continue;
        }
        if !in_c {
            arc.status = ArcStatus::Dead;
            arc.message = Some(format!("state left C ∪ D at t = {t}, k = {k}"));
            break;
        }
        if t >= t_end {
            arc.status = ArcStatus::Budget;
            break;
        }

        let mut limit = t_end;
        if let Policy::FlowPriority(period) = policy {
            limit = limit.min(phase_start + period);
        }
        if let Some(&ts) = schedule.last() {
            limit = limit.min(ts);
        }
        let (step, t_next) = next_step(t, limit, budget.step);
        let y = rk4_step(&sys.flow, &x, t, step);
        if y.iter().any(|v| !v.is_finite()) {
            arc.status = ArcStatus::Blowup;
            arc.message = Some(format!(
                "flow from t = {t}, k = {k} produced a non-finite state"
            ));
            break;
        }
        arc.push_flow(t_next, y);
        consecutive = 0;
    }
    Ok(arc)
}
