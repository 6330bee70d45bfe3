use super::model::ContinuousSystem;
use super::SimError;

/// Time-stamped states of one flow interval.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowPath {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

impl FlowPath {
    pub fn last(&self) -> (f64, &[f64]) {
        let i = self.times.len() - 1;
        (self.times[i], &self.states[i])
    }
}

/// One classical Runge–Kutta step of size `h` from `(x, t)`.
pub fn rk4_step(sys: &ContinuousSystem, x: &[f64], t: f64, h: f64) -> Vec<f64> {
    let axpy =
        |a: f64, k: &[f64]| -> Vec<f64> { x.iter().zip(k).map(|(xi, ki)| xi + a * ki).collect() };
    let k1 = sys.rhs(x, t);
    let k2 = sys.rhs(&axpy(h / 2.0, &k1), t + h / 2.0);
    let k3 = sys.rhs(&axpy(h / 2.0, &k2), t + h / 2.0);
    let k4 = sys.rhs(&axpy(h, &k3), t + h);
    (0..x.len())
        .map(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}

/// Next step size and end time from `t` toward `t1`; the last step is
/// shortened (or absorbs a tiny remainder) so the grid lands exactly on `t1`.
pub(crate) fn next_step(t: f64, t1: f64, h: f64) -> (f64, f64) {
    let rest = t1 - t;
    if rest <= h * (1.0 + 1e-9) {
        (rest, t1)
    } else {
        (h, t + h)
    }
}

/// Fixed-step RK4 path on `[t0, t1]`.
pub fn integrate_flow(
    sys: &ContinuousSystem,
    x0: &[f64],
    t0: f64,
    t1: f64,
    h: f64,
) -> Result<FlowPath, SimError> {
    if !(h > 0.0) || !(t1 >= t0) {
        return Err(SimError::Parameter(format!(
            "need h > 0 and t1 >= t0 (h={h}, t0={t0}, t1={t1})"
        )));
    }
    let mut path = FlowPath {
        times: vec![t0],
        states: vec![x0.to_vec()],
    };
    let mut t = t0;
    while t < t1 {
        let (step, t_next) = next_step(t, t1, h);
        let x = rk4_step(sys, path.states.last().unwrap(), t, step);
        if x.iter().any(|v| !v.is_finite()) {
            return Err(SimError::Blowup {
                t: t_next,
                k: 0,
                last_good_t: t,
            });
        }
        t = t_next;
        path.times.push(t);
        path.states.push(x);
    }
    Ok(path)
}
