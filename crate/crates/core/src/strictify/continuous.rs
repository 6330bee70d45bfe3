use std::sync::Arc;

use super::StrictifyError;
use crate::funcspace::ScalarField;
use crate::pe::{verify_continuous_pe, ContinuousPESignal, PeVerdict, RCache};

/// `V_cts = (1 + R(t)/τ)·V` with its rates.
#[derive(Debug, Clone)]
pub struct ContinuousStrictification {
    pub v_cts: ScalarField,
    /// `ε/τ`: `𝒟V_cts ≤ −(ε/τ)·V` on the flow set.
    pub rate: f64,
    /// `(ε/τ)/(1 + τq̄/2)`: the rate relative to `V_cts` itself.
    pub certified_rate: f64,
    pub cache: Arc<RCache>,
}

/// Builds `V_cts` after checking the PE property of `q` on `[0, horizon]`.
///
/// `R` is read from a cubic Hermite cache of `R` and `R′` so that finite
/// differences of `V_cts` in `t` stay accurate.
pub fn strictify_continuous_pe(
    v: &ScalarField,
    q: &ContinuousPESignal,
    horizon: f64,
) -> Result<ContinuousStrictification, StrictifyError> {
    let h = q.default_step();
    if let PeVerdict::Fail(t) = verify_continuous_pe(q, horizon.max(q.tau), h)? {
        return Err(StrictifyError::NotPeContinuous(t));
    }
    let cache = Arc::new(RCache::for_signal(q, horizon)?);
    let tau = q.tau;

    let mut v_cts = {
        let (w, c) = (v.clone(), Arc::clone(&cache));
        ScalarField::new(move |x, t, k| (1.0 + c.r(t) / tau) * w.eval(x, t, k))
            .with_dependence(true, v.depends_on_k)
    };
    if v.has_grad() {
        let (v, c) = (v.clone(), Arc::clone(&cache));
        v_cts = v_cts.with_grad(move |x, t, k| {
            let w = 1.0 + c.r(t) / tau;
            v.grad_x(x, t, k)
                .unwrap()
                .into_iter()
                .map(|g| w * g)
                .collect()
        });
    }
    if !v.depends_on_t || v.has_dt() {
        let (v, c) = (v.clone(), Arc::clone(&cache));
        let time_invariant = !v.depends_on_t;
        v_cts = v_cts.with_dt(move |x, t, k| {
            let vt = if time_invariant {
                0.0
            } else {
                v.dt(x, t, k).unwrap_or(f64::NAN)
            };
            c.dr(t) / tau * v.eval(x, t, k) + (1.0 + c.r(t) / tau) * vt
        });
    }
    let rate = q.eps / tau;
    Ok(ContinuousStrictification {
        v_cts,
        rate,
        certified_rate: rate / (1.0 + tau * q.q_bar / 2.0),
        cache,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    #[test]
    fn sin2_values() {
        let v = ScalarField::of_state(|x| x[0] * x[0]);
        let s = strictify_continuous_pe(&v, &ContinuousPESignal::sin2(), 4.0 * PI).unwrap();
        assert!((s.v_cts.eval(&[1.0], PI, 0) - (1.0 + PI / 4.0)).abs() < 1e-8);
        assert_eq!(s.v_cts.eval(&[0.0], 1.3, 0), 0.0);
        assert!((s.rate - 0.5).abs() < 1e-15);
        // Sandwich V ≤ V_cts ≤ (1 + τq̄/2)V.
        for i in 0..100 {
            let t = 0.13 * i as f64;
            let w = s.v_cts.eval(&[1.0], t, 0);
            assert!((1.0 - 1e-12..=1.0 + PI / 2.0 + 1e-12).contains(&w));
        }
    }
}
