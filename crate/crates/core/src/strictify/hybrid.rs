use std::sync::Arc;

use super::{exp_rate_for_dis, pe_from_exp, StrictifyError};
use crate::funcspace::{Gain, ScalarField};
use crate::pe::{verify_continuous_pe, ContinuousPESignal, DiscretePESignal, PeVerdict, RCache};

#[derive(Debug, Clone)]
pub struct HybridPeConfig {
    pub v: ScalarField,
    /// Jump rate `r` with `V(F(x,k),t,k+1) ≤ e^{−r(k+1)}V` on `D`; omit when `D = ∅`.
    /// Entries may be `+∞` (the jump annihilates `V`).
    pub r: Option<DiscretePESignal>,
    /// Flow signal `q` with `𝒟V ≤ −q(t)V` on `C`; omit when `C = ∅`.
    pub q: Option<ContinuousPESignal>,
    /// Gain applied to `V` in the window terms; identity when absent.
    pub gamma: Option<Gain>,
    /// Indices `0..=horizon_k` swept for the PE level of `1 − e^{−r}`.
    pub horizon_k: i64,
    /// Time horizon for the PE check of `q` and the `R` cache.
    pub horizon_t: f64,
}

/// `V♯ = 2V + [S̃(k)/(4(l+1)) + R(t)/τ]·γ(V)` with `S̃` the window sum of `1 − e^{−r}`.
#[derive(Debug, Clone)]
pub struct HybridStrictification {
    pub v_sharp: ScalarField,
    /// `1 − e^{−r}` with its swept `δ`.
    pub p_tilde: Option<DiscretePESignal>,
    pub cache: Option<Arc<RCache>>,
    /// `ε/τ`, when there is a flow part.
    pub flow_rate: Option<f64>,
    /// `ln(4(l+1)/(4(l+1) − δ))`, when there is a jump part.
    pub jump_rate: Option<f64>,
    /// Minimum of the available rates.
    pub rate: f64,
    /// `c` with `2V ≤ V♯ ≤ c·V` when `γ` is the identity.
    pub upper_factor: f64,
}

pub fn strictify_hybrid_pe(cfg: &HybridPeConfig) -> Result<HybridStrictification, StrictifyError> {
    if cfg.r.is_none() && cfg.q.is_none() {
        return Err(StrictifyError::Parameter(
            "need a jump rate r, a flow signal q, or both".into(),
        ));
    }
    let p_tilde = cfg
        .r
        .as_ref()
        .map(|r| pe_from_exp(r, cfg.horizon_k))
        .transpose()?;
    let cache = match &cfg.q {
        Some(q) => {
            if let PeVerdict::Fail(t) =
                verify_continuous_pe(q, cfg.horizon_t.max(q.tau), q.default_step())?
            {
                return Err(StrictifyError::NotPeContinuous(t));
            }
            Some(Arc::new(RCache::for_signal(q, cfg.horizon_t)?))
        }
        None => None,
    };
    let jump_rate = p_tilde
        .as_ref()
        .map(|p| exp_rate_for_dis(p.l, p.delta))
        .transpose()?;
    let flow_rate = cfg.q.as_ref().map(|q| q.eps / q.tau);
    let rate = jump_rate
        .into_iter()
        .chain(flow_rate)
        .fold(f64::INFINITY, f64::min);

    let mut upper_factor = 2.0;
    if let Some(p) = &p_tilde {
        upper_factor += p.p_bar * (p.l as f64 + 1.0) / 4.0;
    }
    if let Some(q) = &cfg.q {
        upper_factor += q.tau * q.q_bar / 2.0;
    }

    let gamma = cfg.gamma.clone().unwrap_or_else(Gain::identity);
    let v_sharp = {
        let v = cfg.v.clone();
        let p = p_tilde.clone();
        let c = cache.clone();
        let tau = cfg.q.as_ref().map_or(1.0, |q| q.tau);
        ScalarField::new(move |x, t, k| {
            let vv = v.eval(x, t, k);
            let mut w = 0.0;
            if let Some(p) = &p {
                w += p.sum_s(k).unwrap_or(f64::NAN) / (4.0 * (p.l as f64 + 1.0));
            }
            if let Some(c) = &c {
                w += c.r(t) / tau;
            }
            2.0 * vv + w * gamma.eval(vv)
        })
        .with_dependence(
            cache.is_some() || cfg.v.depends_on_t,
            p_tilde.is_some() || cfg.v.depends_on_k,
        )
    };
    Ok(HybridStrictification {
        v_sharp,
        p_tilde,
        cache,
        flow_rate,
        jump_rate,
        rate,
        upper_factor,
    })
}
