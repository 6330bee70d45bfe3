use super::{default_horizon, require_pe, StrictifyError};
use crate::funcspace::{
    build_gamma, build_mu_kappa_chi, log_nodes, minorize_pd, Gain, GridFunction, ScalarField,
};
use crate::pe::DiscretePESignal;

/// The decay gain `Θ` of the hypothesis `ΔV ≤ −p(k+1)Θ(V)`.
#[derive(Debug, Clone)]
pub enum ThetaGain {
    /// `Θ ∈ K∞`: used directly as `γ` with `κ` the identity.
    Kinf(Gain),
    /// Positive definite `Θ`: `κ`, `γ` come from the μ/κ/χ construction.
    Pd(GridFunction),
}

#[derive(Debug, Clone)]
pub struct DiscretePeConfig {
    pub v: ScalarField,
    pub theta: ThetaGain,
    pub p: DiscretePESignal,
    /// Indices `0..=horizon` checked for the PE property; defaults to one period.
    pub horizon: Option<i64>,
}

/// `U = κ(V) + γ(V)·S(k)/(4(l+1))` with its decay bound.
#[derive(Debug, Clone)]
pub struct DiscreteStrictification {
    pub u: ScalarField,
    pub kappa: Gain,
    pub gamma: Gain,
    /// `−(δ/(4(l+1)))·γ(V(x,t,k))`.
    pub decay_bound: ScalarField,
    /// `δ/(4(l+1))`.
    pub decay_coeff: f64,
    pub l: usize,
    pub delta: f64,
}

pub fn strictify_discrete_pe(
    cfg: &DiscretePeConfig,
) -> Result<DiscreteStrictification, StrictifyError> {
    let p = cfg.p.clone();
    require_pe(&p, cfg.horizon.unwrap_or_else(|| default_horizon(&p)))?;

    let (kappa, gamma) = match &cfg.theta {
        ThetaGain::Kinf(theta) => (Gain::identity(), theta.clone()),
        ThetaGain::Pd(theta) => {
            let shaped = minorize_pd(theta, 1.0)?;
            let m = build_mu_kappa_chi(shaped.grid())?;
            let gamma = build_gamma(&m.kappa, &m.chi, &log_nodes(1e3, 256))?;
            (m.kappa, gamma)
        }
    };

    let w = 4.0 * (p.l as f64 + 1.0);
    let u = {
        let (v, k_, g, p) = (cfg.v.clone(), kappa.clone(), gamma.clone(), p.clone());
        ScalarField::new(move |x, t, k| {
            let vv = v.eval(x, t, k);
            let s = p.sum_s(k).unwrap_or(f64::NAN);
            k_.eval(vv) + g.eval(vv) * s / w
        })
        .with_dependence(cfg.v.depends_on_t, true)
    };
    let decay_coeff = p.delta / w;
    let decay_bound = {
        let (v, g) = (cfg.v.clone(), gamma.clone());
        ScalarField::new(move |x, t, k| -decay_coeff * g.eval(v.eval(x, t, k)))
            .with_dependence(cfg.v.depends_on_t, cfg.v.depends_on_k)
    };
    Ok(DiscreteStrictification {
        u,
        kappa,
        gamma,
        decay_bound,
        decay_coeff,
        l: p.l,
        delta: p.delta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::RightExtension;

    fn frozen_halving() -> DiscretePeConfig {
        DiscretePeConfig {
            v: ScalarField::of_state(|x| x[0] * x[0]),
            theta: ThetaGain::Kinf(Gain::linear(0.75)),
            p: DiscretePESignal::periodic(vec![0.0, 1.0], 1, 1.0).unwrap(),
            horizon: None,
        }
    }

    #[test]
    fn u_values() {
        let s = strictify_discrete_pe(&frozen_halving()).unwrap();
        // S = 1 at even k, 2 at odd k.
        assert!((s.u.eval(&[1.0], 0.0, 4) - 1.09375).abs() < 1e-15);
        assert!((s.u.eval(&[1.0], 0.0, 5) - 1.1875).abs() < 1e-15);
        assert_eq!(s.u.eval(&[0.0], 0.0, 3), 0.0);
        assert!((s.decay_bound.eval(&[1.0], 0.0, 0) + 0.09375).abs() < 1e-15);
    }

    #[test]
    fn not_pe_is_rejected() {
        let mut cfg = frozen_halving();
        cfg.p = DiscretePESignal::periodic(vec![0.0, 0.0, 1.0], 1, 1.0).unwrap();
        assert!(matches!(
            strictify_discrete_pe(&cfg),
            Err(StrictifyError::NotPe(_))
        ));
    }

    #[test]
    fn pd_theta_goes_through_construction() {
        let mut cfg = frozen_halving();
        let nodes = log_nodes(1e3, 512);
        cfg.theta = ThetaGain::Pd(
            GridFunction::from_fn(&nodes, RightExtension::Constant, |s| s / (1.0 + s * s)).unwrap(),
        );
        let s = strictify_discrete_pe(&cfg).unwrap();
        let u = s.u.eval(&[1.0], 0.0, 0);
        assert!(u > s.kappa.eval(1.0) && u.is_finite());
        assert!(s.gamma.eval(1.0) > 0.0);
    }
}
