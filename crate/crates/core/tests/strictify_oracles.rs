use std::f64::consts::PI;

use strictlyap::certify::{check_continuous_decay, check_discrete_decay, GridSpec};
use strictlyap::funcspace::{Gain, ScalarField};
use strictlyap::pe::{ContinuousPESignal, DiscretePESignal};
use strictlyap::strictify::{
    strictify_continuous_pe, strictify_discrete_pe, DiscretePeConfig, ThetaGain,
};
use strictlyap::systems::{build_frozen_system, ContinuousSystem, DiscreteSystem};

fn odd() -> DiscretePESignal {
    DiscretePESignal::periodic(vec![0.0, 1.0], 1, 1.0).unwrap()
}

fn halving_u() -> strictlyap::strictify::DiscreteStrictification {
    strictify_discrete_pe(&DiscretePeConfig {
        v: ScalarField::of_state(|x| x[0] * x[0]),
        theta: ThetaGain::Kinf(Gain::linear(0.75)),
        p: odd(),
        horizon: None,
    })
    .unwrap()
}

/// `U(x,k) = x² + (3/4)x²·S(k)/8` with `S(k) = p(k−1) + 2p(k)`.
fn u_oracle(x: f64, k: i64) -> f64 {
    let p = |j: i64| j.rem_euclid(2) as f64;
    let s = p(k - 1) + 2.0 * p(k);
    x * x + 0.75 * x * x * s / 8.0
}

#[test]
fn halving_u_matches_closed_form() {
    let st = halving_u();
    for k in 0..20 {
        for x in [-3.0, -0.4, 0.0, 1.0, 2.5] {
            assert!((st.u.eval(&[x], 0.0, k) - u_oracle(x, k)).abs() < 1e-12);
        }
    }
}

#[test]
fn halving_decrement_matches_closed_form() {
    let st = halving_u();
    let sys = build_frozen_system(&DiscreteSystem::new(|x, _| vec![x[0] / 2.0]), &odd()).unwrap();
    for k in 0..10 {
        let x = 1.0;
        let y = sys.apply(&[x], k);
        let du = st.u.eval(&y, 0.0, k + 1) - st.u.eval(&[x], 0.0, k);
        let xn = if (k + 1) % 2 == 1 { x / 2.0 } else { x };
        assert!((du - (u_oracle(xn, k + 1) - u_oracle(x, k))).abs() < 1e-12);
    }
    let grid = GridSpec::cube(1, 10.0, 201).with_index(0, 100);
    let rec = check_discrete_decay(&st.u, &sys, &st.decay_bound, &grid, 1e-9).unwrap();
    assert!(rec.pass, "{rec:?}");
}

fn sin2_flow() -> ContinuousSystem {
    ContinuousSystem::new(|x, t| vec![-t.sin().powi(2) * x[0]])
}

#[test]
fn continuous_strictification_value_and_true_rate() {
    let q = ContinuousPESignal::sin2();
    let v = ScalarField::of_state(|x| x[0] * x[0]).with_grad(|x, _, _| vec![2.0 * x[0]]);
    let st = strictify_continuous_pe(&v, &q, 20.0).unwrap();
    assert!((st.v_cts.eval(&[1.0], PI, 0) - (1.0 + PI / 4.0)).abs() < 1e-5);
    // The derivative of V_cts is bounded by −(ε/τ)V.
    let bound = ScalarField::new(|x, _, _| -0.5 * x[0] * x[0]).with_dependence(false, false);
    let grid = GridSpec::cube(1, 5.0, 101).with_time(0.0, 4.0 * PI, 97);
    let rec = check_continuous_decay(&st.v_cts, &sin2_flow(), &bound, &grid, 1e-4).unwrap();
    assert!(rec.pass, "{rec:?}");
}

#[test]
fn v_cts_derivative_closed_form() {
    // 𝒟V_cts = x²[sin²t − w(t)/τ − 2 sin²t (1 + R/τ)] with w the window integral.
    let q = ContinuousPESignal::sin2();
    let v = ScalarField::of_state(|x| x[0] * x[0]).with_grad(|x, _, _| vec![2.0 * x[0]]);
    let st = strictify_continuous_pe(&v, &q, 20.0).unwrap();
    let g = sin2_flow();
    for t in [0.3, 1.0, 2.2, 4.0] {
        let x = 1.7;
        let r = q.int_r(t, q.default_step()).unwrap();
        let oracle = x * x * (t.sin().powi(2) - 0.5 - 2.0 * t.sin().powi(2) * (1.0 + r / PI));
        let fd = strictlyap::certify::dv_along_flow(&st.v_cts, &g, &[x], t, 0);
        assert!((fd - oracle).abs() < 1e-5, "t={t}: {fd} vs {oracle}");
    }
}
