use std::sync::OnceLock;

use proptest::prelude::*;
use strictlyap::funcspace::default_nodes;
use strictlyap::matrosov::{
    build_gains, build_k3_k4, build_phi3_k5, instances, strictify_v5, BaseGains, Mode, Phi3K5,
    V6Data, K3K4,
};

struct Built {
    gains: BaseGains,
    v6: V6Data,
    k34: K3K4,
    k5: Phi3K5,
}

fn built() -> &'static Built {
    static CELL: OnceLock<Built> = OnceLock::new();
    CELL.get_or_init(|| {
        let data = instances::sstar_hybrid();
        let gains = build_gains(&data, Mode::Hybrid, &default_nodes()).unwrap();
        let v6 = strictify_v5(&data, Mode::Hybrid, &gains, 20.0).unwrap();
        let k34 = build_k3_k4(&data, Mode::Hybrid, &gains, &v6).unwrap();
        let k5 = build_phi3_k5(&data, &gains).unwrap();
        Built { gains, v6, k34, k5 }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// k₃Λ₂ᵉφ₂(N) ≤ c·k₃Λ₁ʳ + N·φ₃(v) whenever N ≤ ν₁(α₁⁻¹ v).
    #[test]
    fn young_split(v in 1e-4f64..50.0, frac in 0.0f64..1.0) {
        let b = built();
        let data = instances::sstar_hybrid();
        let n = frac * data.nu1.eval(b.gains.a1_inv.eval(v));
        let k3 = b.k34.k3.eval(v);
        let l2e = b.v6.lambda2e.eval(v);
        let lhs = k3 * l2e * data.phi2.eval(n);
        let rhs = b.k34.c * k3 * b.gains.lambda1_r.eval(v) + n * b.k5.phi3.eval(v);
        prop_assert!(lhs <= rhs * (1.0 + 1e-12) + 1e-15);
    }

    /// k₄(b) − k₄(a) ≥ (b − a)·g(b) and the same for k₅ with φ₃.
    #[test]
    fn secant_bounds(a in 0.0f64..40.0, d in 1e-6f64..10.0) {
        let b = built();
        let hi = a + d;
        prop_assert!(b.k34.k4.eval(hi) - b.k34.k4.eval(a) >= d * b.k34.g.eval(hi) * (1.0 - 1e-12));
        prop_assert!(b.k5.k5.eval(hi) - b.k5.k5.eval(a) >= d * b.k5.phi3.eval(hi) * (1.0 - 1e-12));
    }

    /// k₃ is ½-Lipschitz.
    #[test]
    fn k3_half_lipschitz(a in 0.0f64..60.0, d in 1e-6f64..5.0) {
        let b = built();
        prop_assert!((b.k34.k3.eval(a + d) - b.k34.k3.eval(a)).abs() <= 0.5 * d + 1e-12);
    }

    /// V₅ ≤ ψ(V₁) and Λ₁ʳ ≤ Λ₁.
    #[test]
    fn psi_envelope(x in prop::collection::vec(-5.0f64..5.0, 2), t in 0.0f64..7.0) {
        let b = built();
        let v1 = x[0] * x[0] + x[1] * x[1];
        let v5 = b.v6.v5.eval(&x, t, 0);
        prop_assert!(v5 <= b.gains.psi.eval(v1) * (1.0 + 1e-12));
        prop_assert!(b.gains.lambda1_r.eval(v1) <= b.gains.k1.lambda1.eval(v1) * (1.0 + 1e-12));
    }
}
