use std::sync::Arc;

use crate::funcspace::{
    invert_monotone, lipschitz_pd_minorant, ComparisonFunction, Gain, GridFunction, RightExtension,
    ScalarField,
};
use crate::pe::RCache;

use super::gains::{growth_map, BaseGains};
use super::{step_err, MatrosovData, MatrosovError, Mode};

/// Grid points of the minimization defining `α₃`.
const ALPHA3_POINTS: usize = 512;

/// `V₅ = k₁(V₁)(V₁ + V₂) + k₂(V₁)`.
pub fn assemble_v5(data: &MatrosovData, gains: &BaseGains) -> ScalarField {
    let (v1, v2) = (data.v1.clone(), data.v2.clone());
    let (k1, k2) = (gains.k1.k1.clone(), gains.k2.clone());
    let on_t = v1.depends_on_t || v2.depends_on_t;
    let on_k = v1.depends_on_k || v2.depends_on_k;
    ScalarField::new(move |x, t, k| {
        let a = v1.eval(x, t, k);
        k1.eval(a) * (a + v2.eval(x, t, k)) + k2.eval(a)
    })
    .with_dependence(on_t, on_k)
}

/// `V₅`, its strictification `V₆`, and the constants of the decay
/// `ΔV₆ ≤ −a·Λ₁ʳ(V₁) + Λ₂ᵉ(V₁)φ₂(N₁)` (and its flow analogue).
#[derive(Debug, Clone)]
pub struct V6Data {
    pub v5: ScalarField,
    pub v6: ScalarField,
    /// Decay coefficient `a`.
    pub decay: f64,
    /// Enlarged cross gain `Λ₂ᵉ`.
    pub lambda2e: Gain,
    /// Weight of `V₅` in `V₆` (2 for hybrid data, 1 otherwise).
    pub base_weight: f64,
    /// `S̄/(4(l+1))` when jumps are present.
    pub s_coeff: f64,
    /// `R̄/τ` when flows are present.
    pub r_coeff: f64,
    pub cache: Option<Arc<RCache>>,
}

/// Strictifies `V₅` with the discrete `S`, the continuous `R`, or both,
/// through the Lipschitz gain `γ̂ = Λ₁∘ψ⁻¹`.
pub fn strictify_v5(
    data: &MatrosovData,
    mode: Mode,
    gains: &BaseGains,
    horizon_t: f64,
) -> Result<V6Data, MatrosovError> {
    data.require(mode)?;
    let v5 = assemble_v5(data, gains);
    let lip = gains.k1.lipschitz;

    let (mut s_coeff, mut a_d, mut p_sig) = (0.0, f64::INFINITY, None);
    if mode.has_jumps() {
        let p = data.p.clone().expect("checked");
        let w = 4.0 * (p.l + 1) as f64;
        s_coeff = p.s_bar() / w;
        a_d = p.delta / w;
        p_sig = Some((p, w));
    }
    let (mut r_coeff, mut a_c, mut cache) = (0.0, f64::INFINITY, None);
    if mode.has_flows() {
        let q = data.q.clone().expect("checked");
        r_coeff = q.r_bar() / q.tau;
        a_c = q.eps / q.tau;
        cache = Some(Arc::new(RCache::for_signal(&q, horizon_t)?));
    }
    if !(s_coeff.is_finite() && r_coeff.is_finite()) {
        return Err(MatrosovError::Construction {
            step: "strictification of V5",
            message: "the PE signal needs a finite upper bound".into(),
        });
    }
    let base_weight = if mode == Mode::Hybrid { 2.0 } else { 1.0 };
    let decay = a_d.min(a_c);
    let factor = base_weight + (s_coeff + r_coeff) * lip;
    let lambda2e = gains.lambda2.scale(factor);

    let (v5c, gh, ch) = (v5.clone(), gains.lambda1_r.clone(), cache.clone());
    let tau = data.q.as_ref().map_or(1.0, |q| q.tau);
    let v6 = ScalarField::new(move |x, t, k| {
        let v = v5c.eval(x, t, k);
        let g = gh.eval(v);
        let mut out = base_weight * v;
        if let Some((p, w)) = &p_sig {
            out += p.sum_s(k).unwrap_or(f64::NAN) * g / w;
        }
        if let Some(c) = &ch {
            out += c.r(t) * g / tau;
        }
        out
    })
    .with_dependence(
        v5.depends_on_t || mode.has_flows(),
        v5.depends_on_k || mode.has_jumps(),
    );
    Ok(V6Data {
        v5,
        v6,
        decay,
        lambda2e,
        base_weight,
        s_coeff,
        r_coeff,
        cache,
    })
}

/// The multiplier `k₃` and the correction `k₄` that absorbs its variation.
#[derive(Debug, Clone)]
pub struct K3K4 {
    /// `c = a/2`.
    pub c: f64,
    /// `h(r) = φ₂⁻¹(cΛ₁ʳ/(1+Λ₂ᵉ))/(1+Λ₂ᵉ)` on the gain nodes.
    pub h: GridFunction,
    /// Positive definite, ½-Lipschitz, `≤ h` at the nodes.
    pub k3: ComparisonFunction,
    /// `α₆(|x|) ≥ V₆(x,·,·)`.
    pub alpha6: Gain,
    /// `g = α₆∘m∘α₁⁻¹` with the mode's growth map `m`.
    pub g: Gain,
    /// `k₄(s) = s·g(s)`, tabulated.
    pub k4: Gain,
    pub k4_grid: GridFunction,
}

pub fn build_k3_k4(
    data: &MatrosovData,
    mode: Mode,
    gains: &BaseGains,
    v6: &V6Data,
) -> Result<K3K4, MatrosovError> {
    let c = 0.5 * v6.decay;
    let nodes = &gains.nodes;
    let mut hv = Vec::with_capacity(nodes.len());
    for &r in nodes {
        if r == 0.0 {
            hv.push(0.0);
            continue;
        }
        let l2 = 1.0 + v6.lambda2e.eval(r);
        let y = c * gains.lambda1_r.eval(r) / l2;
        let u =
            invert_monotone(|s| data.phi2.eval(s), y).map_err(step_err("k3: inverse of phi_2"))?;
        hv.push(u / l2);
    }
    let h =
        GridFunction::new(nodes.clone(), hv, RightExtension::Constant).map_err(step_err("k3"))?;
    let k3 = lipschitz_pd_minorant(&h, 1.0).map_err(step_err("k3"))?;

    let psi2 = {
        let (a2, s2, k1, k2) = (
            data.alpha2.clone(),
            data.sigma2.clone(),
            gains.k1.k1.clone(),
            gains.k2.clone(),
        );
        Gain::new(move |rho| {
            let a = a2.eval(rho);
            k1.eval(a) * (a + s2.eval(rho)) + k2.eval(a)
        })
    };
    let coeff = v6.s_coeff + v6.r_coeff;
    let alpha6 = {
        let (p2, gh, w) = (psi2, gains.lambda1_r.clone(), v6.base_weight);
        Gain::new(move |rho| {
            let v = p2.eval(rho);
            w * v + coeff * gh.eval(v)
        })
    };
    let g = alpha6
        .compose(&growth_map(data, mode))
        .compose(&gains.a1_inv);
    let k4_grid = {
        let g = g.clone();
        GridFunction::from_fn(nodes, RightExtension::LinearContinuation, |s| s * g.eval(s))
            .map_err(step_err("k4"))?
    };
    Ok(K3K4 {
        c,
        h,
        k3,
        alpha6,
        g,
        k4: Gain::from_grid(k4_grid.clone()),
        k4_grid,
    })
}

/// `φ₃(v) = φ₂(ν₁(α₁⁻¹ v)) + v` and `k₅(s) = s·φ₃(s)`, tabulated.
#[derive(Debug, Clone)]
pub struct Phi3K5 {
    pub phi3: Gain,
    pub k5: Gain,
    pub k5_grid: GridFunction,
}

pub fn build_phi3_k5(data: &MatrosovData, gains: &BaseGains) -> Result<Phi3K5, MatrosovError> {
    let phi3 = {
        let inner = data.phi2.compose(&data.nu1).compose(&gains.a1_inv);
        Gain::new(move |v| inner.eval(v) + v)
    };
    let k5_grid = {
        let f = phi3.clone();
        GridFunction::from_fn(&gains.nodes, RightExtension::LinearContinuation, |s| {
            s * f.eval(s)
        })
        .map_err(step_err("k5"))?
    };
    Ok(Phi3K5 {
        phi3,
        k5: Gain::from_grid(k5_grid.clone()),
        k5_grid,
    })
}

/// `V₇ = k₃(V₁)V₆ + k₄(V₁)`, `V₈ = V₇ + k₅(V₁)` and the decay gain `α₃`.
#[derive(Debug, Clone)]
pub struct V8Data {
    pub v7: ScalarField,
    pub v8: ScalarField,
    /// `α₃(s) = c·min{k₃(u)Λ₁ʳ(u) : α₁(s) ≤ u ≤ α₂(s)}`, on a 512-point grid.
    pub alpha3: Gain,
}

pub fn assemble_v8(
    data: &MatrosovData,
    gains: &BaseGains,
    v6: &V6Data,
    k34: &K3K4,
    k5: &Phi3K5,
) -> V8Data {
    let (on_t, on_k) = (v6.v6.depends_on_t, v6.v6.depends_on_k);
    let v7 = {
        let (v1, v6f, k3, k4) = (
            data.v1.clone(),
            v6.v6.clone(),
            k34.k3.clone(),
            k34.k4.clone(),
        );
        ScalarField::new(move |x, t, k| {
            let a = v1.eval(x, t, k);
            k3.eval(a) * v6f.eval(x, t, k) + k4.eval(a)
        })
        .with_dependence(on_t, on_k)
    };
    let v8 = {
        let (v1, v7c, k5g) = (data.v1.clone(), v7.clone(), k5.k5.clone());
        ScalarField::new(move |x, t, k| v7c.eval(x, t, k) + k5g.eval(v1.eval(x, t, k)))
            .with_dependence(on_t, on_k)
    };
    let alpha3 = {
        let (a1, a2, k3, l1r, c) = (
            data.alpha1.clone(),
            data.alpha2.clone(),
            k34.k3.clone(),
            gains.lambda1_r.clone(),
            k34.c,
        );
        Gain::new(move |s| {
            let (lo, hi) = (a1.eval(s), a2.eval(s));
            let m = |u: f64| k3.eval(u) * l1r.eval(u);
            let min = if hi <= lo {
                m(lo)
            } else {
                (0..ALPHA3_POINTS)
                    .map(|i| m(lo + (hi - lo) * i as f64 / (ALPHA3_POINTS - 1) as f64))
                    .fold(f64::INFINITY, f64::min)
            };
            c * min
        })
    };
    V8Data { v7, v8, alpha3 }
}
