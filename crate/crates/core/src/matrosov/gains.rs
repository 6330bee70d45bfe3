use crate::funcspace::{
    build_mu_kappa_chi, increasing_majorant, invert_monotone, minorize_pd, ComparisonFunction,
    Gain, GridFunction, RightExtension,
};

use super::{step_err, MatrosovData, MatrosovError, Mode};

/// Sample count of the radial minimization behind `λ`.
const RADIAL_SAMPLES: usize = 64;

/// Upper table of `α₁⁻¹`: node `i` holds `α₁⁻¹(nodes[i+1])`, so the table
/// dominates the exact inverse on `[nodes[1], ∞)`. Below `nodes[1]` the
/// inverse is computed exactly.
pub fn upper_inverse_table(alpha1: &Gain, nodes: &[f64]) -> Result<Gain, MatrosovError> {
    let inv = |y: f64| upper_inverse(alpha1, y).map_err(step_err("inverse of alpha_1"));
    let n = nodes.len();
    let mut values = Vec::with_capacity(n);
    for i in 0..n {
        let y = if i + 1 < n { nodes[i + 1] } else { nodes[i] };
        values.push(if i == 0 { 0.0 } else { inv(y)? });
    }
    let table = GridFunction::new(nodes.to_vec(), values, RightExtension::LinearContinuation)
        .map_err(step_err("inverse of alpha_1"))?;
    let first = nodes[1];
    let a1 = alpha1.clone();
    Ok(Gain::new(move |v| {
        if !(v > 0.0) {
            0.0
        } else if v < first {
            upper_inverse(&a1, v).unwrap_or(f64::NAN)
        } else {
            table.eval(v)
        }
    }))
}

/// Bisection inverse pushed up until `α₁(x) ≥ y`.
fn upper_inverse(alpha1: &Gain, y: f64) -> Result<f64, crate::funcspace::FuncError> {
    let mut x = invert_monotone(|s| alpha1.eval(s), y)?;
    let mut step = x * 1e-12 + f64::MIN_POSITIVE;
    while alpha1.eval(x) < y {
        x += step;
        step *= 2.0;
    }
    Ok(x)
}

/// `λ`: a unimodal minorant, peaking at ½, of
/// `s ↦ min{w(ρ) : α₂⁻¹(s) ≤ ρ ≤ α₁⁻¹(s)}`, so that `W(x) ≥ λ(V₁(x))`.
pub fn build_lambda(
    data: &MatrosovData,
    nodes: &[f64],
) -> Result<ComparisonFunction, MatrosovError> {
    let inv = |g: &Gain, y: f64| {
        if y <= 0.0 {
            Ok(0.0)
        } else {
            invert_monotone(|s| g.eval(s), y).map_err(step_err("radial bounds of lambda"))
        }
    };
    let mut values = Vec::with_capacity(nodes.len());
    for &s in nodes {
        let lo = inv(&data.alpha2, s)?;
        let hi = inv(&data.alpha1, s)?;
        if lo > hi * (1.0 + 1e-9) + 1e-12 {
            return Err(MatrosovError::Construction {
                step: "radial bounds of lambda",
                message: format!("alpha_2^-1({s}) = {lo} exceeds alpha_1^-1({s}) = {hi}"),
            });
        }
        let hi = hi.max(lo);
        let m = (0..=RADIAL_SAMPLES)
            .map(|j| {
                data.w_radial
                    .eval(lo + (hi - lo) * j as f64 / RADIAL_SAMPLES as f64)
            })
            .fold(f64::INFINITY, f64::min);
        values.push(m);
    }
    let raw = GridFunction::new(nodes.to_vec(), values, RightExtension::Constant)
        .map_err(step_err("lambda"))?;
    minorize_pd(&raw, 0.5).map_err(step_err("lambda"))
}

/// `k₁` together with `Λ₁ = k₁λ` and a nondecreasing bound on `|k₁'|`.
#[derive(Debug, Clone)]
pub struct K1Data {
    pub k1: Gain,
    pub lambda1: Gain,
    pub slope: ComparisonFunction,
    /// Lipschitz constant of `Λ₁`.
    pub lipschitz: f64,
}

/// `k₁(r) = 1 + 4r²` on `[0, ½]` and `4λ(½)r/λ(r)` beyond, so that
/// `Λ₁ = k₁λ` is of class K∞ and linear past ½.
pub fn build_k1(lambda: &ComparisonFunction) -> Result<K1Data, MatrosovError> {
    let lg = lambda.grid();
    let theta = GridFunction::new(
        lg.nodes().iter().map(|s| 2.0 * s).collect(),
        lg.values().to_vec(),
        RightExtension::Constant,
    )
    .map_err(step_err("k1"))?;
    let mkc = build_mu_kappa_chi(&theta).map_err(step_err("k1"))?;
    let k1 = mkc.mu;
    let lam = lambda.clone();
    let lambda1 = {
        let k = k1.clone();
        Gain::new(move |r| k.eval(r) * lam.eval(r.max(0.0)))
    };

    let nodes = lg.nodes();
    let vals = lg.values();
    let c = 4.0 * lambda.eval(0.5);
    let n = nodes.len();
    let mut seg = Vec::with_capacity(n);
    let mut lam_slope_max: f64 = 0.0;
    for i in 0..n - 1 {
        let (a, b) = (nodes[i], nodes[i + 1]);
        if b <= 0.5 {
            seg.push(8.0 * b);
            lam_slope_max = lam_slope_max.max(lg.segment_slope(i).abs());
        } else {
            let m = lg.segment_slope(i);
            let intercept = vals[i] - m * a;
            let low = vals[i].min(vals[i + 1]);
            seg.push(c * intercept.abs() / (low * low));
        }
    }
    let mut samples = Vec::with_capacity(n);
    let mut run: f64 = 0.0;
    for s in &seg {
        run = run.max(*s);
        samples.push(run);
    }
    samples.push(run.max(c / vals[n - 1]));
    let raw = GridFunction::new(nodes.to_vec(), samples, RightExtension::Constant)
        .map_err(step_err("k1 slope"))?;
    Ok(K1Data {
        k1,
        lambda1,
        slope: increasing_majorant(&raw),
        lipschitz: c + 2.0 * lam_slope_max,
    })
}

/// Gains shared by every stage after `λ`.
#[derive(Debug, Clone)]
pub struct BaseGains {
    pub nodes: Vec<f64>,
    pub lambda: ComparisonFunction,
    pub k1: K1Data,
    /// Conservative `α₁⁻¹`.
    pub a1_inv: Gain,
    /// `Γ(v) = slope(v)·σ₃(m(α₁⁻¹ v)) + 1`, with `m` the mode's growth map.
    pub big_gamma: Gain,
    /// `Λ₂(v) = k₁(v)φ₁(α₁⁻¹ v) + 1`.
    pub lambda2: Gain,
    /// `k₂(s) = sΓ(s) + k₁(s)σ₂(α₁⁻¹ s) + s`, tabulated.
    pub k2: Gain,
    pub k2_grid: GridFunction,
    /// `ψ(v) = k₁(v)(v + σ₂(α₁⁻¹ v)) + k₂(v) ≥ V₅` whenever `V₁ = v`.
    pub psi: Gain,
    pub psi_inv: Gain,
    /// `Λ₁ʳ = Λ₁∘ψ⁻¹`; also serves as `γ̂` inside `V₆`.
    pub lambda1_r: Gain,
}

/// Growth map of the mode: `μ_F`, the identity, or their maximum.
pub(crate) fn growth_map(data: &MatrosovData, mode: Mode) -> Gain {
    let mu = data.mu_f.clone().unwrap_or_else(Gain::identity);
    match mode {
        Mode::Discrete => mu,
        Mode::Continuous => Gain::identity(),
        Mode::Hybrid => mu.max(&Gain::identity()),
    }
}

/// Builds `λ`, `k₁`, `Γ`, `Λ₂`, `k₂`, `ψ` and `Λ₁ʳ` on `nodes`.
pub fn build_gains(
    data: &MatrosovData,
    mode: Mode,
    nodes: &[f64],
) -> Result<BaseGains, MatrosovError> {
    data.require(mode)?;
    let lambda = build_lambda(data, nodes)?;
    let k1 = build_k1(&lambda)?;
    let a1_inv = upper_inverse_table(&data.alpha1, nodes)?;
    let growth = growth_map(data, mode);

    let big_gamma = {
        let (slope, s3, g, ai) = (
            k1.slope.clone(),
            data.sigma3.clone(),
            growth,
            a1_inv.clone(),
        );
        Gain::new(move |v| slope.eval(v.max(0.0)) * s3.eval(g.eval(ai.eval(v))) + 1.0)
    };
    let lambda2 = {
        let (k, f1, ai) = (k1.k1.clone(), data.phi1.clone(), a1_inv.clone());
        Gain::new(move |v| k.eval(v) * f1.eval(ai.eval(v)) + 1.0)
    };
    let s2a = data.sigma2.compose(&a1_inv);
    let k2_grid = {
        let (gm, k, s2) = (big_gamma.clone(), k1.k1.clone(), s2a.clone());
        GridFunction::from_fn(nodes, RightExtension::LinearContinuation, |s| {
            s * gm.eval(s) + k.eval(s) * s2.eval(s) + s
        })
        .map_err(step_err("k2"))?
    };
    let k2 = Gain::from_grid(k2_grid.clone());
    let psi = {
        let (k, s2, k2) = (k1.k1.clone(), s2a, k2.clone());
        Gain::new(move |v| {
            let v = v.max(0.0);
            k.eval(v) * (v + s2.eval(v)) + k2.eval(v)
        })
    };
    let psi_inv = psi.inverse();
    let lambda1_r = k1.lambda1.compose(&psi_inv);
    Ok(BaseGains {
        nodes: nodes.to_vec(),
        lambda,
        k1,
        a1_inv,
        big_gamma,
        lambda2,
        k2,
        k2_grid,
        psi,
        psi_inv,
        lambda1_r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::default_nodes;
    use crate::matrosov::instances;

    #[test]
    fn lambda_for_quadratic_data() {
        let data = instances::sstar_discrete();
        let lam = build_lambda(&data, &default_nodes()).unwrap();
        // w(√s) = 3s/4, halved by the minorization and flat past ½.
        assert!(lam.eval(0.5) <= 0.375 + 1e-12);
        assert!(lam.eval(0.5) > 0.15);
        assert_eq!(lam.eval(10.0), lam.eval(0.5));
    }

    #[test]
    fn lambda1_is_linear_past_half() {
        let data = instances::sstar_discrete();
        let lam = build_lambda(&data, &default_nodes()).unwrap();
        let k = build_k1(&lam).unwrap();
        let c = 4.0 * lam.eval(0.5);
        for r in [0.75, 2.0, 40.0] {
            assert!((k.lambda1.eval(r) - c * r).abs() < 1e-9 * r);
        }
        assert!((k.k1.eval(0.25) - 1.25).abs() < 1e-12);
    }

    #[test]
    fn slope_envelope_bounds_k1_differences() {
        let data = instances::sstar_discrete();
        let lam = build_lambda(&data, &default_nodes()).unwrap();
        let k = build_k1(&lam).unwrap();
        let pts: Vec<f64> = (0..400).map(|i| 1e-3 * 1.03f64.powi(i)).collect();
        for w in pts.windows(2) {
            let diff = k.k1.eval(w[1]) - k.k1.eval(w[0]);
            assert!(diff.abs() <= k.slope.eval(w[1]) * (w[1] - w[0]) + 1e-12);
        }
    }

    #[test]
    fn lambda1_lipschitz_bound() {
        let data = instances::sstar_discrete();
        let lam = build_lambda(&data, &default_nodes()).unwrap();
        let k = build_k1(&lam).unwrap();
        let pts: Vec<f64> = (0..=2000).map(|i| i as f64 * 1e-3).collect();
        for w in pts.windows(2) {
            let d = (k.lambda1.eval(w[1]) - k.lambda1.eval(w[0])) / (w[1] - w[0]);
            assert!(d <= k.lipschitz + 1e-9);
        }
    }

    #[test]
    fn k2_secant_property() {
        let data = instances::sstar_discrete();
        let g = build_gains(&data, Mode::Discrete, &default_nodes()).unwrap();
        let pts: Vec<f64> = (0..300).map(|i| 1e-4 * 1.05f64.powi(i)).collect();
        for (i, &b) in pts.iter().enumerate() {
            for &a in &pts[..i] {
                let lhs = g.k2.eval(b) - g.k2.eval(a);
                assert!(lhs >= (b - a) * g.big_gamma.eval(b) * (1.0 - 1e-12));
            }
        }
    }

    #[test]
    fn psi_dominates_and_inverts() {
        let data = instances::sstar_discrete();
        let g = build_gains(&data, Mode::Discrete, &default_nodes()).unwrap();
        for v in [1e-3, 0.3, 2.0, 25.0] {
            assert!(g.psi.eval(v) >= v);
            assert!((g.psi_inv.eval(g.psi.eval(v)) - v).abs() < 1e-8 * v.max(1.0));
        }
    }

    #[test]
    fn inverse_table_dominates() {
        let a1 = Gain::power(1.0, 2.0);
        let t = upper_inverse_table(&a1, &default_nodes()).unwrap();
        for v in [1e-4, 2e-3, 0.37, 5.0, 24.9, 999.0] {
            assert!(t.eval(v) >= v.sqrt() * (1.0 - 1e-9), "{v}");
        }
    }
}
