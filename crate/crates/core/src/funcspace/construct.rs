use std::sync::Arc;

use super::comparison::{ClassTag, ComparisonFunction};
use super::gain::Gain;
use super::grid::{merge_nodes, GridFunction, RightExtension};
use super::invert::invert_monotone;
use super::FuncError;
use crate::quad::simpson;

/// Subintervals per table segment for the κ quadrature.
const SEG_INTERVALS: usize = 4;

/// The gains `μ`, `κ = 2∫μ`, `χ = Θ(2·)μ` built from a positive definite `Θ`.
#[derive(Debug, Clone)]
pub struct MuKappaChi {
    pub mu: Gain,
    pub kappa: Gain,
    pub chi: Gain,
    nodes: Vec<f64>,
}

impl MuKappaChi {
    /// Quadrature nodes of κ (the kinks of μ).
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Tabulates `(μ, κ, χ)` on `nodes` as classified comparison functions.
    pub fn tabulate(
        &self,
        nodes: &[f64],
    ) -> Result<(ComparisonFunction, ComparisonFunction, ComparisonFunction), FuncError> {
        let mu = ComparisonFunction::new(
            self.mu
                .tabulate(nodes, RightExtension::LinearContinuation)?,
            ClassTag::IncreasingPositive,
        )?;
        let kappa = ComparisonFunction::new(
            self.kappa
                .tabulate(nodes, RightExtension::LinearContinuation)?,
            ClassTag::Kinf,
        )?;
        let chi = ComparisonFunction::new(
            self.chi
                .tabulate(nodes, RightExtension::LinearContinuation)?,
            ClassTag::Kinf,
        )?;
        Ok((mu, kappa, chi))
    }
}

/// Builds `μ(r) = 1 + 4r²` on `[0, ½]`, `μ(r) = 4Θ(1)r/Θ(2r)` beyond,
/// `κ(r) = 2∫₀ʳ μ` and `χ(r) = Θ(2r)μ(r)`.
///
/// κ is integrated by composite Simpson between the kinks of μ and evaluated
/// off-table by a local Simpson step from the nearest node below.
pub fn build_mu_kappa_chi(theta: &GridFunction) -> Result<MuKappaChi, FuncError> {
    ComparisonFunction::new(theta.clone(), ClassTag::PositiveDefinite)?;
    let theta1 = theta.eval(1.0);
    if !(theta1 > 0.0) {
        return Err(FuncError::Singularity("Θ(1) must be positive".into()));
    }
    let n = theta.len();
    if theta.right_extension() == RightExtension::LinearContinuation
        && theta.segment_slope(n - 2) < 0.0
    {
        return Err(FuncError::Singularity(
            "Θ reaches zero on its linear continuation".into(),
        ));
    }

    let th = theta.clone();
    let mu_fn = move |r: f64| {
        if r <= 0.5 {
            1.0 + 4.0 * r * r
        } else {
            4.0 * theta1 * r / th.eval(2.0 * r)
        }
    };
    let mu_fn = Arc::new(mu_fn);

    let halves: Vec<f64> = theta.nodes().iter().map(|s| 0.5 * s).collect();
    let table = merge_nodes(&halves, &[0.5]);
    let mut cum = Vec::with_capacity(table.len());
    cum.push(0.0);
    for w in table.windows(2) {
        let prev = *cum.last().unwrap();
        cum.push(prev + 2.0 * simpson(&*mu_fn, w[0], w[1], SEG_INTERVALS));
    }
    let last = *table.last().unwrap();
    let last_step = last - table[table.len() - 2];

    let mu = {
        let m = mu_fn.clone();
        Gain::new(move |r| m(r.max(0.0)))
    };
    let kappa = {
        let m = mu_fn.clone();
        let table = table.clone();
        Gain::new(move |r| {
            if !(r > 0.0) {
                return if r.is_nan() { f64::NAN } else { 0.0 };
            }
            let i = table.partition_point(|&s| s <= r) - 1;
            let intervals = if i + 1 < table.len() {
                SEG_INTERVALS
            } else {
                (((r - last) / last_step).ceil() as usize * SEG_INTERVALS)
                    .clamp(SEG_INTERVALS, 4096)
            };
            cum[i] + 2.0 * simpson(&*m, table[i], r, intervals)
        })
    };
    let chi = {
        let m = mu_fn.clone();
        let th = theta.clone();
        Gain::new(move |r| {
            let r = r.max(0.0);
            th.eval(2.0 * r) * m(r)
        })
    };
    Ok(MuKappaChi {
        mu,
        kappa,
        chi,
        nodes: table,
    })
}

/// `γ(s) = χ(κ⁻¹(s)/2)`, with κ⁻¹ by monotone bisection.
///
/// κ is probed for `κ(0) = 0` and strict increase on `probe`; arguments that
/// κ cannot reach evaluate to NaN.
pub fn build_gamma(kappa: &Gain, chi: &Gain, probe: &[f64]) -> Result<Gain, FuncError> {
    if kappa.eval(0.0) != 0.0 {
        return Err(FuncError::Class {
            expected: "Kinf".into(),
            node: 0,
            at: 0.0,
        });
    }
    for (i, w) in probe.windows(2).enumerate() {
        if !(kappa.eval(w[1]) > kappa.eval(w[0])) {
            return Err(FuncError::Class {
                expected: "Kinf".into(),
                node: i + 1,
                at: w[1],
            });
        }
    }
    let (k, c) = (kappa.clone(), chi.clone());
    Ok(Gain::new(move |s| {
        if !(s > 0.0) {
            return if s.is_nan() { f64::NAN } else { 0.0 };
        }
        match invert_monotone(|r| k.eval(r), s) {
            Ok(r) => c.eval(0.5 * r),
            Err(_) => f64::NAN,
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::log_nodes;

    fn identity_theta() -> GridFunction {
        GridFunction::from_fn(
            &log_nodes(1e3, 512),
            RightExtension::LinearContinuation,
            |s| s,
        )
        .unwrap()
    }

    #[test]
    fn identity_theta_closed_forms() {
        let m = build_mu_kappa_chi(&identity_theta()).unwrap();
        assert!((m.mu.eval(0.25) - 1.25).abs() < 1e-12);
        assert!((m.mu.eval(2.0) - 2.0).abs() < 1e-12);
        assert!((m.kappa.eval(0.5) - 4.0 / 3.0).abs() < 1e-12);
        assert!((m.kappa.eval(1.0) - 10.0 / 3.0).abs() < 1e-12);
        assert!((m.chi.eval(0.5) - 2.0).abs() < 1e-12);
        assert_eq!(m.chi.eval(0.0), 0.0);
    }

    #[test]
    fn kappa_grows_past_the_table() {
        let m = build_mu_kappa_chi(&identity_theta()).unwrap();
        // μ ≡ 2 beyond ½, so κ(r) = 4/3 + 4(r − ½).
        let r = 5e3;
        assert!((m.kappa.eval(r) - (4.0 / 3.0 + 4.0 * (r - 0.5))).abs() < 1e-8 * r);
    }

    #[test]
    fn gamma_inverts_kappa() {
        let m = build_mu_kappa_chi(&identity_theta()).unwrap();
        let g = build_gamma(&m.kappa, &m.chi, &log_nodes(10.0, 64)).unwrap();
        assert!((g.eval(10.0 / 3.0) - 2.0).abs() < 1e-8);
        assert_eq!(g.eval(0.0), 0.0);
    }

    #[test]
    fn zero_theta_is_singular() {
        let th = GridFunction::new(
            vec![0.0, 1.0, 2.0],
            vec![0.0, 0.0, 1.0],
            RightExtension::Constant,
        )
        .unwrap();
        assert!(build_mu_kappa_chi(&th).is_err());
    }
}
