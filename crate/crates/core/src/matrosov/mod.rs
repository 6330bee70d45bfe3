//! Strict Lyapunov functions from Matrosov conditions: discrete, continuous
//! and hybrid pipelines producing `V₈` and its decay gain `α₃`.

mod assemble;
mod assumption;
mod gains;
pub mod instances;
mod pipeline;

use serde::{Deserialize, Serialize};

pub use assemble::{
    assemble_v5, assemble_v8, build_k3_k4, build_phi3_k5, strictify_v5, Phi3K5, V6Data, V8Data,
    K3K4,
};
pub use assumption::check_assumption;
pub use assumption::ASSUMPTION_TOL;
pub use gains::{build_gains, build_k1, build_lambda, upper_inverse_table, BaseGains, K1Data};
pub use pipeline::{
    construct, run_pipeline, Construction, PipelineOptions, PipelineResult, SubCertificate,
};

use crate::certify::CertifyError;
use crate::funcspace::{FuncError, Gain, ScalarField};
use crate::pe::{ContinuousPESignal, DiscretePESignal, PeError};
use crate::systems::{ContinuousSystem, DiscreteSystem, SetFn};

/// Which decay notion the pipeline certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Decrements along `x⁺ = F(x, k)` with a discrete PE signal `p`.
    Discrete,
    /// Derivatives along `ẋ = G(x, t)` with a continuous PE signal `q`.
    Continuous,
    /// Both, on the jump set and the flow set respectively.
    Hybrid,
}

impl Mode {
    pub fn has_jumps(self) -> bool {
        matches!(self, Mode::Discrete | Mode::Hybrid)
    }

    pub fn has_flows(self) -> bool {
        matches!(self, Mode::Continuous | Mode::Hybrid)
    }
}

/// Matrosov data: the pair `(V₁, V₂)`, the auxiliary functions and every
/// envelope the construction needs.
///
/// Hypotheses (checked by [`check_assumption`]):
/// `ΔV₁ ≤ −N₁`, `ΔV₂ ≤ −N₂ + φ₁(|x|)φ₂(N₁)`, `N₁ + N₂ ≥ p(k+1)W(x)`
/// on jumps, and the same with `𝒟` and `q(t)` on flows.
#[derive(Clone)]
pub struct MatrosovData {
    pub dim: usize,
    pub v1: ScalarField,
    pub v2: ScalarField,
    pub n1: ScalarField,
    pub n2: ScalarField,
    pub w: ScalarField,
    /// Radial minorant: `w(|x|) ≤ W(x)`.
    pub w_radial: Gain,
    pub phi1: Gain,
    pub phi2: Gain,
    /// `α₁(|x|) ≤ V₁ ≤ α₂(|x|)`.
    pub alpha1: Gain,
    pub alpha2: Gain,
    /// `|V₂| ≤ σ₂(|x|)`.
    pub sigma2: Gain,
    /// `|V₁ + V₂| ≤ σ₃(|x|)`.
    pub sigma3: Gain,
    /// `N₁ ≤ ν₁(|x|)`.
    pub nu1: Gain,
    /// `|F(x,k)| ≤ μ_F(|x|)`.
    pub mu_f: Option<Gain>,
    pub p: Option<DiscretePESignal>,
    pub q: Option<ContinuousPESignal>,
    pub jump: Option<DiscreteSystem>,
    pub flow: Option<ContinuousSystem>,
    /// Jump set `D`; everywhere when absent.
    pub jump_set: Option<SetFn>,
    /// Flow set `C`; everywhere when absent.
    pub flow_set: Option<SetFn>,
}

impl MatrosovData {
    pub(crate) fn in_d(&self, x: &[f64]) -> bool {
        self.jump_set.as_ref().is_none_or(|d| d(x))
    }

    pub(crate) fn in_c(&self, x: &[f64]) -> bool {
        self.flow_set.as_ref().is_none_or(|c| c(x))
    }

    pub(crate) fn require(&self, mode: Mode) -> Result<(), MatrosovError> {
        if mode.has_jumps() {
            if self.p.is_none() || self.jump.is_none() {
                return Err(MatrosovError::Config(
                    "jump terms need a discrete signal p and a jump map".into(),
                ));
            }
            if self.mu_f.is_none() {
                return Err(MatrosovError::Config(
                    "jump terms need the growth envelope mu_F".into(),
                ));
            }
        }
        if mode.has_flows() && (self.q.is_none() || self.flow.is_none()) {
            return Err(MatrosovError::Config(
                "flow terms need a continuous signal q and a flow map".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum MatrosovError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("{step}: {source}")]
    Step {
        step: &'static str,
        #[source]
        source: FuncError,
    },
    #[error("{step}: {message}")]
    Construction { step: &'static str, message: String },
    #[error(transparent)]
    Pe(#[from] PeError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
}

pub(crate) fn step_err(step: &'static str) -> impl FnOnce(FuncError) -> MatrosovError {
    move |source| MatrosovError::Step { step, source }
}
