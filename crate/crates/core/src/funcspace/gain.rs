use std::fmt;
use std::sync::Arc;

use super::grid::{GridFunction, RightExtension};
use super::invert::invert_monotone;
use super::FuncError;

/// A univariate gain `[0, ∞) → ℝ`, either tabulated or composed from other gains.
///
/// Composite gains (products, compositions, inverses) are evaluated exactly
/// rather than re-tabulated, so identities such as `γ(κ(r)) = χ(r/2)` hold
/// up to the bisection tolerance instead of the grid interpolation error.
#[derive(Clone)]
pub struct Gain {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for Gain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Gain(..)")
    }
}

impl Gain {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { f: Arc::new(f) }
    }

    pub fn eval(&self, s: f64) -> f64 {
        (self.f)(s)
    }

    pub fn identity() -> Self {
        Self::new(|s| s)
    }

    pub fn constant(c: f64) -> Self {
        Self::new(move |_| c)
    }

    /// `s ↦ c·s`.
    pub fn linear(c: f64) -> Self {
        Self::new(move |s| c * s)
    }

    /// `s ↦ c·s^p`.
    pub fn power(c: f64, p: f64) -> Self {
        Self::new(move |s| c * s.max(0.0).powf(p))
    }

    pub fn from_grid(g: GridFunction) -> Self {
        Self::new(move |s| g.eval(s))
    }

    /// `s ↦ self(inner(s))`.
    pub fn compose(&self, inner: &Gain) -> Self {
        let (a, b) = (self.clone(), inner.clone());
        Self::new(move |s| a.eval(b.eval(s)))
    }

    pub fn mul(&self, other: &Gain) -> Self {
        let (a, b) = (self.clone(), other.clone());
        Self::new(move |s| a.eval(s) * b.eval(s))
    }

    pub fn add(&self, other: &Gain) -> Self {
        let (a, b) = (self.clone(), other.clone());
        Self::new(move |s| a.eval(s) + b.eval(s))
    }

    pub fn scale(&self, c: f64) -> Self {
        let a = self.clone();
        Self::new(move |s| c * a.eval(s))
    }

    pub fn max(&self, other: &Gain) -> Self {
        let (a, b) = (self.clone(), other.clone());
        Self::new(move |s| a.eval(s).max(b.eval(s)))
    }

    pub fn min(&self, other: &Gain) -> Self {
        let (a, b) = (self.clone(), other.clone());
        Self::new(move |s| a.eval(s).min(b.eval(s)))
    }

    /// Inverse of a strictly increasing gain, by bisection. Arguments below
    /// `self(0)` map to 0.
    pub fn inverse(&self) -> Self {
        let a = self.clone();
        Self::new(move |y| {
            let f0 = a.eval(0.0);
            if y <= f0 {
                return 0.0;
            }
            invert_monotone(|s| a.eval(s), y).unwrap_or(f64::NAN)
        })
    }

    /// Checked inverse evaluation.
    pub fn try_inverse_at(&self, y: f64) -> Result<f64, FuncError> {
        invert_monotone(|s| self.eval(s), y)
    }

    pub fn tabulate(
        &self,
        nodes: &[f64],
        right_extension: RightExtension,
    ) -> Result<GridFunction, FuncError> {
        GridFunction::from_fn(nodes, right_extension, |s| self.eval(s))
    }
}

impl From<GridFunction> for Gain {
    fn from(g: GridFunction) -> Self {
        Self::from_grid(g)
    }
}
