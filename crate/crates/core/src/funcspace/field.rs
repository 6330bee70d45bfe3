use std::fmt;
use std::sync::Arc;

type EvalFn = dyn Fn(&[f64], f64, i64) -> f64 + Send + Sync;
type GradFn = dyn Fn(&[f64], f64, i64) -> Vec<f64> + Send + Sync;

/// A deterministic map `(x, t, k) → ℝ` with optional derivative oracles.
#[derive(Clone)]
pub struct ScalarField {
    eval: Arc<EvalFn>,
    grad_x: Option<Arc<GradFn>>,
    dt: Option<Arc<EvalFn>>,
    pub depends_on_t: bool,
    pub depends_on_k: bool,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField")
            .field("grad_x", &self.grad_x.is_some())
            .field("dt", &self.dt.is_some())
            .field("depends_on_t", &self.depends_on_t)
            .field("depends_on_k", &self.depends_on_k)
            .finish()
    }
}

impl ScalarField {
    /// A field that may depend on all of `x`, `t` and `k`.
    pub fn new(f: impl Fn(&[f64], f64, i64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            eval: Arc::new(f),
            grad_x: None,
            dt: None,
            depends_on_t: true,
            depends_on_k: true,
        }
    }

    /// A field of the state only.
    pub fn of_state(f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        let mut s = Self::new(move |x, _, _| f(x));
        s.depends_on_t = false;
        s.depends_on_k = false;
        s
    }

    pub fn zero() -> Self {
        Self::of_state(|_| 0.0)
    }

    pub fn with_grad(
        mut self,
        g: impl Fn(&[f64], f64, i64) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        self.grad_x = Some(Arc::new(g));
        self
    }

    pub fn with_dt(mut self, d: impl Fn(&[f64], f64, i64) -> f64 + Send + Sync + 'static) -> Self {
        self.dt = Some(Arc::new(d));
        self
    }

    pub fn with_dependence(mut self, on_t: bool, on_k: bool) -> Self {
        self.depends_on_t = on_t;
        self.depends_on_k = on_k;
        self
    }

    pub fn eval(&self, x: &[f64], t: f64, k: i64) -> f64 {
        (self.eval)(x, t, k)
    }

    pub fn grad_x(&self, x: &[f64], t: f64, k: i64) -> Option<Vec<f64>> {
        self.grad_x.as_ref().map(|g| g(x, t, k))
    }

    pub fn dt(&self, x: &[f64], t: f64, k: i64) -> Option<f64> {
        self.dt.as_ref().map(|d| d(x, t, k))
    }

    pub fn has_grad(&self) -> bool {
        self.grad_x.is_some()
    }

    pub fn has_dt(&self) -> bool {
        self.dt.is_some()
    }
}
