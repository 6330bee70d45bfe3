use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::CertifyError;

/// A point `(x, t, k)` at which an inequality is evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub x: Vec<f64>,
    pub t: f64,
    pub k: i64,
}

/// Tensor grid over a state box, a time range and an index range, plus
/// seeded uniform random samples from the same box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub state_min: Vec<f64>,
    pub state_max: Vec<f64>,
    /// Points per state dimension (endpoints included).
    pub points: Vec<usize>,
    #[serde(default)]
    pub t_min: f64,
    #[serde(default)]
    pub t_max: f64,
    /// Number of time points; 1 samples only `t_min`.
    #[serde(default = "one")]
    pub t_points: usize,
    #[serde(default)]
    pub k_min: i64,
    #[serde(default)]
    pub k_max: i64,
    #[serde(default)]
    pub random: usize,
    #[serde(default)]
    pub seed: u64,
}

fn one() -> usize {
    1
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

impl GridSpec {
    /// Symmetric box `[−r, r]^dim` with `n` points per axis, a single time and index.
    pub fn cube(dim: usize, r: f64, n: usize) -> Self {
        Self {
            state_min: vec![-r; dim],
            state_max: vec![r; dim],
            points: vec![n; dim],
            t_min: 0.0,
            t_max: 0.0,
            t_points: 1,
            k_min: 0,
            k_max: 0,
            random: 0,
            seed: 0,
        }
    }

    pub fn with_time(mut self, t_min: f64, t_max: f64, t_points: usize) -> Self {
        self.t_min = t_min;
        self.t_max = t_max;
        self.t_points = t_points;
        self
    }

    pub fn with_index(mut self, k_min: i64, k_max: i64) -> Self {
        self.k_min = k_min;
        self.k_max = k_max;
        self
    }

    pub fn with_random(mut self, random: usize, seed: u64) -> Self {
        self.random = random;
        self.seed = seed;
        self
    }

    pub fn dim(&self) -> usize {
        self.state_min.len()
    }

    pub fn validate(&self) -> Result<(), CertifyError> {
        let d = self.state_min.len();
        if d == 0 || self.state_max.len() != d || self.points.len() != d {
            return Err(CertifyError::Grid(
                "state_min, state_max and points must have the same positive length".into(),
            ));
        }
        if self.points.contains(&0) || self.t_points == 0 {
            return Err(CertifyError::Grid("point counts must be positive".into()));
        }
        let finite_box = self
            .state_min
            .iter()
            .zip(&self.state_max)
            .all(|(a, b)| a.is_finite() && b.is_finite() && a <= b);
        if !finite_box || !(self.t_min <= self.t_max) || !self.t_max.is_finite() {
            return Err(CertifyError::Grid(
                "ranges must be finite with min <= max".into(),
            ));
        }
        if self.k_min > self.k_max {
            return Err(CertifyError::Grid("k_min must not exceed k_max".into()));
        }
        Ok(())
    }

    /// All tensor-grid samples followed by the random ones, in a fixed order.
    pub fn samples(&self) -> Result<Vec<Sample>, CertifyError> {
        self.validate()?;
        let axes: Vec<Vec<f64>> = (0..self.dim())
            .map(|i| linspace(self.state_min[i], self.state_max[i], self.points[i]))
            .collect();
        let times = linspace(self.t_min, self.t_max, self.t_points);
        let mut states: Vec<Vec<f64>> = vec![Vec::new()];
        for axis in &axes {
            states = states
                .into_iter()
                .flat_map(|prefix| {
                    axis.iter().map(move |&v| {
                        let mut p = prefix.clone();
                        p.push(v);
                        p
                    })
                })
                .collect();
        }
        let mut out = Vec::new();
        for x in &states {
            for &t in &times {
                for k in self.k_min..=self.k_max {
                    out.push(Sample { x: x.clone(), t, k });
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        for _ in 0..self.random {
            let x = (0..self.dim())
                .map(|i| {
                    let (a, b) = (self.state_min[i], self.state_max[i]);
                    if a == b {
                        a
                    } else {
                        rng.gen_range(a..=b)
                    }
                })
                .collect();
            let t = if self.t_min == self.t_max {
                self.t_min
            } else {
                rng.gen_range(self.t_min..=self.t_max)
            };
            let k = rng.gen_range(self.k_min..=self.k_max);
            out.push(Sample { x, t, k });
        }
        Ok(out)
    }
}
