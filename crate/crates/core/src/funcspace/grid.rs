use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::FuncError;

/// How a [`GridFunction`] is evaluated past its last node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RightExtension {
    /// Continue the slope of the last segment.
    LinearContinuation,
    /// Hold the last value.
    Constant,
}

/// A scalar function on `[0, ∞)` stored as values on a strictly increasing
/// node grid starting at 0, interpolated piecewise-linearly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    nodes: Vec<f64>,
    values: Vec<f64>,
    right_extension: RightExtension,
}

impl GridFunction {
    pub fn new(
        nodes: Vec<f64>,
        values: Vec<f64>,
        right_extension: RightExtension,
    ) -> Result<Self, FuncError> {
        let g = Self {
            nodes,
            values,
            right_extension,
        };
        g.validate()?;
        Ok(g)
    }

    /// Tabulates `f` on `nodes`.
    pub fn from_fn(
        nodes: &[f64],
        right_extension: RightExtension,
        f: impl Fn(f64) -> f64,
    ) -> Result<Self, FuncError> {
        let values = nodes.iter().map(|&s| f(s)).collect();
        Self::new(nodes.to_vec(), values, right_extension)
    }

    /// Re-checks the structural invariants (used after deserialization).
    pub fn validate(&self) -> Result<(), FuncError> {
        if self.nodes.len() < 2 || self.nodes.len() != self.values.len() {
            return Err(FuncError::MalformedGrid(format!(
                "need at least two nodes and one value per node (nodes={}, values={})",
                self.nodes.len(),
                self.values.len()
            )));
        }
        if self.nodes[0] != 0.0 {
            return Err(FuncError::MalformedGrid(format!(
                "first node must be 0, got {}",
                self.nodes[0]
            )));
        }
        for (i, w) in self.nodes.windows(2).enumerate() {
            if !(w[1] > w[0]) || !w[1].is_finite() {
                return Err(FuncError::MalformedGrid(format!(
                    "nodes not strictly increasing at index {}",
                    i + 1
                )));
            }
        }
        if let Some(i) = self.values.iter().position(|v| !v.is_finite()) {
            return Err(FuncError::MalformedGrid(format!(
                "non-finite value at node {i}"
            )));
        }
        Ok(())
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn right_extension(&self) -> RightExtension {
        self.right_extension
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn last_node(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    pub fn with_right_extension(mut self, ext: RightExtension) -> Self {
        self.right_extension = ext;
        self
    }

    /// Slope of segment `i` (between nodes `i` and `i + 1`).
    pub fn segment_slope(&self, i: usize) -> f64 {
        (self.values[i + 1] - self.values[i]) / (self.nodes[i + 1] - self.nodes[i])
    }

    /// Index of the segment containing `s`, clamped to the valid range.
    fn segment_of(&self, s: f64) -> usize {
        let n = self.nodes.len();
        let idx = self.nodes.partition_point(|&node| node <= s);
        idx.saturating_sub(1).min(n - 2)
    }

    /// Evaluates the interpolant. Arguments below 0 are clamped to 0.
    pub fn eval(&self, s: f64) -> f64 {
        let n = self.nodes.len();
        if s.is_nan() {
            return f64::NAN;
        }
        if s <= 0.0 {
            return self.values[0];
        }
        let last = self.nodes[n - 1];
        if s >= last {
            return match self.right_extension {
                RightExtension::Constant => self.values[n - 1],
                RightExtension::LinearContinuation => {
                    self.values[n - 1] + self.segment_slope(n - 2) * (s - last)
                }
            };
        }
        let i = self.segment_of(s);
        let (x0, x1) = (self.nodes[i], self.nodes[i + 1]);
        if s == x0 {
            return self.values[i];
        }
        let theta = (s - x0) / (x1 - x0);
        self.values[i] + theta * (self.values[i + 1] - self.values[i])
    }

    pub fn map_values(&self, f: impl Fn(f64, f64) -> f64) -> Self {
        let values = self
            .nodes
            .iter()
            .zip(&self.values)
            .map(|(&s, &v)| f(s, v))
            .collect();
        Self {
            nodes: self.nodes.clone(),
            values,
            right_extension: self.right_extension,
        }
    }

    /// Returns a copy whose node set also contains `s` (value from interpolation).
    pub fn with_node(&self, s: f64) -> Self {
        if s <= 0.0 || self.nodes.contains(&s) {
            return self.clone();
        }
        let value = self.eval(s);
        let idx = self.nodes.partition_point(|&n| n < s);
        let mut nodes = self.nodes.clone();
        let mut values = self.values.clone();
        nodes.insert(idx, s);
        values.insert(idx, value);
        Self {
            nodes,
            values,
            right_extension: self.right_extension,
        }
    }

    /// Writes `node,value` rows with a header line.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), FuncError> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["node", "value"])?;
        for (s, v) in self.nodes.iter().zip(&self.values) {
            wtr.write_record([format_f64(*s), format_f64(*v)])?;
        }
        wtr.flush().map_err(|e| FuncError::Io(e.to_string()))?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R, right_extension: RightExtension) -> Result<Self, FuncError> {
        let mut rdr = csv::Reader::from_reader(r);
        let mut nodes = Vec::new();
        let mut values = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            if rec.len() != 2 {
                return Err(FuncError::MalformedGrid(format!(
                    "expected 2 columns, found {}",
                    rec.len()
                )));
            }
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| FuncError::MalformedGrid(format!("bad number {s:?}: {e}")))
            };
            nodes.push(parse(&rec[0])?);
            values.push(parse(&rec[1])?);
        }
        Self::new(nodes, values, right_extension)
    }
}

/// Shortest representation that parses back to the same `f64`.
pub(crate) fn format_f64(v: f64) -> String {
    format!("{v:?}")
}

/// `n` nodes: 0 followed by `n - 1` log-spaced nodes from `max * 1e-6` to `max`.
pub fn log_nodes(max: f64, n: usize) -> Vec<f64> {
    assert!(n >= 3 && max > 0.0, "log grid needs n >= 3 and max > 0");
    let lo = (max * 1e-6).ln();
    let hi = max.ln();
    let m = n - 1;
    let mut nodes = Vec::with_capacity(n);
    nodes.push(0.0);
    for i in 0..m {
        let frac = i as f64 / (m - 1) as f64;
        nodes.push((lo + frac * (hi - lo)).exp());
    }
    *nodes.last_mut().unwrap() = max;
    nodes
}

/// Uniform nodes on `[0, max]`.
pub fn linear_nodes(max: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && max > 0.0);
    (0..n).map(|i| max * i as f64 / (n - 1) as f64).collect()
}

/// Default comparison-function grid: log-spaced over `[0, 1e3]`, 2048 nodes.
pub fn default_nodes() -> Vec<f64> {
    log_nodes(1e3, 2048)
}

/// Inserts `extra` points into a sorted node list, keeping it strictly increasing.
pub fn merge_nodes(nodes: &[f64], extra: &[f64]) -> Vec<f64> {
    let mut all: Vec<f64> = nodes.iter().chain(extra).copied().collect();
    all.sort_by(|a, b| a.partial_cmp(b).unwrap());
    all.dedup();
    all
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity() -> GridFunction {
        GridFunction::from_fn(&[0.0, 1.0, 2.0], RightExtension::LinearContinuation, |s| s).unwrap()
    }

    #[test]
    fn eval_exact_at_nodes() {
        let nodes = log_nodes(10.0, 50);
        let g =
            GridFunction::from_fn(&nodes, RightExtension::Constant, |s| s.sin() + s * s).unwrap();
        for (&s, &v) in g.nodes().iter().zip(g.values()) {
            assert_eq!(g.eval(s), v);
        }
    }

    #[test]
    fn interpolation_and_extensions() {
        let g = identity();
        assert_eq!(g.eval(0.5), 0.5);
        assert_eq!(g.eval(3.5), 3.5);
        let c = g.clone().with_right_extension(RightExtension::Constant);
        assert_eq!(c.eval(3.5), 2.0);
        assert_eq!(g.eval(-1.0), 0.0);
    }

    #[test]
    fn rejects_malformed() {
        assert!(
            GridFunction::new(vec![0.0, 1.0, 1.0], vec![0.0; 3], RightExtension::Constant).is_err()
        );
        assert!(GridFunction::new(vec![0.5, 1.0], vec![0.0; 2], RightExtension::Constant).is_err());
        assert!(GridFunction::new(
            vec![0.0, 1.0],
            vec![0.0, f64::NAN],
            RightExtension::Constant
        )
        .is_err());
    }

    #[test]
    fn csv_round_trip() {
        let nodes = log_nodes(5.0, 20);
        let g = GridFunction::from_fn(&nodes, RightExtension::Constant, |s| s.sqrt()).unwrap();
        let mut buf = Vec::new();
        g.write_csv(&mut buf).unwrap();
        let back = GridFunction::read_csv(buf.as_slice(), RightExtension::Constant).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn log_nodes_shape() {
        let n = default_nodes();
        assert_eq!(n.len(), 2048);
        assert_eq!(n[0], 0.0);
        assert_eq!(*n.last().unwrap(), 1e3);
        assert!(n.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn with_node_inserts_once() {
        let g = identity().with_node(0.5);
        assert_eq!(g.nodes(), &[0.0, 0.5, 1.0, 2.0]);
        assert_eq!(g.with_node(0.5).len(), 4);
    }
}
