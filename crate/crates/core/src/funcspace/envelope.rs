use super::comparison::{ClassTag, ComparisonFunction};
use super::grid::{GridFunction, RightExtension};
use super::FuncError;

/// Running-min envelope toward `peak` from both sides: nondecreasing up to the
/// peak, nonincreasing after it, and `≤ f` at every node. `peak` is inserted
/// as a node.
pub fn unimodal_envelope(f: &GridFunction, peak: f64) -> GridFunction {
    let g = f.with_node(peak);
    let nodes = g.nodes();
    let v = g.values();
    let n = v.len();
    let p = nodes.partition_point(|&s| s < peak).min(n - 1);
    let mut out = v.to_vec();
    for i in (0..p).rev() {
        out[i] = out[i].min(out[i + 1]);
    }
    for i in p + 1..n {
        out[i] = out[i].min(out[i - 1]);
    }
    GridFunction::new(nodes.to_vec(), out, RightExtension::Constant)
        .expect("envelope keeps the node grid")
}

/// Minorizes a positive definite gain by a unimodal one peaking at `peak`.
///
/// The envelope is smoothed by a 3-point moving average, clipped back under
/// the envelope, re-enveloped, and finally halved, so the result is strictly
/// below the input wherever the input is positive.
pub fn minorize_pd(theta: &GridFunction, peak: f64) -> Result<ComparisonFunction, FuncError> {
    if !(peak > 0.0) {
        return Err(FuncError::Parameter(format!(
            "peak must be positive, got {peak}"
        )));
    }
    ComparisonFunction::new(theta.clone(), ClassTag::PositiveDefinite)?;

    let env = unimodal_envelope(theta, peak);
    let e = env.values();
    let n = e.len();
    let mut smooth = vec![0.0; n];
    for i in 1..n {
        smooth[i] = if i + 1 < n {
            (e[i - 1] + e[i] + e[i + 1]) / 3.0
        } else {
            (e[i - 1] + e[i]) / 2.0
        };
        smooth[i] = smooth[i].min(e[i]);
    }
    let clipped = GridFunction::new(env.nodes().to_vec(), smooth, RightExtension::Constant)?;
    let shaped = unimodal_envelope(&clipped, peak).map_values(|_, v| 0.5 * v);
    ComparisonFunction::new(shaped, ClassTag::UnimodalPd { peak })
}

/// `f(r) = ½·min(inf_u [h(u) + L·|r − u|], L·r)` over the nodes of `h`.
///
/// The result is positive definite, `L/2`-Lipschitz, and `≤ h` at every node.
pub fn lipschitz_pd_minorant(h: &GridFunction, lip: f64) -> Result<ComparisonFunction, FuncError> {
    if !(lip > 0.0) {
        return Err(FuncError::Parameter(format!(
            "Lipschitz constant must be positive, got {lip}"
        )));
    }
    let nodes = h.nodes();
    let v = h.values();
    if v[0] < 0.0 || v[1..].iter().any(|&x| x <= 0.0) {
        let i = (1..v.len()).find(|&i| v[i] <= 0.0).unwrap_or(0);
        return Err(FuncError::Class {
            expected: "positive off 0".into(),
            node: i,
            at: nodes[i],
        });
    }
    let n = v.len();
    // Two-pass distance transform computes the inf-convolution exactly.
    let mut conv = v.to_vec();
    for i in 1..n {
        conv[i] = conv[i].min(conv[i - 1] + lip * (nodes[i] - nodes[i - 1]));
    }
    for i in (0..n - 1).rev() {
        conv[i] = conv[i].min(conv[i + 1] + lip * (nodes[i + 1] - nodes[i]));
    }
    let values = nodes
        .iter()
        .zip(conv)
        .map(|(&r, c)| 0.5 * c.min(lip * r))
        .collect();
    let f = GridFunction::new(nodes.to_vec(), values, RightExtension::Constant)?;
    ComparisonFunction::new(f, ClassTag::PositiveDefinite)
}

/// Running maximum plus one: positive, nondecreasing, and `≥ samples + 1`.
pub fn increasing_majorant(samples: &GridFunction) -> ComparisonFunction {
    let mut run = f64::NEG_INFINITY;
    let values = samples
        .values()
        .iter()
        .map(|&v| {
            run = run.max(v);
            run + 1.0
        })
        .collect();
    let f = GridFunction::new(samples.nodes().to_vec(), values, RightExtension::Constant)
        .expect("same grid");
    ComparisonFunction {
        f,
        class_tag: ClassTag::IncreasingPositive,
    }
}
