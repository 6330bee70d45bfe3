use super::report::{CertificationReport, InequalityRecord, Witness};
use super::CertifyError;
use crate::funcspace::ScalarField;
use crate::systems::{ArcPoint, ArcStatus, HybridArc};

/// Values below this are treated as zero when taking logarithms.
pub const LOG_FLOOR: f64 = 1e-12;
/// Relative slack allowed by the monotonicity check.
pub const MONOTONE_TOL: f64 = 1e-12;

struct Acc {
    name: &'static str,
    anchor: &'static str,
    tol: f64,
    worst: Option<(f64, Witness)>,
    n: usize,
}

impl Acc {
    fn new(name: &'static str, anchor: &'static str, tol: f64) -> Self {
        Self {
            name,
            anchor,
            tol,
            worst: None,
            n: 0,
        }
    }

    fn add(&mut self, p: &ArcPoint, lhs: f64, rhs: f64, margin: f64) {
        self.n += 1;
        let margin = if margin.is_nan() {
            f64::INFINITY
        } else {
            margin
        };
        if self.worst.as_ref().is_none_or(|(m, _)| margin > *m) {
            let w = Witness {
                x: p.x.clone(),
                t: p.t,
                k: p.k,
                lhs,
                rhs,
            };
            self.worst = Some((margin, w));
        }
    }

    fn finish(self) -> InequalityRecord {
        let worst_margin = self.worst.as_ref().map_or(f64::NEG_INFINITY, |(m, _)| *m);
        InequalityRecord {
            name: self.name.into(),
            anchor: self.anchor.into(),
            worst_margin,
            witness: self.worst.map(|(_, w)| w),
            samples_checked: self.n,
            tolerance: self.tol,
            pass: worst_margin <= self.tol,
        }
    }
}

/// Checks `V` along a simulated arc:
/// - each jump: `V⁺ ≤ jump_factor·V + tol`;
/// - each flow step with both values above `1e−12`: log-rate `≥ flow_rate − tol`;
/// - the whole arc: `V` nonincreasing (relative slack `1e−12`).
pub fn check_arc_decay(
    v: &ScalarField,
    arc: &HybridArc,
    jump_factor: f64,
    flow_rate: f64,
    tol: f64,
) -> Result<CertificationReport, CertifyError> {
    if arc.status == ArcStatus::Blowup {
        return Err(CertifyError::BlowupArc);
    }
    arc.validate_domain().map_err(CertifyError::InvalidArc)?;
    let vals: Vec<f64> = arc.points.iter().map(|p| v.eval(&p.x, p.t, p.k)).collect();

    let mut jump = Acc::new(
        "arc_jump_contraction",
        "exponential decrease across jumps",
        tol,
    );
    let mut flow = Acc::new("arc_flow_rate", "exponential decrease along flows", tol);
    let mut mono = Acc::new("arc_monotone", "nonincrease along the arc", MONOTONE_TOL);
    for i in 1..arc.points.len() {
        let (a, b) = (&arc.points[i - 1], &arc.points[i]);
        let (va, vb) = (vals[i - 1], vals[i]);
        mono.add(a, vb, va, (vb - va) / va.abs().max(1.0));
        if b.segment != a.segment {
            jump.add(a, vb, jump_factor * va, vb - jump_factor * va);
        } else if b.t > a.t && va > LOG_FLOOR && vb > LOG_FLOOR {
            let rate = -(vb / va).ln() / (b.t - a.t);
            flow.add(a, flow_rate, rate, flow_rate - rate);
        }
    }
    let mut report = CertificationReport::new();
    report.push(jump.finish());
    report.push(flow.finish());
    report.push(mono.finish());
    Ok(report)
}

/// Least-squares slope of `ln(value)` against time, sign-flipped.
pub fn fit_exponential_rate(series: &[(f64, f64)]) -> Result<f64, CertifyError> {
    if series.len() < 2 {
        return Err(CertifyError::Fit("need at least two samples".into()));
    }
    if let Some((t, v)) = series.iter().find(|(_, v)| !(*v > 0.0)) {
        return Err(CertifyError::Fit(format!(
            "nonpositive value {v} at t = {t}"
        )));
    }
    let n = series.len() as f64;
    let tm = series.iter().map(|(t, _)| t).sum::<f64>() / n;
    let ym = series.iter().map(|(_, v)| v.ln()).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (t, v) in series {
        sxy += (t - tm) * (v.ln() - ym);
        sxx += (t - tm) * (t - tm);
    }
    if sxx == 0.0 {
        return Err(CertifyError::Fit("all samples share one time".into()));
    }
    Ok(-sxy / sxx)
}
