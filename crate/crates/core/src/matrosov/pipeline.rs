use crate::certify::{
    check_inequality, dv_along_flow, norm, CertificationReport, Check, GridSpec, Sample,
    CONTINUOUS_TOL, DISCRETE_TOL,
};
use crate::funcspace::{log_nodes, Gain, GridFunction, RightExtension, ScalarField};

use super::assemble::{
    assemble_v8, build_k3_k4, build_phi3_k5, strictify_v5, Phi3K5, V6Data, V8Data, K3K4,
};
use super::assumption::check_assumption;
use super::gains::{build_gains, BaseGains};
use super::{step_err, MatrosovData, MatrosovError, Mode};

/// Gain nodes and time horizon of a pipeline run.
#[derive(Debug, Clone)]
pub struct PipelineOptions {
    pub nodes: Vec<f64>,
    pub horizon_t: f64,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self {
            nodes: crate::funcspace::default_nodes(),
            horizon_t: 100.0,
        }
    }
}

/// The decay certificate of one time domain (jumps or flows) together with
/// the multiplier grids it was checked with.
#[derive(Debug, Clone)]
pub struct SubCertificate {
    /// `Discrete` for the jump certificate, `Continuous` for the flow one.
    pub mode: Mode,
    pub k3: GridFunction,
    pub k4: GridFunction,
    pub k5: GridFunction,
    pub report: CertificationReport,
}

/// Every constructed object of a Matrosov run.
#[derive(Debug, Clone)]
pub struct Construction {
    pub mode: Mode,
    pub gains: BaseGains,
    pub v6: V6Data,
    pub k34: K3K4,
    pub k5: Phi3K5,
    pub v8: V8Data,
}

impl Construction {
    pub fn v8(&self) -> &ScalarField {
        &self.v8.v8
    }

    pub fn alpha3(&self) -> &Gain {
        &self.v8.alpha3
    }

    /// Named tables of the constructed gains, for export.
    pub fn gain_tables(&self) -> Result<Vec<(String, GridFunction)>, MatrosovError> {
        let nodes = &self.gains.nodes;
        let tab = |g: &Gain| {
            g.tabulate(nodes, RightExtension::LinearContinuation)
                .map_err(step_err("gain export"))
        };
        let g = &self.gains;
        Ok(vec![
            ("lambda".into(), g.lambda.grid().clone()),
            ("k1".into(), tab(&g.k1.k1)?),
            ("k1_slope".into(), g.k1.slope.grid().clone()),
            ("lambda1".into(), tab(&g.k1.lambda1)?),
            ("big_gamma".into(), tab(&g.big_gamma)?),
            ("lambda2".into(), tab(&g.lambda2)?),
            ("k2".into(), g.k2_grid.clone()),
            ("psi".into(), tab(&g.psi)?),
            ("lambda1_r".into(), tab(&g.lambda1_r)?),
            ("lambda2_e".into(), tab(&self.v6.lambda2e)?),
            ("h".into(), self.k34.h.clone()),
            ("k3".into(), self.k34.k3.grid().clone()),
            ("k4".into(), self.k34.k4_grid.clone()),
            ("phi3".into(), tab(&self.k5.phi3)?),
            ("k5".into(), self.k5.k5_grid.clone()),
            (
                "alpha3".into(),
                self.v8
                    .alpha3
                    .tabulate(&log_nodes(10.0, 257), RightExtension::LinearContinuation)
                    .map_err(step_err("gain export"))?,
            ),
        ])
    }

    /// Samples every decay inequality of the construction on `grid`.
    pub fn certify(
        &self,
        data: &MatrosovData,
        grid: &GridSpec,
    ) -> Result<(CertificationReport, Vec<SubCertificate>), MatrosovError> {
        certify_steps(
            data,
            self.mode,
            &self.gains,
            &self.v6,
            &self.k34,
            &self.k5,
            &self.v8,
            grid,
        )
    }
}

/// A construction with its hypothesis checks and decay certificates.
#[derive(Debug, Clone)]
pub struct PipelineResult {
    pub construction: Construction,
    /// Hypothesis and envelope checks.
    pub assumption: CertificationReport,
    /// Intermediate and final decay inequalities of all certificates.
    pub report: CertificationReport,
    /// One certificate per time domain present in the mode.
    pub certificates: Vec<SubCertificate>,
}

impl PipelineResult {
    pub fn v8(&self) -> &ScalarField {
        self.construction.v8()
    }

    pub fn alpha3(&self) -> &Gain {
        self.construction.alpha3()
    }

    /// Passes when both the hypotheses and every decay inequality pass.
    pub fn pass(&self) -> bool {
        self.assumption.pass && self.report.pass
    }
}

/// Runs every construction step for `mode`.
pub fn construct(
    data: &MatrosovData,
    mode: Mode,
    opts: &PipelineOptions,
) -> Result<Construction, MatrosovError> {
    let gains = build_gains(data, mode, &opts.nodes)?;
    let v6 = strictify_v5(data, mode, &gains, opts.horizon_t)?;
    let k34 = build_k3_k4(data, mode, &gains, &v6)?;
    let k5 = build_phi3_k5(data, &gains)?;
    let v8 = assemble_v8(data, &gains, &v6, &k34, &k5);
    Ok(Construction {
        mode,
        gains,
        v6,
        k34,
        k5,
        v8,
    })
}

fn jump_diff(v: &ScalarField, y: &[f64], s: &Sample) -> f64 {
    v.eval(y, s.t, s.k + 1) - v.eval(&s.x, s.t, s.k)
}

/// Checks the hypotheses, runs the construction for `mode` and samples the
/// resulting inequalities on `grid`.
pub fn run_pipeline(
    data: &MatrosovData,
    mode: Mode,
    grid: &GridSpec,
    opts: &PipelineOptions,
) -> Result<PipelineResult, MatrosovError> {
    let assumption = check_assumption(data, mode, grid)?;
    let construction = construct(data, mode, opts)?;
    let (report, certificates) = construction.certify(data, grid)?;
    Ok(PipelineResult {
        construction,
        assumption,
        report,
        certificates,
    })
}

#[allow(clippy::too_many_arguments)]
fn certify_steps(
    data: &MatrosovData,
    mode: Mode,
    gains: &BaseGains,
    v6: &V6Data,
    k34: &K3K4,
    k5: &Phi3K5,
    v8: &V8Data,
    grid: &GridSpec,
) -> Result<(CertificationReport, Vec<SubCertificate>), MatrosovError> {
    let samples = grid.samples()?;
    let mut rep = CertificationReport::new();
    let v1 = |s: &Sample| data.v1.eval(&s.x, s.t, s.k);
    let n1 = |s: &Sample| data.n1.eval(&s.x, s.t, s.k);
    let (c, a) = (k34.c, v6.decay);
    let l1 = &gains.k1.lambda1;
    let l1r = &gains.lambda1_r;
    let l2 = &gains.lambda2;
    let l2e = &v6.lambda2e;
    let k3 = &k34.k3;
    let phi2 = &data.phi2;
    let phi3 = &k5.phi3;

    rep.push(check_inequality(
        &Check::new("k3_young", "k3 absorbs the cross term", DISCRETE_TOL),
        &samples,
        |s| {
            let u = v1(s);
            let e = l2e.eval(u);
            Some((phi2.eval(k3.eval(u) * e) * e, c * l1r.eval(u)))
        },
    ));

    // (name, anchor, field, rhs(sample, V₁, N₁, weight)) where the weight is
    // p(k+1) on jumps and q(t) on flows.
    type Rhs<'a> = Box<dyn Fn(&Sample, f64, f64, f64) -> f64 + Sync + 'a>;
    let stages: Vec<(&str, &str, &ScalarField, Rhs)> = vec![
        (
            "v5",
            "decrease of the Matrosov combination V5",
            &v6.v5,
            Box::new(|_, u, n, w| -w * l1.eval(u) + l2.eval(u) * phi2.eval(n)),
        ),
        (
            "v6",
            "uniform decrease of the strictified V6",
            &v6.v6,
            Box::new(|_, u, n, _| -a * l1r.eval(u) + l2e.eval(u) * phi2.eval(n)),
        ),
        (
            "v7",
            "decrease of V7 after the k3 scaling",
            &v8.v7,
            Box::new(|_, u, n, _| -c * k3.eval(u) * l1r.eval(u) + n * phi3.eval(u)),
        ),
        (
            "v8",
            "decrease of V8 after the k5 correction",
            &v8.v8,
            Box::new(|_, u, _, _| -c * k3.eval(u) * l1r.eval(u)),
        ),
        (
            "v8_strict",
            "strict decrease of V8 by alpha3",
            &v8.v8,
            Box::new(|s, _, _, _| -v8.alpha3.eval(norm(&s.x))),
        ),
    ];

    let sub = |m: Mode, report: CertificationReport| SubCertificate {
        mode: m,
        k3: k34.k3.grid().clone(),
        k4: k34.k4_grid.clone(),
        k5: k5.k5_grid.clone(),
        report,
    };
    let mut certificates = Vec::new();
    if mode.has_jumps() {
        let p = data.p.as_ref().expect("checked");
        let f = data.jump.as_ref().expect("checked");
        let mut part = CertificationReport::new();
        for (name, anchor, field, rhs) in &stages {
            let check = Check::new(
                format!("{name}_jump"),
                format!("{anchor} along jumps"),
                DISCRETE_TOL,
            );
            part.push(check_inequality(&check, &samples, |s| {
                if !data.in_d(&s.x) {
                    return None;
                }
                let y = f.apply(&s.x, s.k);
                let w = p.p(s.k + 1).unwrap_or(f64::NAN);
                Some((jump_diff(field, &y, s), rhs(s, v1(s), n1(s), w)))
            }));
        }
        certificates.push(sub(Mode::Discrete, part));
    }
    if mode.has_flows() {
        let q = data.q.as_ref().expect("checked");
        let g = data.flow.as_ref().expect("checked");
        let mut part = CertificationReport::new();
        for (name, anchor, field, rhs) in &stages {
            let check = Check::new(
                format!("{name}_flow"),
                format!("{anchor} along flows"),
                CONTINUOUS_TOL,
            );
            part.push(check_inequality(&check, &samples, |s| {
                if !data.in_c(&s.x) {
                    return None;
                }
                Some((
                    dv_along_flow(field, g, &s.x, s.t, s.k),
                    rhs(s, v1(s), n1(s), q.q(s.t)),
                ))
            }));
        }
        certificates.push(sub(Mode::Continuous, part));
    }
    for c in &certificates {
        rep.merge(c.report.clone());
    }
    Ok((rep, certificates))
}
