use crate::certify::{check_inequality, dv_along_flow, norm, CertificationReport, Check, GridSpec};

use super::{MatrosovData, MatrosovError, Mode};

/// Tolerance of the hypothesis checks (relative to `max(1, |rhs|)`).
pub const ASSUMPTION_TOL: f64 = 1e-7;

fn check(name: &str, anchor: &str) -> Check {
    Check::new(name, anchor, ASSUMPTION_TOL).relative()
}

/// Samples the Matrosov hypotheses and the declared envelopes on `grid`.
///
/// Jump inequalities are sampled on the jump set and flow inequalities on the
/// flow set. A missing signal or map for the requested mode is a
/// configuration error.
pub fn check_assumption(
    data: &MatrosovData,
    mode: Mode,
    grid: &GridSpec,
) -> Result<CertificationReport, MatrosovError> {
    data.require(mode)?;
    let samples = grid.samples()?;
    let mut rep = CertificationReport::new();

    rep.push(check_inequality(
        &check("envelope_v1_lower", "lower bound of V1"),
        &samples,
        |s| Some((data.alpha1.eval(norm(&s.x)), data.v1.eval(&s.x, s.t, s.k))),
    ));
    rep.push(check_inequality(
        &check("envelope_v1_upper", "upper bound of V1"),
        &samples,
        |s| Some((data.v1.eval(&s.x, s.t, s.k), data.alpha2.eval(norm(&s.x)))),
    ));
    rep.push(check_inequality(
        &check("envelope_v2", "bound on |V2|"),
        &samples,
        |s| {
            Some((
                data.v2.eval(&s.x, s.t, s.k).abs(),
                data.sigma2.eval(norm(&s.x)),
            ))
        },
    ));
    rep.push(check_inequality(
        &check("envelope_v1_plus_v2", "bound on |V1 + V2|"),
        &samples,
        |s| {
            let sum = data.v1.eval(&s.x, s.t, s.k) + data.v2.eval(&s.x, s.t, s.k);
            Some((sum.abs(), data.sigma3.eval(norm(&s.x))))
        },
    ));
    rep.push(check_inequality(
        &check("envelope_n1", "bound on N1"),
        &samples,
        |s| Some((data.n1.eval(&s.x, s.t, s.k), data.nu1.eval(norm(&s.x)))),
    ));
    rep.push(check_inequality(
        &check("envelope_w", "radial minorant of W"),
        &samples,
        |s| Some((data.w_radial.eval(norm(&s.x)), data.w.eval(&s.x, s.t, s.k))),
    ));

    if mode.has_jumps() {
        let p = data.p.as_ref().expect("checked");
        let f = data.jump.as_ref().expect("checked");
        let mu = data.mu_f.as_ref().expect("checked");
        let jump = |s: &crate::certify::Sample| data.in_d(&s.x).then(|| f.apply(&s.x, s.k));
        rep.push(check_inequality(
            &check("envelope_jump_growth", "growth envelope of the jump map"),
            &samples,
            |s| {
                let y = jump(s)?;
                Some((norm(&y), mu.eval(norm(&s.x))))
            },
        ));
        rep.push(check_inequality(
            &check("assumption_v1_jump", "V1 decreases by N1 along jumps"),
            &samples,
            |s| {
                let y = jump(s)?;
                let d = data.v1.eval(&y, s.t, s.k + 1) - data.v1.eval(&s.x, s.t, s.k);
                Some((d, -data.n1.eval(&s.x, s.t, s.k)))
            },
        ));
        rep.push(check_inequality(
            &check(
                "assumption_v2_jump",
                "V2 decreases by N2 up to the N1 cross term along jumps",
            ),
            &samples,
            |s| {
                let y = jump(s)?;
                let d = data.v2.eval(&y, s.t, s.k + 1) - data.v2.eval(&s.x, s.t, s.k);
                let n1 = data.n1.eval(&s.x, s.t, s.k);
                let rhs =
                    -data.n2.eval(&s.x, s.t, s.k) + data.phi1.eval(norm(&s.x)) * data.phi2.eval(n1);
                Some((d, rhs))
            },
        ));
        rep.push(check_inequality(
            &check(
                "assumption_cover_jump",
                "N1 + N2 dominates p(k+1)W on the jump set",
            ),
            &samples,
            |s| {
                if !data.in_d(&s.x) {
                    return None;
                }
                let pk = p.p(s.k + 1).unwrap_or(f64::NAN);
                let n = data.n1.eval(&s.x, s.t, s.k) + data.n2.eval(&s.x, s.t, s.k);
                Some((pk * data.w.eval(&s.x, s.t, s.k), n))
            },
        ));
    }

    if mode.has_flows() {
        let q = data.q.as_ref().expect("checked");
        let g = data.flow.as_ref().expect("checked");
        rep.push(check_inequality(
            &check("assumption_v1_flow", "V1 decreases by N1 along flows"),
            &samples,
            |s| {
                if !data.in_c(&s.x) {
                    return None;
                }
                Some((
                    dv_along_flow(&data.v1, g, &s.x, s.t, s.k),
                    -data.n1.eval(&s.x, s.t, s.k),
                ))
            },
        ));
        rep.push(check_inequality(
            &check(
                "assumption_v2_flow",
                "V2 decreases by N2 up to the N1 cross term along flows",
            ),
            &samples,
            |s| {
                if !data.in_c(&s.x) {
                    return None;
                }
                let n1 = data.n1.eval(&s.x, s.t, s.k);
                let rhs =
                    -data.n2.eval(&s.x, s.t, s.k) + data.phi1.eval(norm(&s.x)) * data.phi2.eval(n1);
                Some((dv_along_flow(&data.v2, g, &s.x, s.t, s.k), rhs))
            },
        ));
        rep.push(check_inequality(
            &check(
                "assumption_cover_flow",
                "N1 + N2 dominates q(t)W on the flow set",
            ),
            &samples,
            |s| {
                if !data.in_c(&s.x) {
                    return None;
                }
                let n = data.n1.eval(&s.x, s.t, s.k) + data.n2.eval(&s.x, s.t, s.k);
                Some((q.q(s.t) * data.w.eval(&s.x, s.t, s.k), n))
            },
        ));
    }
    Ok(rep)
}
