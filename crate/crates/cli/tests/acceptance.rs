//! Acceptance checks: one line per criterion, nonzero exit if any fails.

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use strictlyap::certify::{check_inequality, dv_finite_difference, Check, GridSpec};
use strictlyap::funcspace::{
    build_gamma, build_mu_kappa_chi, log_nodes, GridFunction, RightExtension, ScalarField,
};
use strictlyap::matrosov::{check_assumption, instances, run_pipeline, Mode, PipelineOptions};
use strictlyap::pe::{
    check_r_bound, ContinuousPESignal, ContinuousSource, DiscretePESignal, DiscreteSource,
};
use strictlyap::systems::{
    integrate_flow, simulate_hybrid, Budget, ContinuousSystem, DiscreteSystem, HybridArc,
    HybridSystem, Policy,
};
use strictlyap_cli::commands::initial_states;
use strictlyap_cli::config::{ExperimentConfig, Settings};
use strictlyap_cli::gallery;
use strictlyap_cli::report::RunReport;
use strictlyap_cli::runner::Built;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Option<u64>, Box<dyn Fn() -> Outcome>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn settings(id: &str, grid: Option<GridSpec>) -> Settings {
    let mut cfg = ExperimentConfig::for_example(id);
    cfg.grid = grid;
    cfg.resolve().expect("catalogued example resolves")
}

/// `Σ_{s=k−l}^{k} Σ_{j=s}^{k} p(j)`.
fn s_oracle(p: impl Fn(i64) -> f64, l: i64, k: i64) -> f64 {
    (k - l..=k).map(|s| (s..=k).map(&p).sum::<f64>()).sum()
}

/// Twenty random PE tables with `l = 1, …, 5`.
fn random_sequences() -> Vec<(Vec<f64>, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    (0..20)
        .map(|i| {
            let l = 1 + i % 5;
            let values = (0..260)
                .map(|j| {
                    if j % (l + 1) == 0 {
                        rng.gen_range(0.5..=1.0)
                    } else {
                        rng.gen_range(0.0..=1.0)
                    }
                })
                .collect();
            (values, l)
        })
        .collect()
}

fn table(values: &[f64], l: usize) -> DiscretePESignal {
    let p_bar = values.iter().copied().fold(0.0, f64::max);
    let source = DiscreteSource::Table {
        start: 0,
        values: values.to_vec(),
    };
    DiscretePESignal::new(source, l, 0.5, p_bar).expect("valid table")
}

fn telescoping() -> Outcome {
    let mut worst = 0.0f64;
    for (values, l) in random_sequences() {
        let p = table(&values, l);
        let l = l as i64;
        for k in l..=200 {
            let lhs = p.sum_s(k + 1).map_err(|e| e.to_string())?
                - p.sum_s(k).map_err(|e| e.to_string())?;
            let window: f64 = (k - l..=k).map(|j| values[j as usize]).sum();
            let rhs = -window + (l as f64 + 1.0) * values[(k + 1) as usize];
            worst = worst.max((lhs - rhs).abs());
        }
    }
    ensure(worst <= 1e-12, || format!("max deviation {worst:e}"))?;
    Ok(format!("20 sequences, max deviation {worst:e}"))
}

fn pe_bounds() -> Outcome {
    for (values, l) in random_sequences() {
        let p = table(&values, l);
        let bound = p.p_bar * ((l + 1) * (l + 1)) as f64;
        for k in l as i64..=200 {
            let s = p.sum_s(k).map_err(|e| e.to_string())?;
            let oracle = s_oracle(|j| values[j as usize], l as i64, k);
            ensure((s - oracle).abs() <= 1e-12, || {
                format!("S({k}) = {s} but double sum gives {oracle}")
            })?;
            ensure(s <= bound + 1e-12, || {
                format!("S({k}) = {s} exceeds {bound}")
            })?;
        }
    }
    let constant = ContinuousPESignal::new(ContinuousSource::Constant(1.0), 2.0, 2.0, 1.0)
        .map_err(|e| e.to_string())?;
    for q in [constant, ContinuousPESignal::sin2()] {
        let v = check_r_bound(&q, 4.0 * PI, q.default_step()).map_err(|e| e.to_string())?;
        ensure(v.is_pass(), || {
            format!("R bound fails for {:?}: {v:?}", q.source)
        })?;
    }
    let q = ContinuousPESignal::sin2();
    let r = q.int_r(PI, q.default_step()).map_err(|e| e.to_string())?;
    let err = (r - PI * PI / 4.0).abs();
    ensure(err <= 1e-6, || format!("R(pi) = {r}, error {err:e}"))?;
    Ok(format!("S and R bounds hold; R(pi) error {err:e}"))
}

fn kappa_gamma() -> Outcome {
    let theta = GridFunction::from_fn(
        &log_nodes(1e3, 1024),
        RightExtension::LinearContinuation,
        |s| s,
    )
    .map_err(|e| e.to_string())?;
    let m = build_mu_kappa_chi(&theta).map_err(|e| e.to_string())?;
    let gamma = build_gamma(&m.kappa, &m.chi, &log_nodes(1e2, 256)).map_err(|e| e.to_string())?;
    let (k05, k1, g) = (m.kappa.eval(0.5), m.kappa.eval(1.0), gamma.eval(10.0 / 3.0));
    ensure((k05 - 4.0 / 3.0).abs() <= 1e-6, || {
        format!("kappa(0.5) = {k05}")
    })?;
    ensure((k1 - 10.0 / 3.0).abs() <= 1e-6, || {
        format!("kappa(1) = {k1}")
    })?;
    ensure((g - 2.0).abs() <= 1e-5, || format!("gamma(10/3) = {g}"))?;
    let mut worst = 0.0f64;
    for i in 0..50 {
        let r = 10f64.powf(-3.0 + 4.0 * i as f64 / 49.0);
        worst = worst.max((gamma.eval(m.kappa.eval(r)) - m.chi.eval(r / 2.0)).abs());
    }
    ensure(worst <= 1e-6, || {
        format!("gamma(kappa(r)) - chi(r/2) reaches {worst:e}")
    })?;
    Ok(format!("closed forms hold; identity deviation {worst:e}"))
}

fn frozen_decay() -> Outcome {
    let s = settings("frozen-halving", None);
    let built = Built::new(&s).map_err(|e| e.to_string())?;
    let Built::Frozen { s: st, sys, .. } = &built else {
        return Err("frozen-halving did not build a discrete strictification".into());
    };
    // Independent U = x² + (3/4)x²·S(k)/8 with S the double sum of k mod 2.
    let p = |j: i64| j.rem_euclid(2) as f64;
    let u = |x: f64, k: i64| x * x + 0.75 * x * x * s_oracle(p, 1, k) / 8.0;
    let f = |x: f64, k: i64| (1.0 - p(k + 1)) * x + p(k + 1) * x / 2.0;
    let mut worst = f64::NEG_INFINITY;
    let mut agree = 0.0f64;
    for i in 0..201 {
        let x = -10.0 + 0.1 * i as f64;
        for k in 0..=100 {
            let du = u(f(x, k), k + 1) - u(x, k);
            worst = worst.max(du + 0.125 * 0.75 * x * x);
            agree = agree.max((st.u.eval(&[x], 0.0, k) - u(x, k)).abs() / (1.0 + u(x, k)));
            let lib = st.u.eval(&sys.apply(&[x], k), 0.0, k + 1) - st.u.eval(&[x], 0.0, k);
            worst = worst.max(lib + 0.125 * 0.75 * x * x);
        }
    }
    ensure(worst <= 1e-9, || format!("decay margin {worst:e}"))?;
    ensure(agree <= 1e-12, || {
        format!("library U deviates from the oracle by {agree:e}")
    })?;
    let rep = built.certify(&s).map_err(|e| e.to_string())?;
    ensure(rep.pass, || "library certificate fails".into())?;
    let spot = u(f(1.0, 0), 1) - u(1.0, 0);
    let lib_spot = st.u.eval(&sys.apply(&[1.0], 0), 0.0, 1) - st.u.eval(&[1.0], 0.0, 0);
    ensure((lib_spot - spot).abs() <= 1e-12, || {
        format!("dU(1, 0) = {lib_spot}, oracle {spot}")
    })?;
    ensure((spot - (-0.796875)).abs() <= 1e-12, || {
        format!("oracle dU(1, 0) = {spot}")
    })?;
    Ok(format!(
        "worst margin {worst:e}; dU(1, k even) = {lib_spot} (double-sum S(0)=1, S(1)=2; the value -0.7734375 needs S(1)=3)"
    ))
}

fn continuous_strictification() -> Outcome {
    let grid = GridSpec::cube(1, 5.0, 101).with_time(0.0, 4.0 * PI, 129);
    let s = settings("sin2-flow", Some(grid.clone()));
    let built = Built::new(&s).map_err(|e| e.to_string())?;
    let Built::Flow { s: st, sys } = &built else {
        return Err("sin2-flow did not build a continuous strictification".into());
    };
    let v1pi = st.v_cts.eval(&[1.0], PI, 0);
    ensure((v1pi - (1.0 + PI / 4.0)).abs() <= 1e-5, || {
        format!("V_cts(1, pi) = {v1pi}")
    })?;
    let samples = grid.samples().map_err(|e| e.to_string())?;
    let rec = check_inequality(
        &Check::new("half_rate", "fd decay of V_cts", 1e-4),
        &samples,
        |p| {
            let g = sys.rhs(&p.x, p.t);
            let dv = dv_finite_difference(&st.v_cts, &g, &p.x, p.t, p.k);
            Some((dv, -0.5 * st.v_cts.eval(&p.x, p.t, p.k)))
        },
    );
    let true_rate = built.certify(&s).map_err(|e| e.to_string())?;
    let w = rec
        .witness
        .as_ref()
        .map(|w| format!(" at x = {:?}, t = {:.4}", w.x, w.t))
        .unwrap_or_default();
    ensure(rec.pass, || {
        format!(
            "DV_cts <= -0.5 V_cts violated by {:.4e}{w}; the attainable bound DV_cts <= -(eps/tau) V {}",
            rec.worst_margin,
            if true_rate.pass { "holds" } else { "also fails" }
        )
    })?;
    Ok(format!(
        "V_cts(1, pi) = {v1pi}; worst margin {:e}",
        rec.worst_margin
    ))
}

fn fitted_rate(v: &ScalarField, arc: &HybridArc) -> Option<f64> {
    let mut worst: Option<f64> = None;
    for seg in 0..arc.segments.len() {
        let pts: Vec<(f64, f64)> = arc
            .points
            .iter()
            .filter(|p| p.segment == seg)
            .map(|p| (p.t, v.eval(&p.x, p.t, p.k)))
            .filter(|&(_, val)| val > 1e-12)
            .collect();
        if pts.len() >= 3 {
            if let Ok(r) = strictlyap::certify::fit_exponential_rate(&pts) {
                worst = Some(worst.map_or(r, |w: f64| w.min(r)));
            }
        }
    }
    worst
}

fn hybrid_arcs() -> Outcome {
    let s = settings("hp-sin2", None);
    let sys = s
        .example
        .hybrid_system(&s.params)
        .map_err(|e| e.to_string())?;
    let built = Built::new(&s).map_err(|e| e.to_string())?;
    let x0s = initial_states(&s);
    ensure(x0s.len() == 20, || format!("{} initial states", x0s.len()))?;
    let arcs = x0s
        .iter()
        .map(|x0| simulate_hybrid(&sys, x0, 0.0, &s.policy, &s.budget))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    for a in &arcs {
        ensure(a.segments.len() == 10, || {
            format!("arc has {} segments", a.segments.len())
        })?;
    }
    let threshold = (0.5f64).min((8.0f64 / 7.0).ln()) - 0.05;
    let rep = built.check_arcs(&arcs).map_err(|e| e.to_string())?;
    ensure(rep.pass, || {
        let f: Vec<_> = rep
            .failures()
            .map(|r| format!("{} ({:e})", r.name, r.worst_margin))
            .collect();
        format!("arc checks fail: {}", f.join(", "))
    })?;
    let v = built
        .lyapunov()
        .expect("hybrid construction has a Lyapunov function");
    let mut strict = true;
    let mut min_fit = f64::INFINITY;
    for a in &arcs {
        for w in a.points.windows(2) {
            let (va, vb) = (
                v.eval(&w[0].x, w[0].t, w[0].k),
                v.eval(&w[1].x, w[1].t, w[1].k),
            );
            strict &= vb < va || (va == 0.0 && vb == 0.0);
        }
        if let Some(r) = fitted_rate(v, a) {
            min_fit = min_fit.min(r);
        }
    }
    ensure(strict, || {
        "V# is not strictly decreasing between samples".into()
    })?;
    ensure(min_fit >= threshold, || {
        format!("fitted flow rate {min_fit} below {threshold}")
    })?;
    Ok(format!(
        "20 arcs x 10 segments; min fitted flow rate {min_fit:.4} >= {threshold:.4}"
    ))
}

fn matrosov_discrete() -> Outcome {
    let grid = GridSpec::cube(1, 5.0, 201).with_index(0, 50);
    let data = instances::sstar_discrete();
    let res = run_pipeline(&data, Mode::Discrete, &grid, &PipelineOptions::default())
        .map_err(|e| e.to_string())?;
    ensure(res.assumption.pass, || {
        "check_assumption fails on S*".into()
    })?;
    for name in [
        "v5_jump",
        "v6_jump",
        "k3_young",
        "v7_jump",
        "v8_jump",
        "v8_strict_jump",
    ] {
        let r = res
            .report
            .get(name)
            .ok_or_else(|| format!("missing record {name}"))?;
        ensure(r.pass && r.tolerance <= 1e-6, || {
            format!("{name}: margin {:e}", r.worst_margin)
        })?;
    }
    ensure(res.report.pass, || "a decay record fails".into())?;
    let mut sabotaged = data.clone();
    let n1 = data.n1.clone();
    sabotaged.n1 =
        ScalarField::new(move |x, t, k| 0.5 * n1.eval(x, t, k)).with_dependence(false, true);
    let rep = check_assumption(&sabotaged, Mode::Discrete, &grid).map_err(|e| e.to_string())?;
    let failed: Vec<_> = rep.failures().collect();
    ensure(
        !rep.pass && failed.iter().all(|r| r.witness.is_some()),
        || "sabotaged N1 was not caught with a witness".into(),
    )?;
    let strict = res.report.get("v8_strict_jump").expect("present");
    Ok(format!(
        "all records pass (v8_strict margin {:e}); sabotage caught by {}",
        strict.worst_margin,
        failed
            .iter()
            .map(|r| r.name.as_str())
            .collect::<Vec<_>>()
            .join(", ")
    ))
}

fn matrosov_continuous() -> Outcome {
    let grid = GridSpec::cube(1, 5.0, 101).with_time(0.0, 4.0 * PI, 65);
    let data = instances::sstar_continuous();
    let res = run_pipeline(&data, Mode::Continuous, &grid, &PipelineOptions::default())
        .map_err(|e| e.to_string())?;
    ensure(res.assumption.pass, || "check_assumption fails".into())?;
    let r = res
        .report
        .get("v8_strict_flow")
        .ok_or("missing v8_strict_flow")?;
    ensure(r.pass && r.tolerance <= 1e-4, || {
        format!("DV8 + alpha3 reaches {:e}", r.worst_margin)
    })?;
    ensure(res.report.pass, || "an intermediate record fails".into())?;
    Ok(format!("v8_strict_flow margin {:e}", r.worst_margin))
}

fn same_bits(a: &GridFunction, b: &GridFunction) -> bool {
    let bits = |g: &GridFunction| {
        g.nodes()
            .iter()
            .chain(g.values())
            .map(|v| v.to_bits())
            .collect::<Vec<_>>()
    };
    bits(a) == bits(b)
}

fn matrosov_hybrid() -> Outcome {
    let grid = GridSpec::cube(2, 5.0, 21)
        .with_time(0.0, PI, 9)
        .with_index(0, 3);
    let data = instances::sstar_hybrid();
    let res = run_pipeline(&data, Mode::Hybrid, &grid, &PipelineOptions::default())
        .map_err(|e| e.to_string())?;
    ensure(res.assumption.pass, || "check_assumption fails".into())?;
    let [d, c] = res.certificates.as_slice() else {
        return Err(format!("{} sub-certificates", res.certificates.len()));
    };
    ensure(
        d.mode == Mode::Discrete && c.mode == Mode::Continuous,
        || "unexpected certificate modes".into(),
    )?;
    ensure(d.report.pass, || "jump certificate fails".into())?;
    ensure(c.report.pass, || "flow certificate fails".into())?;
    ensure(
        same_bits(&d.k3, &c.k3) && same_bits(&d.k4, &c.k4) && same_bits(&d.k5, &c.k5),
        || "k3/k4/k5 grids differ".into(),
    )?;
    Ok(format!(
        "both certificates pass; k3/k4/k5 identical ({}/{}/{} nodes)",
        d.k3.len(),
        d.k4.len(),
        d.k5.len()
    ))
}

fn simulator(bin: &Path, dir: &Path) -> Outcome {
    let g = ContinuousSystem::new(|x, _| x.iter().map(|v| -v).collect());
    let err = |h: f64| -> Result<f64, String> {
        let p = integrate_flow(&g, &[1.0], 0.0, 1.0, h).map_err(|e| e.to_string())?;
        Ok((p.last().1[0] - (-1.0f64).exp()).abs())
    };
    let ratio = err(0.1)? / err(0.05)?;
    ensure((12.0..=20.0).contains(&ratio), || {
        format!("RK4 error ratio {ratio}")
    })?;

    let flow = HybridSystem::new(
        1,
        |_| true,
        |_| false,
        g.clone(),
        DiscreteSystem::new(|x, _| x.to_vec()),
    );
    let budget = Budget {
        max_flow_time: 2.0,
        ..Budget::default()
    };
    let arc = simulate_hybrid(&flow, &[3.0], 0.0, &Policy::JumpPriority, &budget)
        .map_err(|e| e.to_string())?;
    let flow_err = arc
        .points
        .iter()
        .map(|p| (p.x[0] - 3.0 * (-p.t).exp()).abs())
        .fold(0.0, f64::max);
    ensure(flow_err <= 1e-9 && arc.segments.len() == 1, || {
        format!("pure flow error {flow_err:e}")
    })?;

    let jump = HybridSystem::new(
        1,
        |_| false,
        |_| true,
        g,
        DiscreteSystem::new(|x, _| x.iter().map(|v| v / 2.0).collect()),
    );
    let budget = Budget {
        max_jumps: 30,
        ..Budget::default()
    };
    let arc = simulate_hybrid(&jump, &[3.0], 0.0, &Policy::JumpPriority, &budget)
        .map_err(|e| e.to_string())?;
    let jump_err = arc
        .points
        .iter()
        .map(|p| (p.x[0] - 3.0 * 0.5f64.powi(p.k as i32)).abs())
        .fold(0.0, f64::max);
    ensure(jump_err <= 1e-9 && arc.jumps() == 30, || {
        format!("pure jump error {jump_err:e}")
    })?;

    let cfg = dir.join("zeno.json");
    std::fs::write(&cfg, r#"{"schema_version": 1, "example": "zeno-forced"}"#)
        .map_err(|e| e.to_string())?;
    let code = run(
        bin,
        &[
            "simulate",
            "--config",
            path(&cfg),
            "--out",
            path(&dir.join("zeno")),
        ],
    );
    ensure(code == 4, || format!("Zeno config exits {code}"))?;
    Ok(format!(
        "RK4 ratio {ratio:.2}; flow error {flow_err:e}; jump error {jump_err:e}; Zeno exit 4"
    ))
}

fn path(p: &Path) -> &str {
    p.to_str().expect("utf-8 temp path")
}

fn run(bin: &Path, args: &[&str]) -> i32 {
    Command::new(bin)
        .args(args)
        .output()
        .map(|o| o.status.code().unwrap_or(-1))
        .unwrap_or(-1)
}

fn cli_contract(bin: &Path, dir: &Path) -> Outcome {
    let ids: Vec<_> = gallery::listed().map(|e| e.id).collect();
    for id in &ids {
        let out = dir.join(format!("run_{id}"));
        let code = run(bin, &["examples", "run", id, "--out", path(&out)]);
        ensure(code == 0, || format!("examples run {id} exits {code}"))?;
        let text = std::fs::read_to_string(out.join("report.json")).map_err(|e| e.to_string())?;
        let report = RunReport::from_json(&text)
            .map_err(|e| format!("{id}: report does not validate: {e}"))?;
        ensure(report.to_json() == text, || {
            format!("{id}: report does not round-trip")
        })?;
    }
    let bad = dir.join("corrupt.json");
    std::fs::write(
        &bad,
        r#"{"schema_version": 1, "example": "frozen-halving", "grid": "#,
    )
    .map_err(|e| e.to_string())?;
    let code = run(
        bin,
        &[
            "certify",
            "--config",
            path(&bad),
            "--out",
            path(&dir.join("corrupt")),
        ],
    );
    ensure(code == 64, || format!("corrupted config exits {code}"))?;

    let sab = dir.join("sabotage.json");
    std::fs::write(
        &sab,
        r#"{"schema_version": 1, "example": "frozen-halving", "bound_scale": 10}"#,
    )
    .map_err(|e| e.to_string())?;
    let out = dir.join("sabotage");
    let code = run(
        bin,
        &["certify", "--config", path(&sab), "--out", path(&out)],
    );
    ensure(code == 3, || format!("sabotaged bound exits {code}"))?;
    let text = std::fs::read_to_string(out.join("report.json")).map_err(|e| e.to_string())?;
    let report = RunReport::from_json(&text).map_err(|e| e.to_string())?;
    let witnessed = report
        .certification
        .as_ref()
        .is_some_and(|c| c.failures().all(|r| r.witness.is_some()) && c.failures().count() > 0);
    ensure(witnessed, || "sabotaged report lacks a witness".into())?;

    let mut texts = Vec::new();
    for run_id in ["a", "b"] {
        let out = dir.join(format!("repeat_{run_id}"));
        let code = run(
            bin,
            &[
                "examples",
                "run",
                "hp-sin2",
                "--seed",
                "11",
                "--out",
                path(&out),
            ],
        );
        ensure(code == 0, || format!("repeat run exits {code}"))?;
        texts.push(std::fs::read(out.join("report.json")).map_err(|e| e.to_string())?);
    }
    ensure(texts[0] == texts[1], || {
        "reports differ across runs with the same seed".into()
    })?;
    Ok(format!(
        "{} examples exit 0; corrupt 64; sabotage 3; reports byte-identical",
        ids.len()
    ))
}

fn main() {
    let bin = Path::new(env!("CARGO_BIN_EXE_strictlyap")).to_path_buf();
    let tmp = tempfile::tempdir().expect("temp dir");
    let dir = tmp.path().to_path_buf();
    let b1 = bin.clone();
    let d1 = dir.clone();
    let criteria: Vec<Criterion> = vec![
        ("telescoping identity", Some(1), Box::new(telescoping)),
        ("S and R bounds", Some(5), Box::new(pe_bounds)),
        ("kappa/gamma construction", Some(1), Box::new(kappa_gamma)),
        ("frozen-halving decay", Some(5), Box::new(frozen_decay)),
        (
            "continuous strictification",
            Some(10),
            Box::new(continuous_strictification),
        ),
        ("hybrid arcs", Some(30), Box::new(hybrid_arcs)),
        ("Matrosov discrete", Some(60), Box::new(matrosov_discrete)),
        (
            "Matrosov continuous",
            Some(60),
            Box::new(matrosov_continuous),
        ),
        ("Matrosov hybrid", Some(120), Box::new(matrosov_hybrid)),
        ("simulator", None, Box::new(move || simulator(&b1, &d1))),
        (
            "CLI contract",
            None,
            Box::new(move || cli_contract(&bin, &dir)),
        ),
    ];
    let mut failed = Vec::new();
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut result = check();
        let elapsed = start.elapsed();
        if let (Ok(_), Some(s)) = (&result, limit) {
            if elapsed > Duration::from_secs(*s) {
                result = Err(format!("took {:.2} s, limit {s} s", elapsed.as_secs_f64()));
            }
        }
        let (verdict, detail) = match &result {
            Ok(d) => ("PASS", d.clone()),
            Err(d) => ("FAIL", d.clone()),
        };
        println!(
            "criterion {:>2} {verdict} [{:>6.2} s] {name}: {detail}",
            i + 1,
            elapsed.as_secs_f64()
        );
        if result.is_err() {
            failed.push(i + 1);
        }
    }
    drop(tmp);
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
