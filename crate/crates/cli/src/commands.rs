//! The `strictify`, `certify`, `simulate` and `examples` commands.

use std::fs;
use std::io::BufWriter;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use strictlyap::systems::{simulate_hybrid, ArcStatus, HybridArc};

use crate::config::{Settings, SCHEMA_VERSION};
use crate::error::CliError;
use crate::gallery;
use crate::report::{
    ArcRecord, Constant, ConstructionRecord, GainRecord, Outcome, RunReport, SimulationRecord,
};
use crate::runner::Built;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Strictify,
    Certify,
    Simulate,
    /// `examples run`: simulate, strictify, certify.
    Run,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Strictify => "strictify",
            Self::Certify => "certify",
            Self::Simulate => "simulate",
            Self::Run => "examples run",
        }
    }
}

/// Runs `cmd` and writes `report.json`, `gains/` and `arcs/` under `out`.
/// Failures after the config was accepted are recorded in the report.
pub fn execute(cmd: Command, settings: &Settings, out: &Path) -> Result<RunReport, CliError> {
    fs::create_dir_all(out)?;
    let mut report = RunReport {
        schema_version: SCHEMA_VERSION,
        command: cmd.name().to_string(),
        example: settings.example.id.to_string(),
        params: settings.params.clone(),
        seed: settings.seed,
        outcome: Outcome::Pass,
        exit_code: 0,
        construction: None,
        simulation: None,
        certification: None,
        message: None,
    };
    if let Err(e) = run_steps(cmd, settings, out, &mut report) {
        report.finish(Outcome::of_error(&e), Some(e.to_string()));
    } else if report.certification.as_ref().is_some_and(|c| !c.pass) {
        let failed: Vec<_> = report
            .certification
            .iter()
            .flat_map(|c| c.failures())
            .map(|r| r.name.clone())
            .collect();
        report.finish(
            Outcome::CertificationFailure,
            Some(format!("failed: {}", failed.join(", "))),
        );
    }
    fs::write(out.join("report.json"), report.to_json())?;
    Ok(report)
}

fn run_steps(
    cmd: Command,
    settings: &Settings,
    out: &Path,
    report: &mut RunReport,
) -> Result<(), CliError> {
    let arcs = if matches!(cmd, Command::Simulate | Command::Run) {
        let arcs = simulate(settings, out, report)?;
        if cmd == Command::Simulate {
            return Ok(());
        }
        arcs
    } else {
        Vec::new()
    };
    let built = Built::new(settings)?;
    if matches!(cmd, Command::Strictify | Command::Run) {
        report.construction = Some(write_construction(&built, settings, out)?);
    }
    if matches!(cmd, Command::Certify | Command::Run) {
        let mut cert = built.certify(settings)?;
        cert.merge(built.check_arcs(&arcs)?);
        report.certification = Some(cert);
    }
    Ok(())
}

fn write_construction(
    built: &Built,
    settings: &Settings,
    out: &Path,
) -> Result<ConstructionRecord, CliError> {
    let dir = out.join("gains");
    fs::create_dir_all(&dir)?;
    let mut gains = Vec::new();
    for (name, g) in built.gain_tables(settings)? {
        let file = format!("{name}.csv");
        g.write_csv(BufWriter::new(fs::File::create(dir.join(&file))?))?;
        gains.push(GainRecord {
            name,
            file: format!("gains/{file}"),
            nodes: g.len(),
        });
    }
    Ok(ConstructionRecord {
        kind: built.kind().to_string(),
        constants: built
            .constants()
            .into_iter()
            .map(|(name, value)| Constant { name, value })
            .collect(),
        gains,
    })
}

/// Initial states drawn uniformly from `[−radius, radius]ⁿ` by a seeded ChaCha8 stream.
pub fn initial_states(settings: &Settings) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    let (dim, r) = (settings.example.dim(), settings.radius);
    (0..settings.initial_states)
        .map(|_| (0..dim).map(|_| rng.gen_range(-r..=r)).collect())
        .collect()
}

fn simulate(
    settings: &Settings,
    out: &Path,
    report: &mut RunReport,
) -> Result<Vec<HybridArc>, CliError> {
    let sys = settings.example.hybrid_system(&settings.params)?;
    let x0s = initial_states(settings);
    let arcs = x0s
        .par_iter()
        .map(|x0| simulate_hybrid(&sys, x0, 0.0, &settings.policy, &settings.budget))
        .collect::<Result<Vec<_>, _>>()?;

    let dir = out.join("arcs");
    fs::create_dir_all(&dir)?;
    let mut records = Vec::new();
    for (i, (arc, x0)) in arcs.iter().zip(&x0s).enumerate() {
        let file = format!("arc_{i:03}.csv");
        arc.write_csv(BufWriter::new(fs::File::create(dir.join(&file))?))?;
        let status = arc.status_file();
        let status_json =
            serde_json::to_string_pretty(&status).map_err(|e| CliError::Io(e.to_string()))?;
        fs::write(
            dir.join(format!("arc_{i:03}.status.json")),
            status_json + "\n",
        )?;
        records.push(ArcRecord {
            file: format!("arcs/{file}"),
            x0: x0.clone(),
            status,
        });
    }
    report.simulation = Some(SimulationRecord { arcs: records });
    if let Some(i) = arcs.iter().position(|a| a.status == ArcStatus::Blowup) {
        return Err(CliError::Guard(format!(
            "arc {i} produced a non-finite state"
        )));
    }
    Ok(arcs)
}

/// One line per listed example: id and summary.
pub fn list_examples() -> String {
    gallery::listed()
        .map(|e| format!("{:<28}{}\n", e.id, e.summary))
        .collect()
}

/// Outcome line for the terminal.
pub fn summary(report: &RunReport) -> String {
    let mut s = format!(
        "{} {}: {:?}",
        report.command, report.example, report.outcome
    );
    if let Some(c) = &report.certification {
        let failed = c.failures().count();
        s += &format!(" ({} checks, {failed} failed)", c.records.len());
    }
    if let Some(m) = &report.message {
        s += &format!("\n{m}");
    }
    s
}
