//! Argument parsing and dispatch of the `strictlyap` binary.

use std::ffi::OsString;
use std::path::PathBuf;

use crate::commands::{self, Command};
use crate::config::ExperimentConfig;
use crate::error::{exit, CliError};
use anyhow::Context;
use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "strictlyap",
    version,
    about = "Strict Lyapunov function constructions and certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    global: Global,
}

#[derive(Debug, Args)]
struct Global {
    /// Output directory for report.json, gains/ and arcs/.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Seed for initial states; overrides the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Tolerance of every certified inequality; overrides the config.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Build the strict Lyapunov function and tabulate its gains.
    Strictify(ConfigArg),
    /// Sample the decay inequalities of the construction.
    Certify(ConfigArg),
    /// Simulate hybrid arcs from seeded initial states.
    Simulate(ConfigArg),
    /// The example gallery.
    Examples {
        #[command(subcommand)]
        action: ExamplesCmd,
    },
}

#[derive(Debug, Args)]
struct ConfigArg {
    #[arg(long)]
    config: PathBuf,
}

#[derive(Debug, Subcommand)]
enum ExamplesCmd {
    /// List the gallery.
    List,
    /// Simulate, strictify and certify one example.
    Run {
        id: String,
        /// Config overriding the example defaults; its example id must match.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn load_config(
    cmd: &Cmd,
    global: &Global,
) -> Result<Option<(Command, ExperimentConfig)>, CliError> {
    let (command, mut cfg) = match cmd {
        Cmd::Strictify(c) => (Command::Strictify, ExperimentConfig::load(&c.config)?),
        Cmd::Certify(c) => (Command::Certify, ExperimentConfig::load(&c.config)?),
        Cmd::Simulate(c) => (Command::Simulate, ExperimentConfig::load(&c.config)?),
        Cmd::Examples {
            action: ExamplesCmd::List,
        } => return Ok(None),
        Cmd::Examples {
            action: ExamplesCmd::Run { id, config },
        } => {
            let cfg = match config {
                Some(p) => ExperimentConfig::load(p)?,
                None => ExperimentConfig::for_example(id),
            };
            if &cfg.example != id {
                return Err(CliError::Config(format!(
                    "config is for {:?}, not {id:?}",
                    cfg.example
                )));
            }
            (Command::Run, cfg)
        }
    };
    if global.seed.is_some() {
        cfg.seed = global.seed;
    }
    if global.tol.is_some() {
        cfg.tol = global.tol;
    }
    Ok(Some((command, cfg)))
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.global.jobs {
        Some(0) => {
            eprintln!("error: --jobs must be positive");
            Ok(exit::CONFIG)
        }
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .context("configuring the worker pool")?;
            Ok(pool.install(|| dispatch(&cli)))
        }
        None => Ok(dispatch(&cli)),
    }
}

fn dispatch(cli: &Cli) -> i32 {
    let loaded = load_config(&cli.command, &cli.global).and_then(|c| match c {
        Some((cmd, cfg)) => cfg.resolve().map(|s| Some((cmd, s))),
        None => Ok(None),
    });
    let (cmd, settings) = match loaded {
        Ok(Some(x)) => x,
        Ok(None) => {
            print!("{}", commands::list_examples());
            return exit::PASS;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    match commands::execute(cmd, &settings, &cli.global.out) {
        Ok(report) => {
            println!("{}", commands::summary(&report));
            println!("report: {}", cli.global.out.join("report.json").display());
            report.exit_code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                exit::CONFIG
            } else {
                exit::PASS
            };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit::IO
        }
    }
}
