use std::fs;
use std::num::NonZeroUsize;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use toml::{Table, Value};

use crate::config::{parse_override, parse_table, resolve, set_key, MethodName, Mode};
use crate::error::CliError;
use crate::presets::{run_preset, Preset};
use crate::run::run_experiment;
use crate::selfcheck::selfcheck;

/// Upper bound on worker threads, for shared CI machines.
pub const MAX_WORKERS_ENV: &str = "QCOLLIDE_MAX_WORKERS";

#[derive(Debug, Parser)]
#[command(name = "qcollide", version, about = "Heat transport through a collision model with coherent reservoirs")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Experiment file (TOML).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Output directory.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Worker threads for sweeps; 0 uses every core.
    #[arg(long, global = true, value_name = "N")]
    pub workers: Option<usize>,

    /// Steady-state tolerance on successive currents.
    #[arg(long, global = true, value_name = "X")]
    pub tol: Option<f64>,

    /// Steady-state averaging window.
    #[arg(long, global = true, value_name = "N")]
    pub window: Option<usize>,

    /// Collision cap for steady-state detection.
    #[arg(long = "max-steps", global = true, value_name = "N")]
    pub max_steps: Option<usize>,

    /// Largest collision count for exact joint-state runs (5 opts in to ~1 GiB).
    #[arg(long = "joint-cap", global = true, value_name = "N")]
    pub joint_cap: Option<usize>,

    /// Override any configuration key, e.g. `--set hot.temperature=3`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the mode named in the configuration.
    Run,
    /// Steady-state currents for one parameter set.
    Steady,
    /// Steady currents over `grids.dphi` (and `grids.p` if given).
    SweepPhase,
    /// Linear-response conductance over `grids.temperature`.
    Conductance,
    /// Exact entropy ledger for a short run.
    Entropy,
    /// Regenerate the data behind a figure.
    Preset {
        #[arg(value_enum)]
        name: Preset,
    },
    /// Compare numerical routes against closed forms.
    Selfcheck,
}

impl Command {
    fn mode(&self) -> Option<Mode> {
        match self {
            Command::Steady => Some(Mode::Steady),
            Command::SweepPhase => Some(Mode::PhaseSweep),
            Command::Conductance => Some(Mode::Conductance),
            Command::Entropy => Some(Mode::Entropy),
            _ => None,
        }
    }
}

/// Config file, then `--set` overrides, then dedicated flags.
pub fn merged_table(g: &GlobalArgs) -> Result<Table, CliError> {
    let mut table = match &g.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            parse_table(&text, &path.display().to_string())?
        }
        None => Table::new(),
    };
    for s in &g.set {
        let (k, v) = parse_override(s)?;
        set_key(&mut table, &k, v)?;
    }
    let int = |n: usize| Value::Integer(n as i64);
    let flags = [
        ("output", g.out.as_ref().map(|p| Value::String(p.display().to_string()))),
        ("workers", g.workers.map(int)),
        ("steady.tol", g.tol.map(Value::Float)),
        ("steady.window", g.window.map(int)),
        ("steady.max_steps", g.max_steps.map(int)),
        ("entropy.joint_cap", g.joint_cap.map(int)),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            set_key(&mut table, k, v)?;
        }
    }
    Ok(table)
}

/// Requested workers, with 0 meaning all cores, capped by the environment.
pub fn effective_workers(requested: usize, env_cap: Option<&str>) -> Result<usize, CliError> {
    let cap = env_cap
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| CliError::Validation(format!("{MAX_WORKERS_ENV}: expected a positive integer, got {s:?}")))
        })
        .transpose()?;
    let Some(cap) = cap else {
        return Ok(requested);
    };
    let wanted = if requested == 0 {
        std::thread::available_parallelism().map_or(1, NonZeroUsize::get)
    } else {
        requested
    };
    Ok(wanted.min(cap))
}

fn report(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let env_cap = std::env::var(MAX_WORKERS_ENV).ok();
    match &cli.command {
        Command::Selfcheck => selfcheck(),
        Command::Preset { name } => {
            let mut table = merged_table(&cli.global)?;
            // Presets fix the physics; only run settings come from the user.
            let steady = table.get("steady").and_then(Value::as_table);
            if steady.and_then(|s| s.get("method")).is_none() {
                let m = match name.default_method() {
                    MethodName::Simulate => "simulate",
                    MethodName::FixedPoint => "fixed-point",
                };
                set_key(&mut table, "steady.method", Value::String(m.into()))?;
            }
            table.insert("mode".into(), Value::String("steady".into()));
            let cfg = resolve(table)?;
            let mut settings = cfg.settings();
            settings.workers = effective_workers(settings.workers, env_cap.as_deref())?;
            let dir = cfg.output.clone().unwrap_or_else(|| PathBuf::from(name.name()));
            report(&run_preset(*name, &settings, &dir)?);
            Ok(())
        }
        cmd => {
            let mut table = merged_table(&cli.global)?;
            if let Some(mode) = cmd.mode() {
                table.insert("mode".into(), Value::String(mode.name().into()));
            }
            let mut cfg = resolve(table)?;
            cfg.workers = effective_workers(cfg.workers, env_cap.as_deref())?;
            report(&run_experiment(&cfg)?);
            Ok(())
        }
    }
}
