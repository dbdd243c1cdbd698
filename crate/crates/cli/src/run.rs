use std::path::{Path, PathBuf};

use serde::Serialize;

use qcollide::collision::run_trajectory;
use qcollide::entropy::{entropy_identity_check, ledger_series};
use qcollide::thermo::{conductance_sweep, phase_sweep, simulate_steady, steady_state_exact, Reservoirs};

use crate::config::{ExperimentConfig, MethodName, Mode};
use crate::error::CliError;
use crate::output::{ensure_dir, write_with_manifest, Cell, Table};

pub const DEFAULT_OUT_DIR: &str = "qcollide-out";

#[derive(Serialize)]
struct Manifest<'a> {
    generator: &'static str,
    version: &'static str,
    output: &'a str,
    config: &'a ExperimentConfig,
}

/// Runs the configured mode and returns the CSV files written.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>, CliError> {
    let dir = cfg.output.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
    let (name, table) = match cfg.mode {
        Mode::Trajectory => ("trajectory.csv", trajectory_table(cfg)?),
        Mode::Steady => ("steady.csv", steady_table(cfg)?),
        Mode::PhaseSweep => ("phase_sweep.csv", phase_table(cfg)?),
        Mode::Conductance => ("conductance.csv", conductance_table(cfg)?),
        Mode::Entropy => ("entropy.csv", entropy_table(cfg)?),
    };
    ensure_dir(&dir)?;
    let path = dir.join(name);
    write_mode(&path, &table, cfg)?;
    Ok(vec![path])
}

fn write_mode(path: &Path, table: &Table, cfg: &ExperimentConfig) -> Result<(), CliError> {
    let output = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let manifest = Manifest {
        generator: "qcollide",
        version: env!("CARGO_PKG_VERSION"),
        output: &output,
        config: cfg,
    };
    write_with_manifest(path, table, &manifest)
}

pub fn trajectory_table(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let traj = run_trajectory(&cfg.collision_config()?, cfg.collisions)?;
    let mut t = Table::new(&["n", "J_h", "J_c", "cumulative_Q_h", "cumulative_Q_c"]);
    let (mut qh, mut qc) = (0.0, 0.0);
    for r in &traj {
        qh += r.heat_hot;
        qc += r.heat_cold;
        t.push(vec![r.step.into(), r.heat_hot.into(), r.heat_cold.into(), qh.into(), qc.into()]);
    }
    Ok(t)
}

fn steady_table(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let cc = cfg.collision_config()?;
    Ok(match cfg.steady.method {
        MethodName::Simulate => {
            let r = simulate_steady(&cc, &cfg.steady.options())?;
            let mut t = Table::new(&["J_h", "J_c", "converged_at"]);
            t.push(vec![r.steady_current_hot.into(), r.steady_current_cold.into(), r.converged_at.into()]);
            t
        }
        MethodName::FixedPoint => {
            let s = steady_state_exact(&cc)?;
            let mut t = Table::new(&["J_h", "J_c"]);
            t.push(vec![s.current_hot.into(), s.current_cold.into()]);
            t
        }
    })
}

/// A `p` grid needs equal coherence weights on both sides.
fn p_values(cfg: &ExperimentConfig) -> Result<Vec<f64>, CliError> {
    if cfg.grids.p.is_empty() {
        return Ok(vec![cfg.hot.p]);
    }
    if cfg.hot.p != cfg.cold.p {
        return Err(CliError::Validation(
            "grids.p: sweeping p sets both reservoirs, so hot.p and cold.p must not differ".into(),
        ));
    }
    Ok(cfg.grids.p.clone())
}

fn phase_table(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let base = cfg.collision_config()?;
    let method = cfg.steady.method();
    let mut t = Table::new(&["p", "dphi", "J_h", "J_c"]);
    for p in p_values(cfg)? {
        let template = if cfg.grids.p.is_empty() { base.clone() } else { base.with_coherence(p)? };
        for pt in phase_sweep(&template, &cfg.grids.dphi, &method, cfg.workers)? {
            t.push(vec![p.into(), pt.dphi.into(), pt.current_hot.into(), pt.current_cold.into()]);
        }
    }
    Ok(t)
}

fn conductance_table(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    if cfg.omega != 1.0 {
        return Err(CliError::Validation("omega: conductance mode works in units with omega = 1".into()));
    }
    if cfg.hot.p != cfg.cold.p {
        return Err(CliError::Validation("hot.p: conductance mode needs equal coherence weights".into()));
    }
    let dphis = if cfg.grids.dphi.is_empty() {
        vec![(cfg.hot.phase - cfg.cold.phase).rem_euclid(std::f64::consts::TAU)]
    } else {
        cfg.grids.dphi.clone()
    };
    let method = cfg.steady.method();
    let mut t = Table::new(&["p", "dphi", "T", "kappa", "intercept_c", "residual_rms"]);
    for p in p_values(cfg)? {
        for &dphi in &dphis {
            let reservoirs = if p == 0.0 { Reservoirs::Thermal } else { Reservoirs::Coherent { p, dphi } };
            let pts = conductance_sweep(
                &cfg.grids.temperature,
                reservoirs,
                cfg.coupling()?,
                &cfg.grids.delta_t,
                &method,
                cfg.workers,
            )?;
            for pt in pts {
                t.push(vec![
                    p.into(),
                    dphi.into(),
                    pt.temperature.into(),
                    pt.fit.conductance().into(),
                    pt.fit.intercept_c.into(),
                    pt.fit.residual_rms.into(),
                ]);
            }
        }
    }
    Ok(t)
}

fn entropy_table(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let cc = cfg.collision_config()?;
    let mut t = Table::new(&[
        "n",
        "dS_system",
        "dS_production",
        "dS_flow_hot",
        "dS_flow_cold",
        "dS_flow_total",
        "Q_h",
        "Q_c",
        "decomposition_residual",
        "support_violated",
    ]);
    for l in ledger_series(&cc, cfg.entropy.collisions, cfg.entropy.joint_cap)? {
        let id = entropy_identity_check(&l);
        let row: Vec<Cell> = vec![
            l.n.into(),
            l.ds_system.into(),
            l.ds_production.into(),
            l.ds_flow_hot.into(),
            l.ds_flow_cold.into(),
            l.ds_flow_total.into(),
            l.heat_hot.into(),
            l.heat_cold.into(),
            id.decomposition_residual.into(),
            usize::from(l.support_violated).into(),
        ];
        t.push(row);
    }
    Ok(t)
}
