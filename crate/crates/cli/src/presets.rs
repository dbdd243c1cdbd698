//! Parameter sets behind the published figures.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Serialize;

use qcollide::collision::{run_trajectory, CollisionConfig, CouplingParams};
use qcollide::thermo::{
    conductance_sweep, current_surface, default_dt_grid, parallel_map, phase_sweep, simulate_steady,
    steady_state_exact, Reservoirs,
};

use crate::config::{MethodName, RunSettings, Steady};
use crate::error::CliError;
use crate::output::{ensure_dir, write_with_manifest, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
        }
    }

    /// Steady-state method used when none is configured.
    pub fn default_method(self) -> MethodName {
        match self {
            Preset::Fig2 | Preset::Fig3 => MethodName::Simulate,
            Preset::Fig4 | Preset::Fig5 => MethodName::FixedPoint,
        }
    }
}

pub const T_HOT: f64 = 2.0;
pub const T_COLD: f64 = 1.0;
pub const P_COHERENT: f64 = 0.8;
pub const GAMMA: f64 = PI / 32.0;
pub const DELTA: f64 = FRAC_PI_4;
pub const FIG2_COLLISIONS: usize = 1000;

pub fn fig2_phases() -> Vec<f64> {
    vec![0.0, FRAC_PI_4, FRAC_PI_2, PI, 1.25 * PI, 1.5 * PI]
}

pub fn fig3_gammas() -> Vec<f64> {
    vec![FRAC_PI_2, FRAC_PI_4, PI / 12.0, PI / 32.0]
}

/// `k·2π/72` for `k = 0..72`.
pub fn fig3_phases() -> Vec<f64> {
    (0..72).map(|k| k as f64 * PI / 36.0).collect()
}

/// 0.1 to 3.0 in steps of 0.05.
pub fn fig4_temperatures() -> Vec<f64> {
    (0..59).map(|k| 0.1 + 0.05 * k as f64).collect()
}

/// 0.5 to 5.0 in steps of 0.25.
pub fn fig5_temperatures() -> Vec<f64> {
    (0..19).map(|k| 0.5 + 0.25 * k as f64).collect()
}

/// 0.02 to 0.4 in steps of 0.02.
pub fn fig5_delta_ts() -> Vec<f64> {
    (1..=20).map(|k| 0.02 * k as f64).collect()
}

/// One fig2 run: `(p, dphi)`.
pub fn fig2_runs() -> Vec<(f64, f64)> {
    let mut runs: Vec<(f64, f64)> = fig2_phases().into_iter().map(|d| (P_COHERENT, d)).collect();
    runs.push((0.0, 0.0));
    runs
}

#[derive(Serialize)]
struct PresetManifest<'a> {
    generator: &'static str,
    version: &'static str,
    preset: Preset,
    output: &'a str,
    workers: usize,
    omega: f64,
    delta: f64,
    system: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    hot_temperature: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cold_temperature: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    collisions: Option<usize>,
    gamma: Vec<f64>,
    p: Vec<f64>,
    dphi: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    temperature: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    delta_t: Vec<f64>,
    steady: &'a Steady,
}

impl<'a> PresetManifest<'a> {
    fn base(preset: Preset, settings: &'a RunSettings) -> Self {
        Self {
            generator: "qcollide",
            version: env!("CARGO_PKG_VERSION"),
            preset,
            output: "",
            workers: settings.workers,
            omega: 1.0,
            delta: DELTA,
            system: "11",
            hot_temperature: None,
            cold_temperature: None,
            collisions: None,
            gamma: vec![GAMMA],
            p: vec![P_COHERENT],
            dphi: Vec::new(),
            temperature: Vec::new(),
            delta_t: Vec::new(),
            steady: &settings.steady,
        }
    }
}

fn emit<'a>(dir: &Path, name: &'a str, table: &Table, mut manifest: PresetManifest<'a>) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    manifest.output = name;
    write_with_manifest(&path, table, &manifest)?;
    Ok(path)
}

fn standard(dphi: f64, p: f64, gamma: f64) -> Result<CollisionConfig, CliError> {
    Ok(CollisionConfig::standard(T_HOT, T_COLD, dphi, p, CouplingParams::new(gamma, DELTA)?)?)
}

pub fn run_preset(preset: Preset, settings: &RunSettings, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    ensure_dir(dir)?;
    match preset {
        Preset::Fig2 => fig2(settings, dir),
        Preset::Fig3 => fig3(settings, dir),
        Preset::Fig4 => fig4(settings, dir),
        Preset::Fig5 => fig5(settings, dir),
    }
}

fn fig2(settings: &RunSettings, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let runs = fig2_runs();
    let configs = runs
        .iter()
        .map(|&(p, dphi)| standard(dphi, p, GAMMA))
        .collect::<Result<Vec<_>, _>>()?;
    let trajectories = parallel_map(&configs, settings.workers, |c| run_trajectory(c, FIG2_COLLISIONS))?;
    let mut traj = Table::new(&["p", "dphi", "n", "J_h", "J_c", "cumulative_Q_h", "cumulative_Q_c"]);
    for (&(p, dphi), records) in runs.iter().zip(&trajectories) {
        let (mut qh, mut qc) = (0.0, 0.0);
        for r in records {
            qh += r.heat_hot;
            qc += r.heat_cold;
            traj.push(vec![
                p.into(),
                dphi.into(),
                r.step.into(),
                r.heat_hot.into(),
                r.heat_cold.into(),
                qh.into(),
                qc.into(),
            ]);
        }
    }

    let summary = match settings.steady.method {
        MethodName::Simulate => {
            let opts = settings.steady.options();
            let res = parallel_map(&configs, settings.workers, |c| simulate_steady(c, &opts))?;
            let mut t = Table::new(&["p", "dphi", "J_h", "J_c", "converged_at"]);
            for (&(p, dphi), r) in runs.iter().zip(res) {
                t.push(vec![
                    p.into(),
                    dphi.into(),
                    r.steady_current_hot.into(),
                    r.steady_current_cold.into(),
                    r.converged_at.into(),
                ]);
            }
            t
        }
        MethodName::FixedPoint => {
            let res = parallel_map(&configs, settings.workers, steady_state_exact)?;
            let mut t = Table::new(&["p", "dphi", "J_h", "J_c"]);
            for (&(p, dphi), s) in runs.iter().zip(res) {
                t.push(vec![p.into(), dphi.into(), s.current_hot.into(), s.current_cold.into()]);
            }
            t
        }
    };

    let manifest = || {
        let mut m = PresetManifest::base(Preset::Fig2, settings);
        m.hot_temperature = Some(T_HOT);
        m.cold_temperature = Some(T_COLD);
        m.p = vec![P_COHERENT, 0.0];
        m.dphi = fig2_phases();
        m
    };
    let mut m = manifest();
    m.collisions = Some(FIG2_COLLISIONS);
    Ok(vec![
        emit(dir, "fig2_trajectories.csv", &traj, m)?,
        emit(dir, "fig2_steady.csv", &summary, manifest())?,
    ])
}

fn fig3(settings: &RunSettings, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let method = settings.steady.method();
    let dphis = fig3_phases();
    let mut t = Table::new(&["gamma", "dphi", "J_h", "J_c"]);
    for gamma in fig3_gammas() {
        for pt in phase_sweep(&standard(0.0, P_COHERENT, gamma)?, &dphis, &method, settings.workers)? {
            t.push(vec![gamma.into(), pt.dphi.into(), pt.current_hot.into(), pt.current_cold.into()]);
        }
    }
    let mut m = PresetManifest::base(Preset::Fig3, settings);
    m.hot_temperature = Some(T_HOT);
    m.cold_temperature = Some(T_COLD);
    m.gamma = fig3_gammas();
    m.dphi = dphis;
    Ok(vec![emit(dir, "fig3_phase.csv", &t, m)?])
}

/// Curves in legend order: `(p, dphi)`.
pub fn fig4_curves() -> [(f64, f64); 3] {
    [(P_COHERENT, 0.0), (P_COHERENT, PI), (0.0, 0.0)]
}

fn fig4(settings: &RunSettings, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let method = settings.steady.method();
    let temps = fig4_temperatures();
    let grid = default_dt_grid();
    let coupling = CouplingParams::new(GAMMA, DELTA)?;
    let mut t = Table::new(&["p", "dphi", "T", "kappa", "intercept_c", "residual_rms"]);
    for (p, dphi) in fig4_curves() {
        let r = if p == 0.0 { Reservoirs::Thermal } else { Reservoirs::Coherent { p, dphi } };
        for pt in conductance_sweep(&temps, r, coupling, &grid, &method, settings.workers)? {
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
    let mut m = PresetManifest::base(Preset::Fig4, settings);
    m.p = vec![P_COHERENT, P_COHERENT, 0.0];
    m.dphi = vec![0.0, PI, 0.0];
    m.temperature = temps;
    m.delta_t = grid;
    Ok(vec![emit(dir, "fig4_conductance.csv", &t, m)?])
}

fn fig5(settings: &RunSettings, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let method = settings.steady.method();
    let (temps, dts) = (fig5_temperatures(), fig5_delta_ts());
    let coupling = CouplingParams::new(GAMMA, DELTA)?;
    let dphis = [FRAC_PI_4, 1.25 * PI];
    let mut t = Table::new(&["dphi", "delta_T", "T", "J_h"]);
    for dphi in dphis {
        let r = Reservoirs::Coherent { p: P_COHERENT, dphi };
        for pt in current_surface(&dts, &temps, r, coupling, &method, settings.workers)? {
            t.push(vec![dphi.into(), pt.delta_t.into(), pt.temperature.into(), pt.current_hot.into()]);
        }
    }
    let mut m = PresetManifest::base(Preset::Fig5, settings);
    m.dphi = dphis.to_vec();
    m.temperature = temps;
    m.delta_t = dts;
    Ok(vec![emit(dir, "fig5_surface.csv", &t, m)?])
}
