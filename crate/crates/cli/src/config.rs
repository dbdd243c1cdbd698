use std::f64::consts::PI;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use toml::{Table, Value};

use qcollide::collision::{AncillaSpec, CollisionConfig, CouplingParams};
use qcollide::entropy::DEFAULT_JOINT_CAP;
use qcollide::qdm::DensityOperator;
use qcollide::thermo::{default_dt_grid, SteadyMethod, SteadyOptions, DEFAULT_MAX_COLLISIONS, DEFAULT_STEADY_TOL, DEFAULT_STEADY_WINDOW};

use crate::error::CliError;

/// Parses `"1.25pi"`, `"pi/4"`, `"-3pi/2"`, `"2π"` or a plain number.
pub fn parse_angle(text: &str) -> Result<f64, String> {
    let s: String = text.trim().replace('π', "pi").chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot read angle {text:?}; use radians or a multiple of pi such as \"1.25pi\" or \"pi/4\"");
    let (head, denom) = match s.split_once('/') {
        Some((h, d)) => (h, d.parse::<f64>().map_err(|_| bad())?),
        None => (s.as_str(), 1.0),
    };
    let value = if let Some(coef) = head.strip_suffix("pi") {
        let coef = coef.strip_suffix('*').unwrap_or(coef);
        let c = match coef {
            "" | "+" => 1.0,
            "-" => -1.0,
            c => c.parse::<f64>().map_err(|_| bad())?,
        };
        c * PI
    } else {
        head.parse::<f64>().map_err(|_| bad())?
    };
    let v = value / denom;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum Angle {
    Number(f64),
    Text(String),
}

impl Angle {
    fn radians(&self, key: &str) -> Result<f64, CliError> {
        match self {
            Angle::Number(x) => Ok(*x),
            Angle::Text(s) => parse_angle(s).map_err(|e| CliError::Validation(format!("{key}: {e}"))),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawReservoir {
    temperature: Option<f64>,
    phase: Option<Angle>,
    p: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrids {
    dphi: Option<Vec<Angle>>,
    temperature: Option<Vec<f64>>,
    delta_t: Option<Vec<f64>>,
    p: Option<Vec<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSteady {
    tol: Option<f64>,
    window: Option<usize>,
    max_steps: Option<usize>,
    method: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntropy {
    collisions: Option<usize>,
    joint_cap: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    mode: Option<String>,
    output: Option<PathBuf>,
    workers: Option<usize>,
    omega: Option<f64>,
    gamma: Option<Angle>,
    delta: Option<Angle>,
    p: Option<f64>,
    dphi: Option<Angle>,
    system: Option<String>,
    collisions: Option<usize>,
    hot: Option<RawReservoir>,
    cold: Option<RawReservoir>,
    grids: Option<RawGrids>,
    steady: Option<RawSteady>,
    entropy: Option<RawEntropy>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Trajectory,
    Steady,
    PhaseSweep,
    Conductance,
    Entropy,
}

impl Mode {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "trajectory" => Mode::Trajectory,
            "steady" => Mode::Steady,
            "phase-sweep" => Mode::PhaseSweep,
            "conductance" => Mode::Conductance,
            "entropy" => Mode::Entropy,
            "preset" => {
                return Err(CliError::Validation(
                    "mode: presets run through the `preset` subcommand".into(),
                ))
            }
            other => {
                return Err(CliError::Validation(format!(
                    "mode: unknown mode {other:?} (expected trajectory, steady, phase-sweep, conductance or entropy)"
                )))
            }
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Trajectory => "trajectory",
            Mode::Steady => "steady",
            Mode::PhaseSweep => "phase-sweep",
            Mode::Conductance => "conductance",
            Mode::Entropy => "entropy",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodName {
    Simulate,
    FixedPoint,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Reservoir {
    pub temperature: f64,
    pub phase: f64,
    pub p: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Grids {
    pub dphi: Vec<f64>,
    pub temperature: Vec<f64>,
    pub delta_t: Vec<f64>,
    pub p: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Steady {
    pub tol: f64,
    pub window: usize,
    pub max_steps: usize,
    pub method: MethodName,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Entropy {
    pub collisions: usize,
    pub joint_cap: usize,
}

/// Fully resolved experiment; serialized verbatim into run manifests.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub output: Option<PathBuf>,
    /// `0` lets the pool pick.
    pub workers: usize,
    pub omega: f64,
    pub gamma: f64,
    pub delta: f64,
    pub system: String,
    pub collisions: usize,
    pub hot: Reservoir,
    pub cold: Reservoir,
    pub grids: Grids,
    pub steady: Steady,
    pub entropy: Entropy,
}

pub const DEFAULT_COLLISIONS: usize = 500;

/// Settings shared by presets and the mode runners.
#[derive(Clone, Debug, PartialEq)]
pub struct RunSettings {
    pub workers: usize,
    pub steady: Steady,
    pub joint_cap: usize,
}

impl ExperimentConfig {
    pub fn collision_config(&self) -> Result<CollisionConfig, CliError> {
        let hot = AncillaSpec::new(self.hot.temperature, self.hot.phase, self.hot.p, self.omega)?;
        let cold = AncillaSpec::new(self.cold.temperature, self.cold.phase, self.cold.p, self.omega)?;
        let coupling = CouplingParams::new(self.gamma, self.delta)?;
        Ok(CollisionConfig::new(hot, cold, coupling, system_state(&self.system)?)?)
    }

    pub fn coupling(&self) -> Result<CouplingParams, CliError> {
        Ok(CouplingParams::new(self.gamma, self.delta)?)
    }

    pub fn settings(&self) -> RunSettings {
        RunSettings {
            workers: self.workers,
            steady: self.steady.clone(),
            joint_cap: self.entropy.joint_cap,
        }
    }
}

impl Steady {
    pub fn options(&self) -> SteadyOptions {
        SteadyOptions {
            tol: self.tol,
            window: self.window,
            max_collisions: self.max_steps,
        }
    }

    pub fn method(&self) -> SteadyMethod {
        match self.method {
            MethodName::Simulate => SteadyMethod::Simulate(self.options()),
            MethodName::FixedPoint => SteadyMethod::FixedPoint,
        }
    }
}

/// Two-qubit basis label such as `"11"`.
fn system_state(label: &str) -> Result<DensityOperator, CliError> {
    let digits: Vec<usize> = label
        .chars()
        .map(|c| c.to_digit(10).map(|d| d as usize))
        .collect::<Option<_>>()
        .filter(|d: &Vec<usize>| d.len() == 2 && d.iter().all(|&x| x < 2))
        .ok_or_else(|| CliError::Validation(format!("system: expected a two-qubit basis label like \"11\", got {label:?}")))?;
    Ok(DensityOperator::basis_state(&digits, vec![2, 2])?)
}

/// Inserts `value` at the dotted `key`, creating tables on the way.
pub fn set_key(table: &mut Table, key: &str, value: Value) -> Result<(), CliError> {
    let mut parts: Vec<&str> = key.split('.').collect();
    let last = parts.pop().filter(|s| !s.is_empty()).ok_or_else(|| CliError::Parse(format!("empty key in override {key:?}")))?;
    let mut cur = table;
    for p in parts {
        let entry = cur.entry(p.to_string()).or_insert_with(|| Value::Table(Table::new()));
        cur = entry
            .as_table_mut()
            .ok_or_else(|| CliError::Parse(format!("override {key:?}: {p:?} is not a section")))?;
    }
    cur.insert(last.to_string(), value);
    Ok(())
}

/// `key=value` with the value read as TOML, falling back to a bare string.
pub fn parse_override(text: &str) -> Result<(String, Value), CliError> {
    let (k, v) = text
        .split_once('=')
        .ok_or_else(|| CliError::Parse(format!("override {text:?} is not of the form key=value")))?;
    let v = v.trim();
    let value = match toml::from_str::<Table>(&format!("v = {v}")) {
        Ok(mut t) => t.remove("v").expect("parsed key"),
        Err(_) => Value::String(v.to_string()),
    };
    Ok((k.trim().to_string(), value))
}

pub fn parse_table(text: &str, origin: &str) -> Result<Table, CliError> {
    text.parse::<Table>().map_err(|e| CliError::Parse(format!("{origin}: {e}")))
}

fn check_positive(key: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Validation(format!("{key}: must be a positive number, got {v}")))
    }
}

fn check_unit(key: &str, v: f64) -> Result<f64, CliError> {
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(CliError::Validation(format!("{key}: must lie in [0, 1], got {v}")))
    }
}

fn angles(key: &str, v: Option<Vec<Angle>>) -> Result<Option<Vec<f64>>, CliError> {
    v.map(|xs| xs.iter().map(|a| a.radians(key)).collect()).transpose()
}

/// Builds and validates the experiment from a merged table.
pub fn resolve(table: Table) -> Result<ExperimentConfig, CliError> {
    let raw: RawConfig = Value::Table(table)
        .try_into()
        .map_err(|e: toml::de::Error| CliError::Parse(format!("configuration: {}", e.message())))?;

    let mode = Mode::parse(
        raw.mode
            .as_deref()
            .ok_or_else(|| CliError::Validation("mode: required (trajectory, steady, phase-sweep, conductance or entropy)".into()))?,
    )?;

    let omega = check_positive("omega", raw.omega.unwrap_or(1.0))?;
    let gamma = raw.gamma.map(|a| a.radians("gamma")).transpose()?.unwrap_or(PI / 32.0);
    let delta = raw.delta.map(|a| a.radians("delta")).transpose()?.unwrap_or(PI / 4.0);
    for (k, v) in [("gamma", gamma), ("delta", delta)] {
        if !(0.0..=PI / 2.0).contains(&v) {
            return Err(CliError::Validation(format!("{k}: must lie in [0, pi/2], got {v}")));
        }
    }
    let p = check_unit("p", raw.p.unwrap_or(0.0))?;
    let dphi = raw.dphi.map(|a| a.radians("dphi")).transpose()?;

    let rh = raw.hot.unwrap_or_default();
    let rc = raw.cold.unwrap_or_default();
    let cold_phase = rc.phase.map(|a| a.radians("cold.phase")).transpose()?.unwrap_or(0.0);
    let hot_phase = match (rh.phase.map(|a| a.radians("hot.phase")).transpose()?, dphi) {
        (Some(_), Some(_)) => {
            return Err(CliError::Validation(
                "hot.phase: give either hot.phase or dphi, not both".into(),
            ))
        }
        (Some(ph), None) => ph,
        (None, d) => cold_phase + d.unwrap_or(0.0),
    };
    let hot = Reservoir {
        temperature: check_positive("hot.temperature", rh.temperature.unwrap_or(2.0))?,
        phase: hot_phase,
        p: check_unit("hot.p", rh.p.unwrap_or(p))?,
    };
    let cold = Reservoir {
        temperature: check_positive("cold.temperature", rc.temperature.unwrap_or(1.0))?,
        phase: cold_phase,
        p: check_unit("cold.p", rc.p.unwrap_or(p))?,
    };

    let rg = raw.grids.unwrap_or_default();
    let dphi_grid = angles("grids.dphi", rg.dphi)?;
    let grids = Grids {
        dphi: dphi_grid.unwrap_or_default(),
        temperature: rg.temperature.unwrap_or_default(),
        delta_t: rg.delta_t.unwrap_or_else(default_dt_grid),
        p: rg.p.unwrap_or_default(),
    };
    for &t in &grids.temperature {
        check_positive("grids.temperature", t)?;
    }
    for &q in &grids.p {
        check_unit("grids.p", q)?;
    }
    match mode {
        Mode::PhaseSweep if grids.dphi.is_empty() => {
            return Err(CliError::Validation("grids.dphi: phase-sweep needs a nonempty grid".into()))
        }
        Mode::Conductance if grids.temperature.is_empty() => {
            return Err(CliError::Validation("grids.temperature: conductance needs a nonempty grid".into()))
        }
        Mode::Conductance if grids.delta_t.len() < 2 => {
            return Err(CliError::Validation("grids.delta_t: a line fit needs at least two values".into()))
        }
        _ => {}
    }

    let rs = raw.steady.unwrap_or_default();
    let method = match rs.method.as_deref() {
        None if mode == Mode::Conductance => MethodName::FixedPoint,
        None | Some("simulate") => MethodName::Simulate,
        Some("fixed-point") => MethodName::FixedPoint,
        Some(other) => {
            return Err(CliError::Validation(format!(
                "steady.method: expected \"simulate\" or \"fixed-point\", got {other:?}"
            )))
        }
    };
    let steady = Steady {
        tol: check_positive("steady.tol", rs.tol.unwrap_or(DEFAULT_STEADY_TOL))?,
        window: rs.window.unwrap_or(DEFAULT_STEADY_WINDOW),
        max_steps: rs.max_steps.unwrap_or(DEFAULT_MAX_COLLISIONS),
        method,
    };
    if steady.window == 0 || steady.max_steps == 0 {
        return Err(CliError::Validation("steady.window and steady.max_steps must be >= 1".into()));
    }
    let re = raw.entropy.unwrap_or_default();
    let entropy = Entropy {
        collisions: re.collisions.unwrap_or(DEFAULT_JOINT_CAP),
        joint_cap: re.joint_cap.unwrap_or(DEFAULT_JOINT_CAP),
    };
    let collisions = raw.collisions.unwrap_or(DEFAULT_COLLISIONS);
    if collisions == 0 || entropy.collisions == 0 {
        return Err(CliError::Validation("collisions: must be >= 1".into()));
    }

    let cfg = ExperimentConfig {
        mode,
        output: raw.output,
        workers: raw.workers.unwrap_or(0),
        omega,
        gamma,
        delta,
        system: raw.system.unwrap_or_else(|| "11".into()),
        collisions,
        hot,
        cold,
        grids,
        steady,
        entropy,
    };
    // Surface physical invariant violations before any work starts.
    cfg.collision_config()?;
    Ok(cfg)
}
