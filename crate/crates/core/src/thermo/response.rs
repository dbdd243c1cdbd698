use super::analytic::CriticalCoherence;
use super::steady::{steady_currents, SteadyMethod};
use crate::collision::{AncillaSpec, CollisionConfig, CouplingParams};
use crate::{Error, Result};

/// Currents below this magnitude count as a root during bisection.
pub const ROOT_CURRENT_TOL: f64 = 1e-13;
/// Bound on `|c|` when symmetry forces a zero intercept.
pub const ZERO_INTERCEPT_TOL: f64 = 1e-8;
/// Allowed rms residual relative to the fitted rise `|slope| · span(ΔT)`.
pub const LINEARITY_TOL: f64 = 1e-3;

const MONOTONE_SAMPLES: usize = 21;

/// Temperature differences used when none are given.
pub fn default_dt_grid() -> Vec<f64> {
    (1..=10).map(|k| 5e-5 * k as f64).collect()
}

/// Straight-line fit `J_h = −λ ΔT + c`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearResponseFit {
    /// `−λ`.
    pub slope_neg_lambda: f64,
    pub intercept_c: f64,
    pub residual_rms: f64,
    pub delta_t_grid: Vec<f64>,
    pub currents: Vec<f64>,
}

impl LinearResponseFit {
    /// `κ = λ`.
    pub fn conductance(&self) -> f64 {
        -self.slope_neg_lambda
    }
}

/// Ordinary least squares, returning `(slope, intercept, rms residual)`.
pub fn least_squares_line(x: &[f64], y: &[f64]) -> Result<(f64, f64, f64)> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::InvalidArgument("a line fit needs at least two points".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|xi| (xi - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("line fit abscissae are all equal".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(xi, yi)| (xi - mx) * (yi - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = x.iter().zip(y).map(|(xi, yi)| (yi - intercept - slope * xi).powi(2)).sum();
    Ok((slope, intercept, (ss / n).sqrt()))
}

/// Configuration with `T_h = T + ΔT/2`, `T_c = T − ΔT/2`, `φ_h = Δφ`, `φ_c = 0`.
pub fn split_temperature_config(
    base_t: f64,
    delta_t: f64,
    dphi: f64,
    p: f64,
    coupling: CouplingParams,
) -> Result<CollisionConfig> {
    CollisionConfig::standard(base_t + 0.5 * delta_t, base_t - 0.5 * delta_t, dphi, p, coupling)
}

fn is_symmetric_phase(dphi: f64) -> bool {
    let r = dphi.rem_euclid(std::f64::consts::PI);
    r < 1e-12 || std::f64::consts::PI - r < 1e-12
}

/// Fits the steady current over temperature differences around `base_t`.
pub fn conductance_fit(
    base_t: f64,
    dphi: f64,
    p: f64,
    coupling: CouplingParams,
    dt_grid: &[f64],
) -> Result<LinearResponseFit> {
    conductance_fit_with(base_t, dphi, p, coupling, dt_grid, &SteadyMethod::FixedPoint)
}

pub fn conductance_fit_with(
    base_t: f64,
    dphi: f64,
    p: f64,
    coupling: CouplingParams,
    dt_grid: &[f64],
    method: &SteadyMethod,
) -> Result<LinearResponseFit> {
    if !(base_t > 0.0) {
        return Err(Error::InvalidArgument(format!("base temperature must be > 0, got {base_t}")));
    }
    if let Some(&bad) = dt_grid.iter().find(|&&dt| !(dt > 0.0 && dt < 2.0 * base_t)) {
        return Err(Error::InvalidArgument(format!(
            "temperature difference {bad} outside (0, 2T) for T = {base_t}"
        )));
    }
    let currents = dt_grid
        .iter()
        .map(|&dt| {
            let cfg = split_temperature_config(base_t, dt, dphi, p, coupling)?;
            Ok(steady_currents(&cfg, method)?.0)
        })
        .collect::<Result<Vec<f64>>>()?;
    let (slope, intercept, residual_rms) = least_squares_line(dt_grid, &currents)?;

    let span = dt_grid.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - dt_grid.iter().cloned().fold(f64::INFINITY, f64::min);
    if residual_rms > LINEARITY_TOL * slope.abs() * span {
        return Err(Error::Regime(format!(
            "steady current is not linear in the temperature difference (rms residual {residual_rms:e}, slope {slope:e})"
        )));
    }
    if (p == 0.0 || is_symmetric_phase(dphi)) && intercept.abs() > ZERO_INTERCEPT_TOL {
        return Err(Error::Numerical(format!(
            "intercept {intercept:e} should vanish at phase difference {dphi}"
        )));
    }
    Ok(LinearResponseFit {
        slope_neg_lambda: slope,
        intercept_c: intercept,
        residual_rms,
        delta_t_grid: dt_grid.to_vec(),
        currents,
    })
}

/// Smallest `p` at which the steady `J_h` changes sign, found by bisection.
///
/// The template supplies temperatures, coupling and frequency; its phases
/// and coherence weights are replaced by `φ_h = Δφ`, `φ_c = 0`, and a common
/// `p`.
pub fn critical_p_numeric(template: &CollisionConfig, dphi: f64, bisection_tol: f64) -> Result<CriticalCoherence> {
    critical_p_numeric_with(template, dphi, bisection_tol, &SteadyMethod::FixedPoint)
}

pub fn critical_p_numeric_with(
    template: &CollisionConfig,
    dphi: f64,
    bisection_tol: f64,
    method: &SteadyMethod,
) -> Result<CriticalCoherence> {
    if !(bisection_tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "bisection tolerance must be > 0, got {bisection_tol}"
        )));
    }
    let current = |p: f64| -> Result<f64> {
        let cfg = with_coherence(template, dphi, p)?;
        Ok(steady_currents(&cfg, method)?.0)
    };

    let samples = (0..MONOTONE_SAMPLES)
        .map(|k| current(k as f64 / (MONOTONE_SAMPLES - 1) as f64))
        .collect::<Result<Vec<f64>>>()?;
    let rising = samples.windows(2).all(|w| w[1] >= w[0] - ROOT_CURRENT_TOL);
    let falling = samples.windows(2).all(|w| w[1] <= w[0] + ROOT_CURRENT_TOL);
    if !(rising || falling) {
        return Err(Error::Numerical(
            "steady current is not monotone in the coherence weight".into(),
        ));
    }

    let (j0, j1) = (samples[0], samples[MONOTONE_SAMPLES - 1]);
    if j0.abs() < ROOT_CURRENT_TOL {
        return Ok(CriticalCoherence::Reachable(0.0));
    }
    if j1.abs() >= ROOT_CURRENT_TOL && j0.signum() == j1.signum() {
        return Ok(CriticalCoherence::Unreachable);
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while hi - lo > bisection_tol {
        let mid = 0.5 * (lo + hi);
        let j = current(mid)?;
        if j.abs() < ROOT_CURRENT_TOL {
            return Ok(CriticalCoherence::Reachable(mid));
        }
        if j.signum() == j0.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(CriticalCoherence::Reachable(0.5 * (lo + hi)))
}

fn with_coherence(template: &CollisionConfig, dphi: f64, p: f64) -> Result<CollisionConfig> {
    let omega = template.frequency();
    let hot = AncillaSpec::new(template.hot.temperature, dphi, p, omega)?;
    let cold = AncillaSpec::new(template.cold.temperature, 0.0, p, omega)?;
    CollisionConfig::new(hot, cold, template.coupling, template.initial_system.clone())
}
