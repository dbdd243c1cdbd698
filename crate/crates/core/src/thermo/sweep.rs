use rayon::prelude::*;

use super::response::{conductance_fit_with, LinearResponseFit};
use super::steady::{steady_currents, SteadyMethod};
use crate::collision::{CollisionConfig, CouplingParams};
use crate::{Error, Result};

/// Maps `f` over `items` on a pool of `workers` threads (`0` picks the rayon
/// default). Output order follows input order, and each point is computed
/// independently, so results do not depend on the worker count.
pub fn parallel_map<T, R, F>(items: &[T], workers: usize, f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::ResourceLimit(format!("cannot start worker pool: {e}")))?;
    pool.install(|| items.par_iter().map(&f).collect())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhasePoint {
    pub dphi: f64,
    pub current_hot: f64,
    pub current_cold: f64,
}

/// Steady currents over phase differences, holding everything else from the
/// template and setting `φ_h = Δφ`, `φ_c = 0`.
pub fn phase_sweep(
    template: &CollisionConfig,
    dphis: &[f64],
    method: &SteadyMethod,
    workers: usize,
) -> Result<Vec<PhasePoint>> {
    parallel_map(dphis, workers, |&dphi| {
        let cfg = template.with_phase_difference(dphi)?;
        let (current_hot, current_cold) = steady_currents(&cfg, method)?;
        Ok(PhasePoint {
            dphi,
            current_hot,
            current_cold,
        })
    })
}

/// Reservoir family for a conductance curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Reservoirs {
    Thermal,
    Coherent { p: f64, dphi: f64 },
}

impl Reservoirs {
    fn parts(self) -> (f64, f64) {
        match self {
            Reservoirs::Thermal => (0.0, 0.0),
            Reservoirs::Coherent { p, dphi } => (p, dphi),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConductancePoint {
    pub temperature: f64,
    pub fit: LinearResponseFit,
}

/// Linear-response fits over a temperature grid.
pub fn conductance_sweep(
    temperatures: &[f64],
    reservoirs: Reservoirs,
    coupling: CouplingParams,
    dt_grid: &[f64],
    method: &SteadyMethod,
    workers: usize,
) -> Result<Vec<ConductancePoint>> {
    let (p, dphi) = reservoirs.parts();
    parallel_map(temperatures, workers, |&temperature| {
        let fit = conductance_fit_with(temperature, dphi, p, coupling, dt_grid, method)?;
        Ok(ConductancePoint { temperature, fit })
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfacePoint {
    pub delta_t: f64,
    pub temperature: f64,
    pub current_hot: f64,
}

/// Steady `J_h` on the grid `ΔT × T`, row-major in `ΔT`.
pub fn current_surface(
    delta_ts: &[f64],
    temperatures: &[f64],
    reservoirs: Reservoirs,
    coupling: CouplingParams,
    method: &SteadyMethod,
    workers: usize,
) -> Result<Vec<SurfacePoint>> {
    let (p, dphi) = reservoirs.parts();
    let grid: Vec<(f64, f64)> = delta_ts
        .iter()
        .flat_map(|&dt| temperatures.iter().map(move |&t| (dt, t)))
        .collect();
    parallel_map(&grid, workers, |&(delta_t, temperature)| {
        let cfg = super::response::split_temperature_config(temperature, delta_t, dphi, p, coupling)?;
        Ok(SurfacePoint {
            delta_t,
            temperature,
            current_hot: steady_currents(&cfg, method)?.0,
        })
    })
}
