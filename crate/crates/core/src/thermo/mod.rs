//! Steady currents, linear response and the closed-form oracles.

mod analytic;
mod response;
mod steady;
mod sweep;

pub use analytic::{
    conductance_high_t_limit, conductance_thermal_analytic, critical_p_full_swap, linear_response_full_swap,
    steady_current_analytic_full_swap, CriticalCoherence, FullSwapLinearResponse,
};
pub use response::{
    conductance_fit, conductance_fit_with, critical_p_numeric, critical_p_numeric_with, default_dt_grid,
    least_squares_line, split_temperature_config, LinearResponseFit, LINEARITY_TOL, ROOT_CURRENT_TOL,
    ZERO_INTERCEPT_TOL,
};
pub use steady::{
    detect_steady, simulate_steady, steady_currents, steady_state_exact, ExactSteadyState, SteadyDetector,
    SteadyMethod, SteadyOptions, SteadyStateResult, DEFAULT_MAX_COLLISIONS, DEFAULT_STEADY_TOL,
    DEFAULT_STEADY_WINDOW,
};
pub use sweep::{
    conductance_sweep, current_surface, parallel_map, phase_sweep, ConductancePoint, PhasePoint, Reservoirs,
    SurfacePoint,
};
