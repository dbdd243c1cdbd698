use std::collections::VecDeque;

use crate::collision::{CollisionChannel, CollisionConfig, TrajectoryRecord};
use crate::qdm::DensityOperator;
use crate::{Error, Result};

pub const DEFAULT_STEADY_TOL: f64 = 1e-12;
pub const DEFAULT_STEADY_WINDOW: usize = 20;
pub const DEFAULT_MAX_COLLISIONS: usize = 200_000;

/// Window-averaged late-time heat currents.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SteadyStateResult {
    pub steady_current_hot: f64,
    pub steady_current_cold: f64,
    /// Collision index at which the convergence test first passed.
    pub converged_at: usize,
    pub tolerance_used: f64,
}

impl SteadyStateResult {
    pub fn balance_defect(&self) -> f64 {
        (self.steady_current_hot + self.steady_current_cold).abs()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SteadyOptions {
    pub tol: f64,
    pub window: usize,
    pub max_collisions: usize,
}

impl Default for SteadyOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_STEADY_TOL,
            window: DEFAULT_STEADY_WINDOW,
            max_collisions: DEFAULT_MAX_COLLISIONS,
        }
    }
}

impl SteadyOptions {
    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidArgument(format!("steady tolerance must be > 0, got {}", self.tol)));
        }
        if self.window == 0 {
            return Err(Error::InvalidArgument("steady window must be >= 1".into()));
        }
        Ok(())
    }
}

/// Streaming convergence test over the last `window + 1` currents.
///
/// Converged once every successive difference `|J_h(n) − J_h(n−1)|` in the
/// window is below `tol` and the window-mean currents balance to within
/// `10 tol`.
#[derive(Clone, Debug)]
pub struct SteadyDetector {
    tol: f64,
    window: usize,
    hot: VecDeque<f64>,
    cold: VecDeque<f64>,
    seen: usize,
}

impl SteadyDetector {
    pub fn new(tol: f64, window: usize) -> Self {
        Self {
            tol,
            window,
            hot: VecDeque::with_capacity(window + 1),
            cold: VecDeque::with_capacity(window + 1),
            seen: 0,
        }
    }

    pub fn push(&mut self, heat_hot: f64, heat_cold: f64) -> Option<SteadyStateResult> {
        self.seen += 1;
        if self.hot.len() == self.window + 1 {
            self.hot.pop_front();
            self.cold.pop_front();
        }
        self.hot.push_back(heat_hot);
        self.cold.push_back(heat_cold);
        if self.hot.len() < self.window + 1 {
            return None;
        }
        if self.max_delta() >= self.tol {
            return None;
        }
        let (mean_hot, mean_cold) = self.means();
        if (mean_hot + mean_cold).abs() > 10.0 * self.tol {
            return None;
        }
        Some(SteadyStateResult {
            steady_current_hot: mean_hot,
            steady_current_cold: mean_cold,
            converged_at: self.seen,
            tolerance_used: self.tol,
        })
    }

    fn max_delta(&self) -> f64 {
        self.hot
            .iter()
            .zip(self.hot.iter().skip(1))
            .map(|(a, b)| (b - a).abs())
            .fold(0.0, f64::max)
    }

    /// Means over the trailing `window` records.
    fn means(&self) -> (f64, f64) {
        let n = self.window as f64;
        let hot = self.hot.iter().skip(1).sum::<f64>() / n;
        let cold = self.cold.iter().skip(1).sum::<f64>() / n;
        (hot, cold)
    }

    fn failure(&self) -> Error {
        let (last_mean_hot, last_mean_cold) = if self.hot.len() > 1 {
            self.means()
        } else {
            (f64::NAN, f64::NAN)
        };
        Error::Convergence {
            steps: self.seen,
            last_max_delta: self.max_delta(),
            last_mean_hot,
            last_mean_cold,
        }
    }
}

/// Steady currents of a recorded trajectory.
pub fn detect_steady(trajectory: &[TrajectoryRecord], tol: f64, window: usize) -> Result<SteadyStateResult> {
    SteadyOptions {
        tol,
        window,
        max_collisions: trajectory.len(),
    }
    .validate()?;
    if trajectory.len() < window + 1 {
        return Err(Error::InvalidArgument(format!(
            "trajectory has {} records, need at least window + 1 = {}",
            trajectory.len(),
            window + 1
        )));
    }
    let mut detector = SteadyDetector::new(tol, window);
    for rec in trajectory {
        if let Some(result) = detector.push(rec.heat_hot, rec.heat_cold) {
            return Ok(result);
        }
    }
    Err(detector.failure())
}

/// Iterates the collision map until the currents settle, without storing
/// the trajectory.
pub fn simulate_steady(config: &CollisionConfig, options: &SteadyOptions) -> Result<SteadyStateResult> {
    options.validate()?;
    let channel = CollisionChannel::new(config)?;
    let mut state = CollisionChannel::flatten(config.initial_system.matrix());
    let mut detector = SteadyDetector::new(options.tol, options.window);
    for _ in 0..options.max_collisions {
        let (jh, jc) = channel.heats(&state);
        state = channel.apply(&state);
        if let Some(result) = detector.push(jh, jc) {
            return Ok(result);
        }
    }
    Err(detector.failure())
}

/// Steady state taken directly as the fixed point of the collision channel.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactSteadyState {
    pub system_state: DensityOperator,
    pub current_hot: f64,
    pub current_cold: f64,
}

pub fn steady_state_exact(config: &CollisionConfig) -> Result<ExactSteadyState> {
    let channel = CollisionChannel::new(config)?;
    let system_state = channel.fixed_point()?;
    let (current_hot, current_cold) = channel.heats(&CollisionChannel::flatten(system_state.matrix()));
    Ok(ExactSteadyState {
        system_state,
        current_hot,
        current_cold,
    })
}

/// How sweeps obtain steady currents.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SteadyMethod {
    /// Iterate collisions until [`SteadyDetector`] reports convergence.
    Simulate(SteadyOptions),
    /// Solve for the channel fixed point.
    FixedPoint,
}

impl Default for SteadyMethod {
    fn default() -> Self {
        SteadyMethod::Simulate(SteadyOptions::default())
    }
}

/// `(J_h, J_c)` in the steady regime by the chosen method.
pub fn steady_currents(config: &CollisionConfig, method: &SteadyMethod) -> Result<(f64, f64)> {
    match method {
        SteadyMethod::Simulate(opts) => {
            let r = simulate_steady(config, opts)?;
            Ok((r.steady_current_hot, r.steady_current_cold))
        }
        SteadyMethod::FixedPoint => {
            let s = steady_state_exact(config)?;
            Ok((s.current_hot, s.current_cold))
        }
    }
}
