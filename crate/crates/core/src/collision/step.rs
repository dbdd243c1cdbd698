use super::gates::{ancilla_hamiltonian, swap_unitary, STEP_DIMS};
use super::{CollisionConfig, CouplingParams, REG_COLD, REG_HOT, REG_SA, REG_SB};
use crate::qdm::{conjugate_local, expectation, kron, partial_trace, ComplexSquareMatrix, DensityOperator};
use crate::{Error, Result};

/// The three marginals after one collision.
#[derive(Clone, Debug, PartialEq)]
pub struct CollisionOutcome {
    pub system: DensityOperator,
    pub hot: DensityOperator,
    pub cold: DensityOperator,
}

/// One row of a trajectory: heats of collision `step` and the system after it.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryRecord {
    pub step: usize,
    /// Energy gained by the hot reservoir, `ΔQ^{R_h}`.
    pub heat_hot: f64,
    /// Energy gained by the cold reservoir, `ΔQ^{R_c}`.
    pub heat_cold: f64,
    pub system_state: DensityOperator,
}

/// Applies `V` on `(S_A, S_B)`, then `U` on `(S_A, R_h)`, then `U` on
/// `(S_B, R_c)` to a 16-dimensional operator.
pub(crate) fn evolve_step_operator(
    joint: &ComplexSquareMatrix,
    coupling: &CouplingParams,
) -> Result<ComplexSquareMatrix> {
    let v = swap_unitary(coupling.delta);
    let u = swap_unitary(coupling.gamma);
    let m = conjugate_local(joint, &STEP_DIMS, &v, &[REG_SA, REG_SB])?;
    let m = conjugate_local(&m, &STEP_DIMS, &u, &[REG_SA, REG_HOT])?;
    conjugate_local(&m, &STEP_DIMS, &u, &[REG_SB, REG_COLD])
}

/// `𝒰 (ρ_S ⊗ η_h ⊗ η_c) 𝒰†` reduced to its three marginals.
pub fn collision_step(
    system: &DensityOperator,
    hot: &DensityOperator,
    cold: &DensityOperator,
    coupling: &CouplingParams,
) -> Result<CollisionOutcome> {
    for (name, rho, dim) in [("system", system, 4), ("hot ancilla", hot, 2), ("cold ancilla", cold, 2)] {
        if rho.dim() != dim {
            return Err(Error::InvalidArgument(format!(
                "{name} has dimension {}, expected {dim}",
                rho.dim()
            )));
        }
    }
    let joint = kron(&kron(system.matrix(), hot.matrix()), cold.matrix());
    let evolved = evolve_step_operator(&joint, coupling)?;
    let joint = DensityOperator::from_evolved(evolved, STEP_DIMS.to_vec())?;
    let sys = partial_trace(&joint, &[REG_SA, REG_SB])?;
    let hot = partial_trace(&joint, &[REG_HOT])?;
    let cold = partial_trace(&joint, &[REG_COLD])?;
    for rho in [&sys, &hot, &cold] {
        rho.check_positivity()?;
    }
    Ok(CollisionOutcome { system: sys, hot, cold })
}

/// `Tr[(ω/2)σ_z (after − before)]`; positive when the ancilla gained energy.
pub fn heat_exchange(after: &DensityOperator, before: &DensityOperator, frequency: f64) -> Result<f64> {
    if after.dim() != 2 || before.dim() != 2 {
        return Err(Error::InvalidArgument("heat exchange needs two qubit states".into()));
    }
    let h = ancilla_hamiltonian(frequency);
    Ok(expectation(&h, after)? - expectation(&h, before)?)
}

/// Runs `n_max` collisions, each with fresh ancillas built from the specs.
pub fn run_trajectory(config: &CollisionConfig, n_max: usize) -> Result<Vec<TrajectoryRecord>> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("trajectory needs at least one collision".into()));
    }
    let omega = config.frequency();
    let mut system = config.initial_system.clone();
    let mut records = Vec::with_capacity(n_max);
    for step in 1..=n_max {
        let hot = config.hot.state();
        let cold = config.cold.state();
        let out = collision_step(&system, &hot, &cold, &config.coupling).map_err(|e| e.at_step(step))?;
        let heat_hot = heat_exchange(&out.hot, &hot, omega).map_err(|e| e.at_step(step))?;
        let heat_cold = heat_exchange(&out.cold, &cold, omega).map_err(|e| e.at_step(step))?;
        system = out.system;
        records.push(TrajectoryRecord {
            step,
            heat_hot,
            heat_cold,
            system_state: system.clone(),
        });
    }
    Ok(records)
}
