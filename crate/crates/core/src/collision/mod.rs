//! Reservoir ancillas, partial-swap gates and the repeated collision map.
//!
//! Register order for one collision is `(S_A, S_B, R_h, R_c)`, each a qubit
//! with basis `|0⟩, |1⟩` and `σ_z|0⟩ = +|0⟩`, so `|1⟩` is the ground state of
//! `H = (ω/2) σ_z`.

mod channel;
mod gates;
mod step;

use std::f64::consts::{FRAC_PI_2, TAU};

pub use channel::CollisionChannel;
pub use gates::{
    ancilla_hamiltonian, interaction_hamiltonian, step_unitary, swap_matrix, swap_unitary,
    swap_unitary_on, REG_HOT, REG_COLD, REG_SA, REG_SB,
};
pub use step::{collision_step, heat_exchange, run_trajectory, CollisionOutcome, TrajectoryRecord};

use crate::qdm::{ComplexSquareMatrix, DensityOperator, C64};
use crate::{Error, Result};

/// Recipe for the state of every ancilla in one reservoir.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AncillaSpec {
    /// Effective temperature `T` (k_B = 1), fixed by the populations.
    pub temperature: f64,
    /// Relative phase `φ` of the coherent component, in `[0, 2π)`.
    pub phase: f64,
    /// Weight `p` of the pure coherent component.
    pub coherence_weight: f64,
    /// Level splitting `ω` (ħ = 1).
    pub frequency: f64,
}

impl AncillaSpec {
    /// Phases are reduced into `[0, 2π)`.
    pub fn new(temperature: f64, phase: f64, coherence_weight: f64, frequency: f64) -> Result<Self> {
        if !(temperature > 0.0) {
            return Err(Error::Domain(format!("temperature must be > 0, got {temperature}")));
        }
        if !(frequency > 0.0) || !frequency.is_finite() {
            return Err(Error::Domain(format!("frequency must be > 0, got {frequency}")));
        }
        if !(0.0..=1.0).contains(&coherence_weight) {
            return Err(Error::Domain(format!(
                "coherence weight must lie in [0, 1], got {coherence_weight}"
            )));
        }
        if !phase.is_finite() {
            return Err(Error::Domain(format!("phase must be finite, got {phase}")));
        }
        Ok(Self {
            temperature,
            phase: phase.rem_euclid(TAU),
            coherence_weight,
            frequency,
        })
    }

    pub fn thermal(temperature: f64, frequency: f64) -> Result<Self> {
        Self::new(temperature, 0.0, 0.0, frequency)
    }

    pub fn beta(&self) -> f64 {
        1.0 / self.temperature
    }

    /// `Z = Tr e^{-βH} = 2 cosh(βω/2)`.
    pub fn partition_function(&self) -> f64 {
        2.0 * (0.5 * self.beta() * self.frequency).cosh()
    }

    /// Populations of `|0⟩` (excited) and `|1⟩` (ground).
    fn populations(&self) -> (f64, f64) {
        let x = self.beta() * self.frequency;
        (1.0 / (1.0 + x.exp()), 1.0 / (1.0 + (-x).exp()))
    }

    /// `ρ_β = e^{-βH}/Z`.
    pub fn thermal_state(&self) -> DensityOperator {
        let (excited, ground) = self.populations();
        DensityOperator::from_populations(&[excited, ground], vec![2])
            .expect("Gibbs populations are a valid state")
    }

    /// `p|ψ⟩⟨ψ| + (1-p)ρ_β` with
    /// `|ψ⟩ = (e^{-βω/4}|0⟩ + e^{iφ+βω/4}|1⟩)/√Z`.
    ///
    /// The diagonal is that of [`AncillaSpec::thermal_state`]; the coherence is
    /// `ρ_01 = (p/Z) e^{-iφ}`.
    pub fn coherent_state(&self) -> DensityOperator {
        let (excited, ground) = self.populations();
        // 1/Z without overflow for large βω.
        let inv_z = 0.5 / (0.5 * self.beta() * self.frequency).cosh();
        let off = C64::from_polar(self.coherence_weight * inv_z, -self.phase);
        let m = ComplexSquareMatrix::from_row_slice(
            2,
            &[C64::new(excited, 0.0), off, off.conj(), C64::new(ground, 0.0)],
        )
        .expect("2x2");
        DensityOperator::new(m, vec![2]).expect("coherent ancilla is a valid state for p <= 1")
    }

    /// Ancilla state used in collisions: thermal when `p = 0`.
    pub fn state(&self) -> DensityOperator {
        if self.coherence_weight == 0.0 {
            self.thermal_state()
        } else {
            self.coherent_state()
        }
    }
}

pub fn thermal_state(spec: &AncillaSpec) -> DensityOperator {
    spec.thermal_state()
}

pub fn coherent_ancilla(spec: &AncillaSpec) -> DensityOperator {
    spec.coherent_state()
}

/// Dimensionless partial-swap strengths.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CouplingParams {
    /// Subsystem–ancilla strength `γ = 2gτ`.
    pub gamma: f64,
    /// Subsystem–subsystem strength `δ`.
    pub delta: f64,
}

impl CouplingParams {
    pub fn new(gamma: f64, delta: f64) -> Result<Self> {
        for (name, v) in [("gamma", gamma), ("delta", delta)] {
            if !(0.0..=FRAC_PI_2 + 1e-15).contains(&v) {
                return Err(Error::Domain(format!("{name} must lie in [0, π/2], got {v}")));
            }
        }
        Ok(Self { gamma, delta })
    }
}

/// Full parameterization of a two-reservoir collision experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct CollisionConfig {
    pub hot: AncillaSpec,
    pub cold: AncillaSpec,
    pub coupling: CouplingParams,
    /// State of `(S_A, S_B)`.
    pub initial_system: DensityOperator,
}

impl CollisionConfig {
    pub fn new(
        hot: AncillaSpec,
        cold: AncillaSpec,
        coupling: CouplingParams,
        initial_system: DensityOperator,
    ) -> Result<Self> {
        let scale = hot.frequency.max(cold.frequency);
        if (hot.frequency - cold.frequency).abs() > 1e-12 * scale {
            return Err(Error::Domain(format!(
                "reservoirs must be resonant: hot ω = {}, cold ω = {}",
                hot.frequency, cold.frequency
            )));
        }
        if initial_system.dims() != [2, 2] {
            return Err(Error::InvalidArgument(format!(
                "initial system must have dims [2, 2], got {:?}",
                initial_system.dims()
            )));
        }
        Ok(Self {
            hot,
            cold,
            coupling,
            initial_system,
        })
    }

    /// `|11⟩`, the ground state of both subsystems.
    pub fn ground_system() -> DensityOperator {
        DensityOperator::basis_state(&[1, 1], vec![2, 2]).expect("basis state")
    }

    /// ω = 1, system in `|11⟩`, hot phase `dphi` and cold phase 0, both
    /// reservoirs with coherence weight `p`.
    pub fn standard(
        t_hot: f64,
        t_cold: f64,
        dphi: f64,
        p: f64,
        coupling: CouplingParams,
    ) -> Result<Self> {
        Self::new(
            AncillaSpec::new(t_hot, dphi, p, 1.0)?,
            AncillaSpec::new(t_cold, 0.0, p, 1.0)?,
            coupling,
            Self::ground_system(),
        )
    }

    pub fn frequency(&self) -> f64 {
        self.hot.frequency
    }

    /// `φ_h − φ_c` reduced into `[0, 2π)`.
    pub fn phase_difference(&self) -> f64 {
        (self.hot.phase - self.cold.phase).rem_euclid(TAU)
    }

    /// Same experiment with both coherence weights replaced.
    pub fn with_coherence(&self, p: f64) -> Result<Self> {
        let mut out = self.clone();
        out.hot = AncillaSpec::new(self.hot.temperature, self.hot.phase, p, self.hot.frequency)?;
        out.cold = AncillaSpec::new(self.cold.temperature, self.cold.phase, p, self.cold.frequency)?;
        Ok(out)
    }

    /// Same experiment with hot phase `cold.phase + dphi`.
    pub fn with_phase_difference(&self, dphi: f64) -> Result<Self> {
        let mut out = self.clone();
        out.hot = AncillaSpec::new(
            self.hot.temperature,
            self.cold.phase + dphi,
            self.hot.coherence_weight,
            self.hot.frequency,
        )?;
        Ok(out)
    }

    pub fn with_temperatures(&self, t_hot: f64, t_cold: f64) -> Result<Self> {
        let mut out = self.clone();
        out.hot = AncillaSpec::new(t_hot, self.hot.phase, self.hot.coherence_weight, self.hot.frequency)?;
        out.cold =
            AncillaSpec::new(t_cold, self.cold.phase, self.cold.coherence_weight, self.cold.frequency)?;
        Ok(out)
    }

    pub fn with_coupling(&self, coupling: CouplingParams) -> Self {
        let mut out = self.clone();
        out.coupling = coupling;
        out
    }
}
