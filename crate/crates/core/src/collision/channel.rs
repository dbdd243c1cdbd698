use nalgebra::{DMatrix, DVector};

use super::gates::{ancilla_hamiltonian, STEP_DIMS};
use super::step::evolve_step_operator;
use super::{CollisionConfig, REG_COLD, REG_HOT, REG_SA, REG_SB};
use crate::qdm::{
    expectation_raw, kron, partial_trace_operator, ComplexSquareMatrix, DensityOperator, C64,
};
use crate::{Error, Result};

/// The reduced one-collision map as a linear operator on the 16 entries of
/// the system state, together with the two heat functionals.
///
/// With fresh ancillas every collision the reduced dynamics is the repeated
/// application of one fixed channel, so a trajectory needs only a 16×16
/// matrix-vector product per step.
#[derive(Clone, Debug)]
pub struct CollisionChannel {
    transfer: DMatrix<C64>,
    heat_hot: DVector<C64>,
    heat_cold: DVector<C64>,
}

/// Row-major flattening index of a 4×4 system entry.
fn vec_index(i: usize, j: usize) -> usize {
    4 * i + j
}

impl CollisionChannel {
    pub fn new(config: &CollisionConfig) -> Result<Self> {
        let hot = config.hot.state();
        let cold = config.cold.state();
        let h = ancilla_hamiltonian(config.frequency());
        let e_hot = expectation_raw(&h, hot.matrix())?;
        let e_cold = expectation_raw(&h, cold.matrix())?;
        let anc = kron(hot.matrix(), cold.matrix());

        let mut transfer = DMatrix::zeros(16, 16);
        let mut heat_hot = DVector::zeros(16);
        let mut heat_cold = DVector::zeros(16);
        for i in 0..4 {
            for j in 0..4 {
                let mut unit = ComplexSquareMatrix::zeros(4);
                unit[(i, j)] = C64::new(1.0, 0.0);
                let evolved = evolve_step_operator(&kron(&unit, &anc), &config.coupling)?;
                let sys = partial_trace_operator(&evolved, &STEP_DIMS, &[REG_SA, REG_SB])?;
                let h_out = partial_trace_operator(&evolved, &STEP_DIMS, &[REG_HOT])?;
                let c_out = partial_trace_operator(&evolved, &STEP_DIMS, &[REG_COLD])?;
                let col = vec_index(i, j);
                for a in 0..4 {
                    for b in 0..4 {
                        transfer[(vec_index(a, b), col)] = sys[(a, b)];
                    }
                }
                let diag = if i == j { 1.0 } else { 0.0 };
                heat_hot[col] = h.trace_product(&h_out)? - C64::new(e_hot * diag, 0.0);
                heat_cold[col] = h.trace_product(&c_out)? - C64::new(e_cold * diag, 0.0);
            }
        }
        Ok(Self {
            transfer,
            heat_hot,
            heat_cold,
        })
    }

    pub fn transfer_matrix(&self) -> &DMatrix<C64> {
        &self.transfer
    }

    pub fn flatten(state: &ComplexSquareMatrix) -> DVector<C64> {
        DVector::from_fn(16, |k, _| state[(k / 4, k % 4)])
    }

    pub fn unflatten(v: &DVector<C64>) -> ComplexSquareMatrix {
        ComplexSquareMatrix::from_fn(4, |i, j| v[vec_index(i, j)])
    }

    pub fn apply(&self, state: &DVector<C64>) -> DVector<C64> {
        &self.transfer * state
    }

    /// Heats `(J_h, J_c)` of the next collision from the pre-collision state.
    pub fn heats(&self, state: &DVector<C64>) -> (f64, f64) {
        (self.heat_hot.dot(state).re, self.heat_cold.dot(state).re)
    }

    /// The unique trace-one fixed point of the channel.
    pub fn fixed_point(&self) -> Result<DensityOperator> {
        let mut a = &self.transfer - DMatrix::identity(16, 16);
        let mut rhs = DVector::zeros(16);
        // Replace one balance equation by normalization.
        for col in 0..16 {
            a[(0, col)] = C64::new(0.0, 0.0);
        }
        for i in 0..4 {
            a[(0, vec_index(i, i))] = C64::new(1.0, 0.0);
        }
        rhs[0] = C64::new(1.0, 0.0);
        let lu = a.lu();
        let x = lu
            .solve(&rhs)
            .ok_or_else(|| Error::Numerical("collision channel has no unique steady state".into()))?;
        let residual = (&self.transfer * &x - &x).camax();
        if !(residual < 1e-11) {
            return Err(Error::Numerical(format!(
                "steady-state solve is ill-conditioned (residual {residual:e})"
            )));
        }
        let rho = Self::unflatten(&x).hermitian_part();
        let rho = DensityOperator::new(rho, vec![2, 2])?;
        Ok(rho)
    }
}
