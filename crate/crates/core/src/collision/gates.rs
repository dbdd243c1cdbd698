use super::CouplingParams;
use crate::qdm::{embed_local, kron, pauli, ComplexSquareMatrix, C64};
use crate::Result;

pub const REG_SA: usize = 0;
pub const REG_SB: usize = 1;
pub const REG_HOT: usize = 2;
pub const REG_COLD: usize = 3;

pub(crate) const STEP_DIMS: [usize; 4] = [2, 2, 2, 2];

/// Swap operator in the basis `|00⟩, |01⟩, |10⟩, |11⟩`.
pub fn swap_matrix() -> ComplexSquareMatrix {
    ComplexSquareMatrix::from_real_rows(
        4,
        &[
            1.0, 0.0, 0.0, 0.0, //
            0.0, 0.0, 1.0, 0.0, //
            0.0, 1.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, 1.0,
        ],
    )
    .expect("4x4")
}

/// Partial swap `cos θ · I + i sin θ · S`.
pub fn swap_unitary(theta: f64) -> ComplexSquareMatrix {
    let id = ComplexSquareMatrix::identity(4).scale(C64::new(theta.cos(), 0.0));
    &id + &swap_matrix().scale(C64::new(0.0, theta.sin()))
}

/// Partial swap on qubits `a`, `b` of an `n`-qubit register.
pub fn swap_unitary_on(theta: f64, a: usize, b: usize, n_qubits: usize) -> Result<ComplexSquareMatrix> {
    embed_local(&vec![2; n_qubits], &swap_unitary(theta), &[a, b])
}

/// `g (σ_x σ_x + σ_y σ_y + σ_z σ_z)` on two qubits.
pub fn interaction_hamiltonian(g: f64) -> ComplexSquareMatrix {
    let xx = kron(&pauli::x(), &pauli::x());
    let yy = kron(&pauli::y(), &pauli::y());
    let zz = kron(&pauli::z(), &pauli::z());
    (&(&xx + &yy) + &zz).scale(C64::new(g, 0.0))
}

/// `(ω/2) σ_z`.
pub fn ancilla_hamiltonian(frequency: f64) -> ComplexSquareMatrix {
    pauli::z().scale(C64::new(0.5 * frequency, 0.0))
}

/// Monolithic 16×16 unitary of one collision, `U_{S_B,R_c} U_{S_A,R_h} V_{S_A,S_B}`.
pub fn step_unitary(coupling: &CouplingParams) -> ComplexSquareMatrix {
    let v = swap_unitary_on(coupling.delta, REG_SA, REG_SB, 4).expect("register");
    let ua = swap_unitary_on(coupling.gamma, REG_SA, REG_HOT, 4).expect("register");
    let ub = swap_unitary_on(coupling.gamma, REG_SB, REG_COLD, 4).expect("register");
    &(&ub * &ua) * &v
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn endpoints() {
        assert!(swap_unitary(0.0).max_abs_diff(&ComplexSquareMatrix::identity(4)) < 1e-16);
        let full = swap_matrix().scale(C64::new(0.0, 1.0));
        assert!(swap_unitary(FRAC_PI_2).max_abs_diff(&full) < 1e-16);
    }

    #[test]
    fn unitary() {
        let u = swap_unitary(FRAC_PI_4);
        let prod = &u.adjoint() * &u;
        assert!(prod.max_abs_diff(&ComplexSquareMatrix::identity(4)) < 1e-14);
    }

    #[test]
    fn swap_exchanges_product_states() {
        // S (a ⊗ b) S = b ⊗ a for operators.
        let a = pauli::x();
        let b = pauli::z();
        let s = swap_matrix();
        let lhs = &(&s * &kron(&a, &b)) * &s;
        assert!(lhs.max_abs_diff(&kron(&b, &a)) < 1e-16);
    }

    #[test]
    fn heisenberg_exponential_identity() {
        // exp(i φ/2 Σ σσ) = e^{-iφ/2}(cos φ I + i sin φ S)
        let phi: f64 = 0.37;
        let h = interaction_hamiltonian(0.5 * phi);
        let eig = crate::qdm::hermitian_eig(&h).unwrap();
        let v = eig.eigenvectors.as_dmatrix();
        let diag = nalgebra::DMatrix::from_fn(4, 4, |i, j| {
            if i == j {
                C64::from_polar(1.0, eig.eigenvalues[i])
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let lhs = ComplexSquareMatrix::from_dmatrix(v * diag * v.adjoint()).unwrap();
        let rhs = swap_unitary(phi).scale(C64::from_polar(1.0, -0.5 * phi));
        assert!(lhs.max_abs_diff(&rhs) < 1e-14);
    }

    #[test]
    fn interaction_conserves_local_energy() {
        let h_int = interaction_hamiltonian(1.0);
        let h0 = &kron(&ancilla_hamiltonian(1.0), &pauli::identity())
            + &kron(&pauli::identity(), &ancilla_hamiltonian(1.0));
        assert!(h_int.commutator(&h0).max_abs() <= 1e-12);
    }
}
