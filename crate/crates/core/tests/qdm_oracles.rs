mod common;

use approx::assert_abs_diff_eq;
use common::{brute_partial_trace, random_density, random_hermitian, rng};
use qcollide::qdm::{
    expectation, hermitian_eig, hermitian_exp, kron, matrix_log, partial_trace, pauli, relative_entropy,
    von_neumann_entropy, ComplexSquareMatrix, DensityOperator, C64, DEFAULT_LOG_CLAMP,
};

#[test]
fn kron_matches_index_arithmetic() {
    let mut r = rng(1);
    let a = common::ginibre(3, &mut r);
    let b = common::ginibre(2, &mut r);
    let k = kron(&a, &b);
    assert_eq!(k.dim(), 6);
    for i in 0..6 {
        for j in 0..6 {
            assert_eq!(k[(i, j)], a[(i / 2, j / 2)] * b[(i % 2, j % 2)]);
        }
    }
}

#[test]
fn three_party_partial_trace_matches_index_sum() {
    let mut r = rng(2);
    let dims = [2, 3, 2];
    let rho = random_density(&dims, &mut r);
    for keep in [vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 1, 2]] {
        let fast = partial_trace(&rho, &keep).unwrap();
        let slow = brute_partial_trace(rho.matrix(), &dims, &keep);
        assert!(fast.matrix().max_abs_diff(&slow) <= 1e-12, "keep {keep:?}");
        assert_abs_diff_eq!(fast.matrix().trace().re, 1.0, epsilon = 1e-12);
        let kept: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
        assert_eq!(fast.dims(), &kept[..]);
    }
}

#[test]
fn eight_dim_eigendecomposition_reconstructs() {
    let mut r = rng(3);
    for _ in 0..10 {
        let h = random_hermitian(8, &mut r);
        let eig = hermitian_eig(&h).unwrap();
        assert!(eig.reconstruct().max_abs_diff(&h) <= 1e-10);
        assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        let v = &eig.eigenvectors;
        assert!((&v.adjoint() * v).max_abs_diff(&ComplexSquareMatrix::identity(8)) <= 1e-12);
    }
}

#[test]
fn log_round_trips_through_exp() {
    let mut r = rng(4);
    for dims in [vec![2], vec![2, 2], vec![2, 2, 2]] {
        let rho = random_density(&dims, &mut r);
        let back = hermitian_exp(&matrix_log(&rho, DEFAULT_LOG_CLAMP).unwrap()).unwrap();
        assert!(back.max_abs_diff(rho.matrix()) <= 1e-10);
    }
}

#[test]
fn clamped_log_of_pure_state() {
    let rho = DensityOperator::from_populations(&[1.0, 0.0], vec![2]).unwrap();
    let l = matrix_log(&rho, 1e-20).unwrap();
    assert_abs_diff_eq!(l[(0, 0)].re, 0.0, epsilon = 1e-15);
    assert_abs_diff_eq!(l[(1, 1)].re, 1e-20f64.ln(), epsilon = 1e-12);
}

/// `Σ p_i ln p_i − Σ_ij p_i |⟨a_i|b_j⟩|² ln q_j`.
fn relative_entropy_oracle(r1: &DensityOperator, r2: &DensityOperator) -> f64 {
    let e1 = hermitian_eig(r1.matrix()).unwrap();
    let e2 = hermitian_eig(r2.matrix()).unwrap();
    let n = r1.dim();
    let mut d = 0.0;
    for i in 0..n {
        let p = e1.eigenvalues[i];
        d += p * p.ln();
        for j in 0..n {
            let mut overlap = C64::new(0.0, 0.0);
            for k in 0..n {
                overlap += e1.eigenvectors[(k, i)].conj() * e2.eigenvectors[(k, j)];
            }
            d -= p * overlap.norm_sqr() * e2.eigenvalues[j].ln();
        }
    }
    d
}

#[test]
fn relative_entropy_matches_eigenbasis_sum() {
    let mut r = rng(5);
    for _ in 0..20 {
        let a = random_density(&[2], &mut r);
        let b = random_density(&[2], &mut r);
        let d = relative_entropy(&a, &b).unwrap();
        assert!(!d.support_violated);
        assert!((d.value - relative_entropy_oracle(&a, &b)).abs() <= 1e-10);
        assert!(d.value >= -1e-10);
    }
}

#[test]
fn relative_entropy_closed_forms() {
    let pure = DensityOperator::from_populations(&[1.0, 0.0], vec![2]).unwrap();
    let half = DensityOperator::maximally_mixed(vec![2]).unwrap();
    assert_abs_diff_eq!(relative_entropy(&pure, &half).unwrap().value, 2f64.ln(), epsilon = 1e-14);
    assert!(relative_entropy(&half, &pure).unwrap().support_violated);
    let mut r = rng(6);
    let s = random_density(&[2, 2], &mut r);
    assert_abs_diff_eq!(relative_entropy(&s, &s).unwrap().value, 0.0, epsilon = 1e-12);
    assert!(relative_entropy(&s, &half).is_err());
}

#[test]
fn thermal_qubit_entropy_and_energy() {
    let b = 1.0f64;
    let p0 = 1.0 / (1.0 + b.exp());
    let rho = DensityOperator::from_populations(&[p0, 1.0 - p0], vec![2]).unwrap();
    let scalar = -(p0 * p0.ln() + (1.0 - p0) * (1.0 - p0).ln());
    assert_abs_diff_eq!(von_neumann_entropy(&rho).unwrap(), scalar, epsilon = 1e-15);
    let h = pauli::z().scale(C64::new(0.5, 0.0));
    assert_abs_diff_eq!(expectation(&h, &rho).unwrap(), -0.5 * 0.5f64.tanh(), epsilon = 1e-15);
}
