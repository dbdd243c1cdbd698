#![allow(dead_code)]

use nalgebra::DMatrix;
use qcollide::qdm::{hermitian_eig, ComplexSquareMatrix, DensityOperator, C64};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn ginibre(n: usize, rng: &mut impl Rng) -> ComplexSquareMatrix {
    ComplexSquareMatrix::from_fn(n, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// `A A† / Tr(A A†)`, full rank with probability one.
pub fn random_density(dims: &[usize], rng: &mut impl Rng) -> DensityOperator {
    let n: usize = dims.iter().product();
    let a = ginibre(n, rng);
    let m = &a * &a.adjoint();
    let tr = m.trace().re;
    DensityOperator::new(m.scale(C64::new(1.0 / tr, 0.0)).hermitian_part(), dims.to_vec()).unwrap()
}

pub fn random_hermitian(n: usize, rng: &mut impl Rng) -> ComplexSquareMatrix {
    ginibre(n, rng).hermitian_part()
}

/// `exp(iH)` for a random Hermitian `H`.
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> ComplexSquareMatrix {
    let eig = hermitian_eig(&random_hermitian(n, rng).scale(C64::new(3.0, 0.0))).unwrap();
    let v = eig.eigenvectors.as_dmatrix();
    let d = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::from_polar(1.0, eig.eigenvalues[i])
        } else {
            C64::new(0.0, 0.0)
        }
    });
    ComplexSquareMatrix::from_dmatrix(v * d * v.adjoint()).unwrap()
}

/// Marginal by explicit summation over every basis index, for registers of
/// qubits or qudits with dims `dims`.
pub fn brute_partial_trace(m: &ComplexSquareMatrix, dims: &[usize], keep: &[usize]) -> ComplexSquareMatrix {
    let total: usize = dims.iter().product();
    let digits = |mut idx: usize| {
        let mut d = vec![0; dims.len()];
        for k in (0..dims.len()).rev() {
            d[k] = idx % dims[k];
            idx /= dims[k];
        }
        d
    };
    let kept_index = |d: &[usize]| keep.iter().fold(0, |acc, &k| acc * dims[k] + d[k]);
    let kept_dim: usize = keep.iter().map(|&k| dims[k]).product();
    let mut out = ComplexSquareMatrix::zeros(kept_dim);
    for i in 0..total {
        let di = digits(i);
        for j in 0..total {
            let dj = digits(j);
            let traced_equal = (0..dims.len()).filter(|k| !keep.contains(k)).all(|k| di[k] == dj[k]);
            if traced_equal {
                let (a, b) = (kept_index(&di), kept_index(&dj));
                out[(a, b)] += m[(i, j)];
            }
        }
    }
    out
}
