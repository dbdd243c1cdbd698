use nalgebra::SymmetricEigen;

use super::density::{clip_spectrum, DensityOperator};
use super::matrix::ComplexSquareMatrix;
use super::C64;
use crate::{Error, Result};

/// Hermiticity tolerance accepted by [`hermitian_eig`].
pub const EIG_HERMITICITY_TOL: f64 = 1e-10;
pub const DEFAULT_LOG_CLAMP: f64 = 1e-300;
/// Eigenvalues at or below this are treated as outside the support.
pub const SUPPORT_EPS: f64 = 1e-14;
pub const EXPECTATION_IMAG_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct HermitianEigenDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector of `eigenvalues[k]`.
    pub eigenvectors: ComplexSquareMatrix,
}

impl HermitianEigenDecomposition {
    /// `V f(Λ) V†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexSquareMatrix {
        let v = self.eigenvectors.as_dmatrix();
        let n = v.nrows();
        let mut scaled = v.clone();
        for (k, &lam) in self.eigenvalues.iter().enumerate() {
            let fk = f(lam);
            for i in 0..n {
                scaled[(i, k)] *= fk;
            }
        }
        ComplexSquareMatrix::from_dmatrix(scaled * v.adjoint()).expect("square by construction")
    }

    pub fn reconstruct(&self) -> ComplexSquareMatrix {
        self.reconstruct_with(|x| x)
    }

    /// Diagonal of `V† ρ V`: the weight of `ρ` on each eigenvector.
    pub fn weights_of(&self, rho: &ComplexSquareMatrix) -> Vec<f64> {
        let v = self.eigenvectors.as_dmatrix();
        let rv = rho.as_dmatrix() * v;
        (0..v.ncols())
            .map(|k| {
                let mut acc = C64::new(0.0, 0.0);
                for i in 0..v.nrows() {
                    acc += v[(i, k)].conj() * rv[(i, k)];
                }
                acc.re
            })
            .collect()
    }
}

pub fn hermitian_eig(m: &ComplexSquareMatrix) -> Result<HermitianEigenDecomposition> {
    let defect = m.hermiticity_defect();
    if defect > EIG_HERMITICITY_TOL {
        return Err(Error::InvalidArgument(format!(
            "matrix is not Hermitian (max |M - M†| = {defect:e})"
        )));
    }
    let n = m.dim();
    let eig = SymmetricEigen::new(m.hermitian_part().into_dmatrix());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = nalgebra::DMatrix::from_fn(n, n, |i, k| eig.eigenvectors[(i, order[k])]);
    Ok(HermitianEigenDecomposition {
        eigenvalues,
        eigenvectors: ComplexSquareMatrix::from_dmatrix(vectors)?,
    })
}

/// Matrix logarithm with the number of eigenvalues that had to be clamped.
#[derive(Clone, Debug)]
pub struct ClampedLog {
    pub log: ComplexSquareMatrix,
    pub clamped: usize,
}

pub fn clamped_log(rho: &DensityOperator, clamp: f64) -> Result<ClampedLog> {
    if !(clamp > 0.0) {
        return Err(Error::InvalidArgument(format!("log clamp must be positive, got {clamp}")));
    }
    let eig = hermitian_eig(rho.matrix())?;
    clip_spectrum(eig.eigenvalues.clone())?;
    let clamped = eig.eigenvalues.iter().filter(|&&x| x < clamp).count();
    let log = eig.reconstruct_with(|x| x.max(clamp).ln());
    Ok(ClampedLog {
        log: log.hermitian_part(),
        clamped,
    })
}

/// `ln ρ` with eigenvalues below `clamp` raised to `clamp` first.
pub fn matrix_log(rho: &DensityOperator, clamp: f64) -> Result<ComplexSquareMatrix> {
    clamped_log(rho, clamp).map(|l| l.log)
}

fn entropy_of_spectrum(spectrum: &[f64]) -> f64 {
    -spectrum
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x * x.ln())
        .sum::<f64>()
}

/// `-Tr ρ ln ρ` in nats.
pub fn von_neumann_entropy(rho: &DensityOperator) -> Result<f64> {
    Ok(entropy_of_spectrum(&rho.spectrum()?))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RelativeEntropy {
    pub value: f64,
    /// Some weight of the first argument lies outside the support of the
    /// second, so `value` is dominated by the log clamp.
    pub support_violated: bool,
}

/// `D(ρ1‖ρ2) = Tr ρ1 ln ρ1 − Tr ρ1 ln ρ2`.
pub fn relative_entropy(rho1: &DensityOperator, rho2: &DensityOperator) -> Result<RelativeEntropy> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho1.dim(),
            found: rho2.dim(),
        });
    }
    let neg_s1 = -von_neumann_entropy(rho1)?;
    let eig2 = hermitian_eig(rho2.matrix())?;
    clip_spectrum(eig2.eigenvalues.clone())?;
    let weights = eig2.weights_of(rho1.matrix());
    let mut cross = 0.0;
    let mut support_violated = false;
    for (&mu, &w) in eig2.eigenvalues.iter().zip(&weights) {
        if mu <= SUPPORT_EPS && w > SUPPORT_EPS {
            support_violated = true;
        }
        cross += w * mu.max(DEFAULT_LOG_CLAMP).ln();
    }
    Ok(RelativeEntropy {
        value: neg_s1 - cross,
        support_violated,
    })
}

/// Relative entropy against a reference given through its logarithm.
///
/// Useful when `ln ρ2` has structure (e.g. a kronecker sum for product states)
/// that makes a full eigendecomposition of `ρ2` unnecessary.
pub fn relative_entropy_with_log(rho1: &DensityOperator, log_rho2: &ComplexSquareMatrix) -> Result<f64> {
    let neg_s1 = -von_neumann_entropy(rho1)?;
    let cross = rho1.matrix().trace_product(log_rho2)?;
    Ok(neg_s1 - cross.re)
}

/// `Tr(h ρ)`; fails if the imaginary part exceeds [`EXPECTATION_IMAG_TOL`].
pub fn expectation(h: &ComplexSquareMatrix, rho: &DensityOperator) -> Result<f64> {
    expectation_raw(h, rho.matrix())
}

pub(crate) fn expectation_raw(h: &ComplexSquareMatrix, m: &ComplexSquareMatrix) -> Result<f64> {
    if h.dim() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: h.dim(),
        });
    }
    let z = h.trace_product(m)?;
    if z.im.abs() > EXPECTATION_IMAG_TOL {
        return Err(Error::Numerical(format!(
            "expectation value has imaginary part {:e}",
            z.im
        )));
    }
    Ok(z.re)
}

/// `exp` of a Hermitian matrix through its eigendecomposition.
pub fn hermitian_exp(m: &ComplexSquareMatrix) -> Result<ComplexSquareMatrix> {
    Ok(hermitian_eig(m)?.reconstruct_with(f64::exp))
}
