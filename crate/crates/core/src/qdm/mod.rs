//! Dense complex linear algebra and quantum-state primitives.
//!
//! All matrices are dense; tensor products use the left factor as the slower
//! index throughout the crate.

mod density;
mod matrix;
mod spectral;

pub use density::{
    apply_local_left, conjugate_local, embed_local, partial_trace, partial_trace_operator, DensityOperator,
    HERMITICITY_TOL, POSITIVITY_TOL, TRACE_TOL,
};
pub use matrix::{kron, pauli, ComplexSquareMatrix};
pub use spectral::{
    clamped_log, expectation, hermitian_eig, hermitian_exp, matrix_log, relative_entropy,
    relative_entropy_with_log, von_neumann_entropy, ClampedLog, HermitianEigenDecomposition,
    RelativeEntropy, DEFAULT_LOG_CLAMP, EIG_HERMITICITY_TOL, EXPECTATION_IMAG_TOL, SUPPORT_EPS,
};

pub(crate) use spectral::expectation_raw;

pub type C64 = nalgebra::Complex<f64>;
