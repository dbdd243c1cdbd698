use super::matrix::{kron, ComplexSquareMatrix};
use super::spectral::hermitian_eig;
use super::C64;
use crate::{Error, Result};

pub const HERMITICITY_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues in `[-POSITIVITY_TOL, 0)` are treated as roundoff.
pub const POSITIVITY_TOL: f64 = 1e-10;

/// Positive unit-trace operator on a tensor product of subsystems.
///
/// `dims` lists subsystem dimensions in register order; their product is the
/// matrix dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexSquareMatrix,
    dims: Vec<usize>,
}

impl DensityOperator {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: ComplexSquareMatrix, dims: Vec<usize>) -> Result<Self> {
        let rho = Self::from_evolved(matrix, dims)?;
        rho.check_positivity()?;
        Ok(rho)
    }

    /// Validates Hermiticity and trace only.
    ///
    /// Meant for outputs of unitary conjugation and partial traces of already
    /// valid states, where an eigendecomposition per construction would dominate
    /// the cost. Positivity is still enforced by every spectral operation.
    pub fn from_evolved(matrix: ComplexSquareMatrix, dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims, matrix.dim())?;
        let defect = matrix.hermiticity_defect();
        if defect > HERMITICITY_TOL {
            return Err(Error::Numerical(format!(
                "state is not Hermitian (max |M - M†| = {defect:e})"
            )));
        }
        let tr = matrix.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::Numerical(format!(
                "state trace is {:.15} {:+e}i, expected 1",
                tr.re, tr.im
            )));
        }
        Ok(Self { matrix, dims })
    }

    pub fn pure(amplitudes: &[C64], dims: Vec<usize>) -> Result<Self> {
        let norm2: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if norm2 <= 0.0 || !norm2.is_finite() {
            return Err(Error::InvalidArgument("state vector has zero norm".into()));
        }
        let n = amplitudes.len();
        let m = ComplexSquareMatrix::from_fn(n, |i, j| amplitudes[i] * amplitudes[j].conj() / norm2);
        Self::new(m, dims)
    }

    /// Computational basis state `|i_1 i_2 ...⟩` with one digit per subsystem.
    pub fn basis_state(digits: &[usize], dims: Vec<usize>) -> Result<Self> {
        if digits.len() != dims.len() || digits.iter().zip(&dims).any(|(d, n)| d >= n) {
            return Err(Error::InvalidArgument(format!(
                "basis label {digits:?} does not fit dims {dims:?}"
            )));
        }
        let index = digits.iter().zip(&dims).fold(0, |acc, (d, n)| acc * n + d);
        let total: usize = dims.iter().product();
        let mut m = ComplexSquareMatrix::zeros(total);
        m[(index, index)] = C64::new(1.0, 0.0);
        Self::new(m, dims)
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Result<Self> {
        let total: usize = dims.iter().product();
        let m = ComplexSquareMatrix::identity(total).scale(C64::new(1.0 / total as f64, 0.0));
        Self::new(m, dims)
    }

    pub fn from_populations(populations: &[f64], dims: Vec<usize>) -> Result<Self> {
        Self::new(ComplexSquareMatrix::from_real_diagonal(populations), dims)
    }

    pub fn matrix(&self) -> &ComplexSquareMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexSquareMatrix {
        self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn tensor(&self, other: &DensityOperator) -> DensityOperator {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        DensityOperator {
            matrix: kron(&self.matrix, &other.matrix),
            dims,
        }
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityOperator> {
        partial_trace(self, keep)
    }

    /// Eigenvalues in ascending order with roundoff negativity clipped to zero.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        let eig = hermitian_eig(&self.matrix)?;
        clip_spectrum(eig.eigenvalues)
    }

    pub fn check_positivity(&self) -> Result<()> {
        self.spectrum().map(|_| ())
    }

    pub fn purity(&self) -> f64 {
        self.matrix.trace_product(&self.matrix).map(|z| z.re).unwrap_or(f64::NAN)
    }
}

pub(crate) fn clip_spectrum(mut eigenvalues: Vec<f64>) -> Result<Vec<f64>> {
    if let Some(&min) = eigenvalues.first() {
        if min < -POSITIVITY_TOL {
            return Err(Error::Numerical(format!(
                "state is not positive (smallest eigenvalue {min:e})"
            )));
        }
    }
    for v in &mut eigenvalues {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    Ok(eigenvalues)
}

fn check_dims(dims: &[usize], total: usize) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::InvalidArgument(format!("invalid subsystem dims {dims:?}")));
    }
    let product: usize = dims.iter().product();
    if product != total {
        return Err(Error::DimensionMismatch {
            expected: total,
            found: product,
        });
    }
    Ok(())
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Flat-index offsets of every multi-index over `subset`, enumerated with the
/// first listed subsystem slowest.
fn offsets(dims: &[usize], strides: &[usize], subset: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize];
    for &k in subset {
        let mut next = Vec::with_capacity(out.len() * dims[k]);
        for &base in &out {
            for d in 0..dims[k] {
                next.push(base + d * strides[k]);
            }
        }
        out = next;
    }
    out
}

fn validate_subset(dims: &[usize], subset: &[usize], what: &str) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::InvalidArgument(format!("{what} set is empty")));
    }
    let mut seen = vec![false; dims.len()];
    for &k in subset {
        if k >= dims.len() {
            return Err(Error::InvalidArgument(format!(
                "{what} index {k} out of range for {} subsystems",
                dims.len()
            )));
        }
        if seen[k] {
            return Err(Error::InvalidArgument(format!("{what} index {k} repeated")));
        }
        seen[k] = true;
    }
    Ok(())
}

/// Reduced state on `keep`, with kept subsystems in their original order.
pub fn partial_trace(rho: &DensityOperator, keep: &[usize]) -> Result<DensityOperator> {
    let reduced = partial_trace_operator(rho.matrix(), rho.dims(), keep)?;
    let mut kept = keep.to_vec();
    kept.sort_unstable();
    let kept_dims = kept.iter().map(|&k| rho.dims()[k]).collect();
    DensityOperator::from_evolved(reduced, kept_dims)
}

/// Partial trace of an arbitrary operator on a register with subsystem
/// dimensions `dims`.
pub fn partial_trace_operator(
    m: &ComplexSquareMatrix,
    dims: &[usize],
    keep: &[usize],
) -> Result<ComplexSquareMatrix> {
    check_dims(dims, m.dim())?;
    validate_subset(dims, keep, "keep")?;
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !kept.contains(k)).collect();

    let st = strides(dims);
    let keep_off = offsets(dims, &st, &kept);
    let trace_off = offsets(dims, &st, &traced);

    let n = keep_off.len();
    Ok(ComplexSquareMatrix::from_fn(n, |a, b| {
        let (ra, rb) = (keep_off[a], keep_off[b]);
        trace_off
            .iter()
            .map(|&t| m[(ra + t, rb + t)])
            .fold(C64::new(0.0, 0.0), |acc, z| acc + z)
    }))
}

/// Left-multiplies `m` by `gate` acting on the `targets` subsystems of a
/// register with subsystem dimensions `dims`. The first target is the gate's
/// slowest index.
pub fn apply_local_left(
    m: &ComplexSquareMatrix,
    dims: &[usize],
    gate: &ComplexSquareMatrix,
    targets: &[usize],
) -> Result<ComplexSquareMatrix> {
    let (target_off, rest_off) = local_offsets(m, dims, gate, targets)?;
    let g = target_off.len();
    let mut out = ComplexSquareMatrix::zeros(m.dim());
    let mut column = vec![C64::new(0.0, 0.0); g];
    for c in 0..m.dim() {
        for &r in &rest_off {
            for (s, &t) in target_off.iter().enumerate() {
                column[s] = m[(r + t, c)];
            }
            for (s, &t) in target_off.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for (s2, &v) in column.iter().enumerate() {
                    acc += gate[(s, s2)] * v;
                }
                out[(r + t, c)] = acc;
            }
        }
    }
    Ok(out)
}

/// `G ρ G†` with `G` acting on `targets` only.
pub fn conjugate_local(
    m: &ComplexSquareMatrix,
    dims: &[usize],
    gate: &ComplexSquareMatrix,
    targets: &[usize],
) -> Result<ComplexSquareMatrix> {
    let left = apply_local_left(m, dims, gate, targets)?;
    let (target_off, rest_off) = local_offsets(m, dims, gate, targets)?;
    let g = target_off.len();
    let mut out = ComplexSquareMatrix::zeros(m.dim());
    let mut row = vec![C64::new(0.0, 0.0); g];
    for &r in &rest_off {
        for i in 0..m.dim() {
            for (s, &t) in target_off.iter().enumerate() {
                row[s] = left[(i, r + t)];
            }
            for (s, &t) in target_off.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for (s2, &v) in row.iter().enumerate() {
                    acc += v * gate[(s, s2)].conj();
                }
                out[(i, r + t)] = acc;
            }
        }
    }
    Ok(out)
}

fn local_offsets(
    m: &ComplexSquareMatrix,
    dims: &[usize],
    gate: &ComplexSquareMatrix,
    targets: &[usize],
) -> Result<(Vec<usize>, Vec<usize>)> {
    check_dims(dims, m.dim())?;
    validate_subset(dims, targets, "target")?;
    let gate_dim: usize = targets.iter().map(|&k| dims[k]).product();
    if gate.dim() != gate_dim {
        return Err(Error::DimensionMismatch {
            expected: gate_dim,
            found: gate.dim(),
        });
    }
    let st = strides(dims);
    let rest: Vec<usize> = (0..dims.len()).filter(|k| !targets.contains(k)).collect();
    Ok((offsets(dims, &st, targets), offsets(dims, &st, &rest)))
}

/// Embeds `gate` on `targets` into the full register as an explicit matrix.
pub fn embed_local(
    dims: &[usize],
    gate: &ComplexSquareMatrix,
    targets: &[usize],
) -> Result<ComplexSquareMatrix> {
    let total: usize = dims.iter().product();
    apply_local_left(&ComplexSquareMatrix::identity(total), dims, gate, targets)
}
