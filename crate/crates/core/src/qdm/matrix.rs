use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::DMatrix;

use super::C64;
use crate::{Error, Result};

/// Dense complex square matrix.
///
/// Entries are addressed as `(row, col)`; [`ComplexSquareMatrix::from_row_slice`]
/// and [`ComplexSquareMatrix::to_row_major`] convert to and from a row-major
/// flat layout.
#[derive(Clone, PartialEq)]
pub struct ComplexSquareMatrix {
    inner: DMatrix<C64>,
}

impl ComplexSquareMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            inner: DMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            inner: DMatrix::identity(dim, dim),
        }
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self {
            inner: DMatrix::from_fn(dim, dim, f),
        }
    }

    pub fn from_row_slice(dim: usize, entries: &[C64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        if dim == 0 {
            return Err(Error::InvalidArgument("matrix dimension must be positive".into()));
        }
        Ok(Self {
            inner: DMatrix::from_row_slice(dim, dim, entries),
        })
    }

    /// Real entries, row-major.
    pub fn from_real_rows(dim: usize, entries: &[f64]) -> Result<Self> {
        let entries: Vec<C64> = entries.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_row_slice(dim, &entries)
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, |i, j| {
            if i == j {
                C64::new(diag[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    pub fn from_dmatrix(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::InvalidArgument(format!(
                "matrix is {}x{}, expected square",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(Self { inner: m })
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.inner
    }

    pub fn into_dmatrix(self) -> DMatrix<C64> {
        self.inner
    }

    pub fn to_row_major(&self) -> Vec<C64> {
        let n = self.dim();
        (0..n * n).map(|k| self.inner[(k / n, k % n)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            inner: self.inner.adjoint(),
        }
    }

    pub fn trace(&self) -> C64 {
        self.inner.trace()
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            inner: &self.inner * factor,
        }
    }

    /// `Tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Result<C64> {
        let n = self.dim();
        if other.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: other.dim(),
            });
        }
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..n {
            for i in 0..n {
                acc += self.inner[(i, j)] * other.inner[(j, i)];
            }
        }
        Ok(acc)
    }

    pub fn max_abs(&self) -> f64 {
        self.inner.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "max_abs_diff on mismatched dimensions");
        self.inner
            .iter()
            .zip(other.inner.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - self†`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.inner[(i, j)] - self.inner[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// `(self + self†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self {
            inner: (&self.inner + self.inner.adjoint()) * C64::new(0.5, 0.0),
        }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self * other - other * self
    }

    pub fn diagonal_real(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.inner[(i, i)].re).collect()
    }
}

impl Index<(usize, usize)> for ComplexSquareMatrix {
    type Output = C64;

    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.inner[idx]
    }
}

impl IndexMut<(usize, usize)> for ComplexSquareMatrix {
    fn index_mut(&mut self, idx: (usize, usize)) -> &mut C64 {
        &mut self.inner[idx]
    }
}

impl Mul for &ComplexSquareMatrix {
    type Output = ComplexSquareMatrix;

    fn mul(self, rhs: &ComplexSquareMatrix) -> ComplexSquareMatrix {
        ComplexSquareMatrix {
            inner: &self.inner * &rhs.inner,
        }
    }
}

impl Mul for ComplexSquareMatrix {
    type Output = ComplexSquareMatrix;

    fn mul(self, rhs: ComplexSquareMatrix) -> ComplexSquareMatrix {
        &self * &rhs
    }
}

impl Add for &ComplexSquareMatrix {
    type Output = ComplexSquareMatrix;

    fn add(self, rhs: &ComplexSquareMatrix) -> ComplexSquareMatrix {
        ComplexSquareMatrix {
            inner: &self.inner + &rhs.inner,
        }
    }
}

impl Add for ComplexSquareMatrix {
    type Output = ComplexSquareMatrix;

    fn add(self, rhs: ComplexSquareMatrix) -> ComplexSquareMatrix {
        &self + &rhs
    }
}

impl Sub for &ComplexSquareMatrix {
    type Output = ComplexSquareMatrix;

    fn sub(self, rhs: &ComplexSquareMatrix) -> ComplexSquareMatrix {
        ComplexSquareMatrix {
            inner: &self.inner - &rhs.inner,
        }
    }
}

impl Sub for ComplexSquareMatrix {
    type Output = ComplexSquareMatrix;

    fn sub(self, rhs: ComplexSquareMatrix) -> ComplexSquareMatrix {
        &self - &rhs
    }
}

impl fmt::Debug for ComplexSquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dim();
        writeln!(f, "ComplexSquareMatrix({n}x{n}) [")?;
        for i in 0..n {
            write!(f, "  ")?;
            for j in 0..n {
                let z = self.inner[(i, j)];
                write!(f, "{:+.6e}{:+.6e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product, left factor as the slower index.
pub fn kron(a: &ComplexSquareMatrix, b: &ComplexSquareMatrix) -> ComplexSquareMatrix {
    ComplexSquareMatrix {
        inner: a.inner.kronecker(&b.inner),
    }
}

pub mod pauli {
    use super::{ComplexSquareMatrix, C64};

    pub fn identity() -> ComplexSquareMatrix {
        ComplexSquareMatrix::identity(2)
    }

    pub fn x() -> ComplexSquareMatrix {
        ComplexSquareMatrix::from_real_rows(2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    pub fn y() -> ComplexSquareMatrix {
        let i = C64::new(0.0, 1.0);
        let o = C64::new(0.0, 0.0);
        ComplexSquareMatrix::from_row_slice(2, &[o, -i, i, o]).unwrap()
    }

    /// `σ_z|0⟩ = +|0⟩`.
    pub fn z() -> ComplexSquareMatrix {
        ComplexSquareMatrix::from_real_diagonal(&[1.0, -1.0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn kron_identity() {
        let i4 = kron(&pauli::identity(), &pauli::identity());
        assert_eq!(i4, ComplexSquareMatrix::identity(4));
    }

    #[test]
    fn kron_block_structure() {
        let m = kron(&pauli::z(), &pauli::identity());
        assert_eq!(m, ComplexSquareMatrix::from_real_diagonal(&[1.0, 1.0, -1.0, -1.0]));
    }

    #[test]
    fn kron_matches_index_arithmetic() {
        // (A ⊗ B)[(i1*db + i2), (j1*db + j2)] = A[i1,j1] B[i2,j2]
        let a = ComplexSquareMatrix::from_fn(2, |i, j| C64::new(i as f64 + 0.5, j as f64 - 1.0));
        let b = ComplexSquareMatrix::from_fn(3, |i, j| C64::new((i * j) as f64, 1.0 + i as f64));
        let k = kron(&a, &b);
        for i1 in 0..2 {
            for j1 in 0..2 {
                for i2 in 0..3 {
                    for j2 in 0..3 {
                        assert_eq!(k[(i1 * 3 + i2, j1 * 3 + j2)], a[(i1, j1)] * b[(i2, j2)]);
                    }
                }
            }
        }
    }

    #[test]
    fn xx_expanded_by_hand() {
        let xx = kron(&pauli::x(), &pauli::x());
        let expected = ComplexSquareMatrix::from_real_rows(
            4,
            &[
                0.0, 0.0, 0.0, 1.0, //
                0.0, 0.0, 1.0, 0.0, //
                0.0, 1.0, 0.0, 0.0, //
                1.0, 0.0, 0.0, 0.0,
            ],
        )
        .unwrap();
        assert_eq!(xx, expected);
    }

    #[test]
    fn row_major_round_trip() {
        let entries: Vec<C64> = (0..9).map(|k| C64::new(k as f64, -(k as f64))).collect();
        let m = ComplexSquareMatrix::from_row_slice(3, &entries).unwrap();
        assert_eq!(m[(0, 2)], entries[2]);
        assert_eq!(m[(2, 0)], entries[6]);
        assert_eq!(m.to_row_major(), entries);
    }

    #[test]
    fn rejects_wrong_entry_count() {
        let err = ComplexSquareMatrix::from_row_slice(2, &[c(1.0); 3]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { expected: 4, found: 3 }));
    }

    #[test]
    fn trace_product_matches_product_trace() {
        let a = ComplexSquareMatrix::from_fn(3, |i, j| C64::new(i as f64, j as f64 * 0.3));
        let b = ComplexSquareMatrix::from_fn(3, |i, j| C64::new(1.0 - j as f64, i as f64));
        let direct = (&a * &b).trace();
        let fast = a.trace_product(&b).unwrap();
        assert!((direct - fast).norm() < 1e-14);
    }
}
