//! Dense complex matrices: adjoint, products, Kronecker product and the
//! Hilbert-Schmidt inner product.
//!
//! Matrices are immutable after construction and every operation returns a
//! fresh value, so the whole module is safe for unrestricted concurrent use.
//! All operations are plain sequential loops over row-major storage:
//! identical inputs give bit-identical outputs.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Double-precision complex scalar used throughout the crate.
pub type C64 = Complex64;

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Checked constructor from row-major data. Rejects length mismatches and
    /// non-finite entries.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DataLength {
                rows,
                cols,
                len: data.len(),
                expected: rows * cols,
            });
        }
        if !data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    /// Matrix from real row-major entries.
    pub fn real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            entries.iter().map(|&x| C64::new(x, 0.0)).collect(),
        )
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Build a matrix entry by entry. The caller is responsible for keeping
    /// the entries finite.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    /// Row-major entry slice.
    pub fn data(&self) -> &[C64] {
        &self.data
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Trace of a square matrix. Panics on non-square input.
    pub fn trace(&self) -> C64 {
        assert!(self.is_square(), "trace requires a square matrix");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// Checked matrix product.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch {
                expected_rows: self.cols,
                expected_cols: rhs.cols,
                found_rows: rhs.rows,
                found_cols: rhs.cols,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.get(k, j);
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product in lexicographic index order: the entry at
    /// ((i', j'), (i, j)) equals `self[i', i] * other[j', j]`.
    pub fn kronecker(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self.get(i1, j1);
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        let r = i1 * other.rows + i2;
                        let c = j1 * other.cols + j2;
                        out.data[r * cols + c] = a * other.get(i2, j2);
                    }
                }
            }
        }
        out
    }

    /// Scalar multiple.
    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| s * z).collect(),
        }
    }

    /// Hilbert-Schmidt inner product tr(self† · other), antilinear in `self`.
    pub fn hs_inner(&self, other: &Self) -> Result<C64> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch {
                expected_rows: self.rows,
                expected_cols: self.cols,
                found_rows: other.rows,
                found_cols: other.cols,
            });
        }
        let mut acc = C64::new(0.0, 0.0);
        for (a, b) in self.data.iter().zip(other.data.iter()) {
            acc += a.conj() * b;
        }
        Ok(acc)
    }

    /// Hilbert-Schmidt (Frobenius) norm.
    pub fn hs_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus (max-norm).
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-norm of the difference. Panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.shape(), other.shape(), "max_abs_diff shape mismatch");
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Max-norm deviation from the identity. Panics on non-square input.
    pub fn identity_residual(&self) -> f64 {
        assert!(
            self.is_square(),
            "identity_residual requires a square matrix"
        );
        self.max_abs_diff(&Self::identity(self.rows))
    }

    /// Max-norm deviation from Hermitian symmetry, max |A_ij - conj(A_ji)|.
    pub fn hermiticity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    /// Column-stacked vectorization: entry (i, j) lands at index j*rows + i.
    pub fn column_stacked(&self) -> Vec<C64> {
        let mut v = Vec::with_capacity(self.rows * self.cols);
        for j in 0..self.cols {
            for i in 0..self.rows {
                v.push(self.get(i, j));
            }
        }
        v
    }

    /// Inverse of [`column_stacked`](Self::column_stacked).
    pub fn from_column_stacked(rows: usize, cols: usize, v: &[C64]) -> Result<Self> {
        if v.len() != rows * cols {
            return Err(Error::DataLength {
                rows,
                cols,
                len: v.len(),
                expected: rows * cols,
            });
        }
        Ok(Self::from_fn(rows, cols, |i, j| v[j * rows + i]))
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix addition shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(rhs.data.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            self.shape(),
            rhs.shape(),
            "matrix subtraction shape mismatch"
        );
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(rhs.data.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale(C64::new(-1.0, 0.0))
    }
}

/// Matrix product. Panics on shape mismatch; use [`ComplexMatrix::matmul`]
/// for a checked version.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl Mul<C64> for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, s: C64) -> ComplexMatrix {
        self.scale(s)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self.get(i, j);
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn new_rejects_bad_length() {
        let err = ComplexMatrix::new(2, 2, vec![c(1.0, 0.0); 3]).unwrap_err();
        assert!(matches!(err, Error::DataLength { .. }));
    }

    #[test]
    fn new_rejects_non_finite() {
        let err = ComplexMatrix::new(1, 2, vec![c(1.0, 0.0), c(f64::NAN, 0.0)]).unwrap_err();
        assert_eq!(err, Error::NonFinite);
        let err = ComplexMatrix::new(1, 1, vec![c(0.0, f64::INFINITY)]).unwrap_err();
        assert_eq!(err, Error::NonFinite);
    }

    #[test]
    fn adjoint_of_identity_is_identity() {
        let id = ComplexMatrix::identity(2);
        assert_eq!(id.adjoint(), id);
    }

    #[test]
    fn adjoint_matches_definition() {
        // [[0, i], [0, 0]] -> [[0, 0], [-i, 0]]
        let a = ComplexMatrix::new(
            2,
            2,
            vec![c(0.0, 0.0), c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0)],
        )
        .unwrap();
        let expected = ComplexMatrix::new(
            2,
            2,
            vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, -1.0), c(0.0, 0.0)],
        )
        .unwrap();
        assert_eq!(a.adjoint(), expected);
    }

    #[test]
    fn adjoint_is_an_exact_involution() {
        let a = ComplexMatrix::from_fn(3, 2, |i, j| {
            c(0.3 * i as f64 - 1.7 * j as f64, 0.11 * (i + 2 * j) as f64)
        });
        assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn kronecker_of_identities() {
        let k = ComplexMatrix::identity(2).kronecker(&ComplexMatrix::identity(3));
        assert_eq!(k, ComplexMatrix::identity(6));
    }

    #[test]
    fn kronecker_matches_block_expansion() {
        let a = ComplexMatrix::real(2, 2, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        let b = ComplexMatrix::real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let expected = ComplexMatrix::real(
            4,
            4,
            &[
                0.0, 1.0, 0.0, 2.0, //
                1.0, 0.0, 2.0, 0.0, //
                0.0, 3.0, 0.0, 4.0, //
                3.0, 0.0, 4.0, 0.0,
            ],
        )
        .unwrap();
        assert_eq!(a.kronecker(&b), expected);
    }

    #[test]
    fn hs_inner_of_identity() {
        let id = ComplexMatrix::identity(2);
        assert_eq!(id.hs_inner(&id).unwrap(), c(2.0, 0.0));
    }

    #[test]
    fn hs_inner_rejects_shape_mismatch() {
        let a = ComplexMatrix::zeros(2, 2);
        let b = ComplexMatrix::zeros(2, 3);
        assert!(a.hs_inner(&b).is_err());
    }

    #[test]
    fn hs_inner_is_conjugate_symmetric_bitwise() {
        let a =
            ComplexMatrix::from_fn(3, 3, |i, j| c(0.7 * i as f64 + 0.1, -0.3 * j as f64 + 0.05));
        let b = ComplexMatrix::from_fn(3, 3, |i, j| c(1.3 * j as f64 - 0.2, 0.9 * i as f64));
        let ab = a.hs_inner(&b).unwrap();
        let ba = b.hs_inner(&a).unwrap();
        assert_eq!(ab, ba.conj());
    }

    #[test]
    fn column_stacking_round_trips() {
        let a = ComplexMatrix::from_fn(3, 2, |i, j| c(i as f64, j as f64));
        let v = a.column_stacked();
        assert_eq!(v[0], a.get(0, 0));
        assert_eq!(v[1], a.get(1, 0));
        assert_eq!(v[3], a.get(0, 1));
        let back = ComplexMatrix::from_column_stacked(3, 2, &v).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn matmul_checks_shapes() {
        let a = ComplexMatrix::zeros(2, 3);
        let b = ComplexMatrix::zeros(2, 3);
        assert!(a.matmul(&b).is_err());
        assert!(a.matmul(&b.adjoint()).is_ok());
    }

    #[test]
    fn trace_of_product_cyclic() {
        let a = ComplexMatrix::from_fn(2, 2, |i, j| c((i + j) as f64, (i as f64) - (j as f64)));
        let b = ComplexMatrix::from_fn(2, 2, |i, j| c(1.0 - i as f64, 2.0 * j as f64));
        let ab = (&a * &b).trace();
        let ba = (&b * &a).trace();
        assert!((ab - ba).norm() < 1e-12);
    }
}
