//! Dense complex matrices and the handful of factorizations the rest of the
//! crate is built on.
//!
//! Conventions: `conj` is entrywise conjugation (the bar operation between
//! `H+` and `H-` bases), [`ComplexMatrix::transpose`] is `h^T = (h̄)^*`, i.e.
//! the plain transpose, and [`ComplexMatrix::adjoint`] is the conjugate
//! transpose.

mod eig;
mod sample;

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

// Needed without std; shadowed by inherent methods when std is linked.
#[allow(unused_imports)]
use num_traits::{Float, Zero};

use crate::error::{Error, Result};

pub use eig::{hermitian_eig, HermitianEig};
pub use sample::{sample_matrix, sample_unitary, MatrixKind};

pub type C64 = num_complex::Complex64;

pub const I: C64 = C64::new(0.0, 1.0);

/// Dense complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            f.write_str("  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6e}{:+.6e}i ", z.re, z.im)?;
            }
            f.write_str("\n")?;
        }
        f.write_str("]")
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting wrong lengths and
    /// non-finite values.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                op: "from_row_major",
                left: (rows, cols),
                right: (data.len(), 1),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (k, &d) in diag.iter().enumerate() {
            m[(k, k)] = d;
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (k, &d) in diag.iter().enumerate() {
            m[(k, k)] = C64::new(d, 0.0);
        }
        m
    }

    pub fn scalar(z: C64) -> Self {
        Self {
            rows: 1,
            cols: 1,
            data: vec![z],
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    /// Transpose without conjugation, `M^T = (M̄)^*`.
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|k| self[(k, k)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `Tr(self* · other)`, computed without forming the product.
    pub fn inner(&self, other: &Self) -> C64 {
        assert_eq!(self.shape(), other.shape(), "inner: shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `‖M^T − M‖_F`.
    pub fn symmetry_residual(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let other = if j < self.rows && i < self.cols {
                    self[(j, i)]
                } else {
                    C64::zero()
                };
                acc += (self[(i, j)] - other).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// `‖M* − M‖_F`.
    pub fn hermitian_residual(&self) -> f64 {
        (&self.adjoint() - self).frobenius_norm()
    }

    /// `‖M* + M‖_F`.
    pub fn anti_hermitian_residual(&self) -> f64 {
        (&self.adjoint() + self).frobenius_norm()
    }

    /// `(M + M*) / 2`.
    pub fn hermitian_part(&self) -> Self {
        (self + &self.adjoint()).scale_real(0.5)
    }

    pub fn block(&self, row0: usize, col0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self[(row0 + i, col0 + j)])
    }

    /// Assembles `[[a, b], [c, d]]` from four equally sized square blocks.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let n = a.rows;
        debug_assert!([a, b, c, d].iter().all(|m| m.shape() == (n, n)));
        Self::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
            (true, true) => a[(i, j)],
            (true, false) => b[(i, j - n)],
            (false, true) => c[(i - n, j)],
            (false, false) => d[(i - n, j - n)],
        })
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                op: "mul",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        Ok(self.mul_unchecked(rhs))
    }

    fn mul_unchecked(&self, rhs: &Self) -> Self {
        let (n, m, p) = (self.rows, self.cols, rhs.cols);
        let mut out = Self::zeros(n, p);
        for i in 0..n {
            let row = &self.data[i * m..(i + 1) * m];
            let dst = &mut out.data[i * p..(i + 1) * p];
            for (k, &a) in row.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let src = &rhs.data[k * p..(k + 1) * p];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d += a * b;
                }
            }
        }
        out
    }

    /// LU factorisation with partial pivoting.
    pub fn lu(&self) -> Result<Lu> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                op: "lu",
                left: self.shape(),
                right: self.shape(),
            });
        }
        let n = self.rows;
        let mut lu = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (piv, piv_abs) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if piv_abs == 0.0 || !piv_abs.is_finite() {
                return Err(Error::Singular { sigma_min: 0.0 });
            }
            if piv != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, piv * n + j);
                }
                perm.swap(k, piv);
            }
            let d = lu[(k, k)];
            for i in k + 1..n {
                let l = lu[(i, k)] / d;
                lu[(i, k)] = l;
                if l.is_zero() {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= l * u;
                }
            }
        }
        Ok(Lu { lu, perm })
    }

    pub fn inverse(&self) -> Result<Self> {
        let lu = self.lu()?;
        Ok(lu.solve(&Self::identity(self.rows)))
    }

    /// `self · rhs⁻¹`, solved through the transpose system.
    pub fn right_divide(&self, rhs: &Self) -> Result<Self> {
        let lu = rhs.transpose().lu()?;
        Ok(lu.solve(&self.transpose()).transpose())
    }
}

/// Packed LU factors and row permutation.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: ComplexMatrix,
    perm: Vec<usize>,
}

impl Lu {
    pub fn solve(&self, b: &ComplexMatrix) -> ComplexMatrix {
        let n = self.lu.rows;
        assert_eq!(b.rows, n, "Lu::solve: rhs has wrong row count");
        let p = b.cols;
        let mut x = ComplexMatrix::from_fn(n, p, |i, j| b[(self.perm[i], j)]);
        for c in 0..p {
            for i in 0..n {
                let mut s = x[(i, c)];
                for k in 0..i {
                    s -= self.lu[(i, k)] * x[(k, c)];
                }
                x[(i, c)] = s;
            }
            for i in (0..n).rev() {
                let mut s = x[(i, c)];
                for k in i + 1..n {
                    s -= self.lu[(i, k)] * x[(k, c)];
                }
                x[(i, c)] = s / self.lu[(i, i)];
            }
        }
        x
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            self.cols, rhs.rows,
            "matrix product {}x{} * {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        self.mul_unchecked(rhs)
    }
}

impl Mul<C64> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: C64) -> ComplexMatrix {
        self.scale(rhs)
    }
}

macro_rules! elementwise {
    ($trait:ident, $method:ident, $assign_trait:ident, $assign:ident, $op:tt) => {
        impl $trait for &ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                assert_eq!(self.shape(), rhs.shape(), concat!(stringify!($method), ": shape mismatch"));
                ComplexMatrix {
                    rows: self.rows,
                    cols: self.cols,
                    data: self.data.iter().zip(&rhs.data).map(|(a, b)| a $op b).collect(),
                }
            }
        }

        impl $trait for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: ComplexMatrix) -> ComplexMatrix {
                (&self).$method(&rhs)
            }
        }

        impl $assign_trait<&ComplexMatrix> for ComplexMatrix {
            fn $assign(&mut self, rhs: &ComplexMatrix) {
                assert_eq!(self.shape(), rhs.shape(), concat!(stringify!($assign), ": shape mismatch"));
                for (a, b) in self.data.iter_mut().zip(&rhs.data) {
                    *a = *a $op b;
                }
            }
        }
    };
}

elementwise!(Add, add, AddAssign, add_assign, +);
elementwise!(Sub, sub, SubAssign, sub_assign, -);

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.map(|z| -z)
    }
}

/// Which Schatten norm to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schatten {
    /// Trace norm, the sum of singular values.
    One,
    /// Hilbert–Schmidt (Frobenius) norm.
    Two,
    /// Operator norm, the largest singular value.
    Op,
}

/// Singular values in descending order, from the eigenvalues of `M*M`
/// with negative round-off clamped to zero.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let gram = &m.adjoint() * m;
    let eig = hermitian_eig(&gram)?;
    let mut sv: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).collect();
    sv.reverse();
    Ok(sv)
}

pub fn schatten_norm(m: &ComplexMatrix, p: Schatten) -> Result<f64> {
    match p {
        Schatten::Two => Ok(m.frobenius_norm()),
        Schatten::One => Ok(singular_values(m)?.iter().sum()),
        Schatten::Op => Ok(singular_values(m)?.first().copied().unwrap_or(0.0)),
    }
}

pub fn op_norm(m: &ComplexMatrix) -> Result<f64> {
    schatten_norm(m, Schatten::Op)
}

/// Smallest singular value of a square matrix.
///
/// Uses the Hermitian dilation `[[0, M], [M*, 0]]`, whose eigenvalues are
/// `±σ_k`, so tiny singular values keep absolute accuracy `O(ε‖M‖)` instead
/// of the `O(√ε‖M‖)` floor of the Gram-matrix route.
pub fn min_singular_value(m: &ComplexMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            op: "min_singular_value",
            left: m.shape(),
            right: m.shape(),
        });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(0.0);
    }
    let z = ComplexMatrix::zeros(n, n);
    let dil = ComplexMatrix::from_blocks(&z, m, &m.adjoint(), &z);
    let eig = hermitian_eig(&dil)?;
    Ok(eig.eigenvalues.iter().map(|l| l.abs()).fold(f64::INFINITY, f64::min))
}

/// Extreme singular values `(σ_min, σ_max)` of a square matrix.
pub fn singular_extremes(m: &ComplexMatrix) -> Result<(f64, f64)> {
    let n = m.rows;
    if !m.is_square() || n == 0 {
        return Err(Error::Invalid("singular_extremes needs a nonempty square matrix"));
    }
    let z = ComplexMatrix::zeros(n, n);
    let dil = ComplexMatrix::from_blocks(&z, m, &m.adjoint(), &z);
    let eig = hermitian_eig(&dil)?;
    let smin = eig.eigenvalues.iter().map(|l| l.abs()).fold(f64::INFINITY, f64::min);
    let smax = eig.eigenvalues.iter().map(|l| l.abs()).fold(0.0, f64::max);
    Ok((smin, smax))
}
