//! The finite-dimensional dual pair on `Mat_{2n×2n}(ℝ)`: `Sp(2n, ℝ)` acting
//! on the left, `O(2n, ℝ)` on the right, with the flat form
//! `Ω(u, v) = Tr uᵀ J v` and `J = [[0, I], [−I, 0]]`.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

// Needed without std; shadowed by inherent methods when std is linked.
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::blockgroup::MembershipReport;
use crate::error::{Error, Result};
use crate::linops::{ComplexMatrix, C64};

/// Dense real matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                op: "from_row_major",
                left: (rows, cols),
                right: (data.len(), 1),
            });
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
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

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let (r, k) = (a.rows, a.cols);
        Self::from_fn(r + c.rows, k + b.cols, |i, j| match (i < r, j < k) {
            (true, true) => a[(i, j)],
            (true, false) => b[(i, j - k)],
            (false, true) => c[(i - r, j)],
            (false, false) => d[(i - r, j - k)],
        })
    }
}

impl Index<(usize, usize)> for RealMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RealMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &RealMatrix {
    type Output = RealMatrix;
    fn mul(self, rhs: &RealMatrix) -> RealMatrix {
        assert_eq!(self.cols, rhs.rows, "real matrix product shape mismatch");
        let mut out = RealMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &RealMatrix {
    type Output = RealMatrix;
    fn add(self, rhs: &RealMatrix) -> RealMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        RealMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &RealMatrix {
    type Output = RealMatrix;
    fn sub(self, rhs: &RealMatrix) -> RealMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        RealMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// `J_n = [[0, I_n], [−I_n, 0]]`.
pub fn j_n(n: usize) -> RealMatrix {
    RealMatrix::from_fn(2 * n, 2 * n, |i, j| {
        if i < n && j == i + n {
            1.0
        } else if i >= n && j + n == i {
            -1.0
        } else {
            0.0
        }
    })
}

fn half_dim(m: &RealMatrix) -> usize {
    assert!(m.rows == m.cols && m.rows % 2 == 0, "expected a 2n×2n matrix");
    m.rows / 2
}

/// `Ω(u, v) = Tr uᵀ J v`.
pub fn omega_flat(u: &RealMatrix, v: &RealMatrix) -> f64 {
    let j = j_n(half_dim(u));
    (&(&u.transpose() * &j) * v).trace()
}

/// `μ_Sp(M) = −½ M Mᵀ J`, paired with `sp(2n)` by `A ↦ Tr(μ A)`.
pub fn mu_sp(m: &RealMatrix) -> RealMatrix {
    let j = j_n(half_dim(m));
    (&(m * &m.transpose()) * &j).scale(-0.5)
}

/// `μ_O(M) = −½ Mᵀ J M`, paired with `o(2n)` by `A ↦ Tr(μ A)`.
pub fn mu_o(m: &RealMatrix) -> RealMatrix {
    let j = j_n(half_dim(m));
    (&(&m.transpose() * &j) * m).scale(-0.5)
}

/// `Tr(μ A)`.
pub fn pair_real(mu: &RealMatrix, a: &RealMatrix) -> f64 {
    (mu * a).trace()
}

/// Residual `‖aᵀJa − J‖_F`.
pub fn is_sp_real(m: &RealMatrix, tol: f64) -> MembershipReport {
    let j = j_n(half_dim(m));
    let r = (&(&(&m.transpose() * &j) * m) - &j).frobenius_norm();
    MembershipReport::from_residuals(vec![("aTJa", r)], tol)
}

/// Residual `‖aᵀa − I‖_F`.
pub fn is_o_real(m: &RealMatrix, tol: f64) -> MembershipReport {
    let r = (&(&m.transpose() * m) - &RealMatrix::identity(m.rows)).frobenius_norm();
    MembershipReport::from_residuals(vec![("aTa", r)], tol)
}

/// `‖μ_O(M) − target‖_F`.
pub fn mu_o_level_residual(m: &RealMatrix, target: &RealMatrix) -> f64 {
    (&mu_o(m) - target).frobenius_norm()
}

/// `u = A + iB ↦ [[A, B], [−B, A]]`.
pub fn embed_unitary(u: &ComplexMatrix, tol: f64) -> Result<RealMatrix> {
    if !u.is_square() {
        return Err(Error::DimensionMismatch {
            op: "embed_unitary",
            left: u.shape(),
            right: u.shape(),
        });
    }
    let n = u.rows();
    let residual = (&(&u.adjoint() * u) - &ComplexMatrix::identity(n)).frobenius_norm();
    if !(residual <= tol) {
        return Err(Error::NotUnitary { residual });
    }
    Ok(embed_complex(u))
}

fn embed_complex(u: &ComplexMatrix) -> RealMatrix {
    let n = u.rows();
    RealMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let z = u[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => z.im,
            (false, true) => -z.im,
        }
    })
}

/// Inverse of [`embed_unitary`] on its image: `A + iB` read from the top
/// blocks of `[[A, B], [·, ·]]`.
pub fn extract_unitary(m: &RealMatrix) -> ComplexMatrix {
    let n = half_dim(m);
    ComplexMatrix::from_fn(n, n, |i, j| C64::new(m[(i, j)], m[(i, j + n)]))
}

/// `MᵀJM = J` within `tol`, for `M ∈ O(2n)`.
pub fn stabilizer_check(m: &RealMatrix, tol: f64) -> bool {
    is_sp_real(m, tol).passed
}

/// Residual of `M` against the embedding of its extracted unitary, plus the
/// unitarity residual of that extraction.
pub fn unitary_image_residual(m: &RealMatrix) -> (f64, f64) {
    let u = extract_unitary(m);
    let n = u.rows();
    let unit = (&(&u.adjoint() * &u) - &ComplexMatrix::identity(n)).frobenius_norm();
    ((m - &embed_complex(&u)).frobenius_norm(), unit)
}

/// `exp(X)` by scaling and squaring a degree-18 Taylor polynomial.
pub fn expm_real(x: &RealMatrix) -> RealMatrix {
    assert_eq!(x.rows, x.cols);
    let norm = x.frobenius_norm();
    let mut squarings = 0;
    let mut s = 1.0;
    while norm * s > 0.25 {
        s *= 0.5;
        squarings += 1;
    }
    let y = x.scale(s);
    let mut sum = RealMatrix::identity(x.rows);
    let mut term = RealMatrix::identity(x.rows);
    for k in 1..=18 {
        term = (&term * &y).scale(1.0 / k as f64);
        sum = &sum + &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

fn uniform_square<R: Rng + ?Sized>(rng: &mut R, n: usize) -> RealMatrix {
    RealMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0))
}

/// Random real `2n×2n` matrix with entries uniform in `[−scale, scale)`.
pub fn sample_real<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> RealMatrix {
    uniform_square(rng, 2 * n).scale(scale)
}

/// Random symmetric `S` with `‖S‖_F ≤ bound`.
pub fn sample_symmetric_real<R: Rng + ?Sized>(rng: &mut R, dim: usize, bound: f64) -> RealMatrix {
    let a = uniform_square(rng, dim);
    let s = (&a + &a.transpose()).scale(0.5);
    let norm = s.frobenius_norm();
    if norm > bound {
        s.scale(bound / norm)
    } else {
        s
    }
}

/// Random antisymmetric matrix with entries in `(−1, 1)`.
pub fn sample_antisymmetric_real<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> RealMatrix {
    let a = uniform_square(rng, dim);
    (&a - &a.transpose()).scale(0.5)
}

/// `J S` with `S` symmetric, an element of `sp(2n)`.
pub fn sample_sp_algebra_real<R: Rng + ?Sized>(rng: &mut R, n: usize) -> RealMatrix {
    &j_n(n) * &sample_symmetric_real(rng, 2 * n, 2.0)
}

/// `exp(J S)` with symmetric `‖S‖_F ≤ 2`.
pub fn sample_sp_real<R: Rng + ?Sized>(rng: &mut R, n: usize) -> RealMatrix {
    expm_real(&sample_sp_algebra_real(rng, n))
}

/// `exp(B)` with `B` antisymmetric.
pub fn sample_o_real<R: Rng + ?Sized>(rng: &mut R, n: usize) -> RealMatrix {
    expm_real(&sample_antisymmetric_real(rng, 2 * n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linops::sample_unitary;
    use crate::linops::I;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn omega_flat_small_cases() {
        let id = RealMatrix::identity(2);
        let j = j_n(1);
        // Tr(Iᵀ J J) = Tr(−I₂)
        assert_eq!(omega_flat(&id, &j), -2.0);
        assert_eq!(omega_flat(&j, &id), 2.0);
        assert_eq!(omega_flat(&id, &id), 0.0);
        let mut r = rng(1);
        let u = sample_real(&mut r, 3, 1.0);
        let v = sample_real(&mut r, 3, 1.0);
        assert!(omega_flat(&u, &u).abs() < 1e-13);
        assert!((omega_flat(&u, &v) + omega_flat(&v, &u)).abs() < 1e-13);
    }

    #[test]
    fn momentum_values() {
        let j = j_n(2);
        assert_eq!(mu_o(&RealMatrix::identity(4)), j.scale(-0.5));
        assert_eq!(mu_sp(&RealMatrix::identity(4)), j.scale(-0.5));
        let mut r = rng(2);
        for _ in 0..20 {
            let m = sample_sp_real(&mut r, 2);
            assert!(is_sp_real(&m, 1e-9).passed);
            assert!(mu_o_level_residual(&m, &j.scale(-0.5)) < 1e-9);
        }
    }

    #[test]
    fn hamiltonian_identities() {
        let mut r = rng(3);
        let t = 1e-5;
        for _ in 0..10 {
            let m = sample_real(&mut r, 2, 1.0);
            let v = sample_real(&mut r, 2, 1.0);
            let fd = |f: fn(&RealMatrix) -> RealMatrix| {
                (&f(&(&m + &v.scale(t))) - &f(&(&m - &v.scale(t)))).scale(0.5 / t)
            };
            // Left Sp action, X^A(M) = A M.
            let a = sample_sp_algebra_real(&mut r, 2);
            let lhs = pair_real(&fd(mu_sp), &a);
            assert!((lhs - omega_flat(&(&a * &m), &v)).abs() < 1e-7);
            // Right O action, X^A(M) = M A.
            let b = sample_antisymmetric_real(&mut r, 4);
            let lhs = pair_real(&fd(mu_o), &b);
            assert!((lhs - omega_flat(&(&m * &b), &v)).abs() < 1e-7);
        }
    }

    #[test]
    fn group_predicates() {
        let id = RealMatrix::identity(4);
        let j = j_n(2);
        assert!(is_sp_real(&id, 1e-12).passed && is_o_real(&id, 1e-12).passed);
        assert!(is_sp_real(&j, 1e-12).passed && is_o_real(&j, 1e-12).passed);
        let mut r = rng(4);
        let o = sample_o_real(&mut r, 3);
        assert!(is_o_real(&o, 1e-10).passed);
        assert!(!is_sp_real(&o, 1e-6).passed);
    }

    #[test]
    fn unitary_embedding() {
        let mut r = rng(5);
        let n = 3;
        let e = embed_unitary(&ComplexMatrix::identity(n), 1e-12).unwrap();
        assert_eq!(e, RealMatrix::identity(2 * n));
        let ei = embed_unitary(&ComplexMatrix::identity(n).scale(I), 1e-12).unwrap();
        assert_eq!(ei, j_n(n));

        let u1 = sample_unitary(&mut r, n).unwrap();
        let u2 = sample_unitary(&mut r, n).unwrap();
        let e1 = embed_unitary(&u1, 1e-10).unwrap();
        let e2 = embed_unitary(&u2, 1e-10).unwrap();
        let e12 = embed_unitary(&(&u1 * &u2), 1e-9).unwrap();
        assert!((&e12 - &(&e1 * &e2)).frobenius_norm() < 1e-12);
        let j = j_n(n);
        assert!((&(&e1 * &j) - &(&j * &e1)).frobenius_norm() < 1e-12);
        assert!(is_o_real(&e1, 1e-10).passed && is_sp_real(&e1, 1e-10).passed);
        assert!((&extract_unitary(&e1) - &u1).frobenius_norm() < 1e-15);

        let bad = ComplexMatrix::identity(n).scale_real(2.0);
        assert!(matches!(embed_unitary(&bad, 1e-10), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn stabilizer_cases() {
        let n = 2;
        let id = RealMatrix::identity(n);
        let zero = RealMatrix::zeros(n, n);
        assert!(stabilizer_check(&RealMatrix::identity(2 * n), 1e-12));
        let swap = RealMatrix::from_blocks(&zero, &id, &id, &zero);
        let flip = RealMatrix::from_blocks(&id, &zero, &zero, &id.scale(-1.0));
        for m in [&swap, &flip] {
            assert!(is_o_real(m, 1e-12).passed);
            assert!(!stabilizer_check(m, 1e-6));
            let anti = &(&m.transpose() * &j_n(n)) * m;
            assert_eq!(anti, j_n(n).scale(-1.0));
        }
        let mut r = rng(6);
        for _ in 0..10 {
            let u = sample_unitary(&mut r, n).unwrap();
            let e = embed_unitary(&u, 1e-10).unwrap();
            assert!(stabilizer_check(&e, 1e-10));
            let (img, unit) = unitary_image_residual(&e);
            assert!(img < 1e-14 && unit < 1e-10);
            let o = sample_o_real(&mut r, n);
            let (img, _) = unitary_image_residual(&o);
            assert_eq!(stabilizer_check(&o, 1e-9), img < 1e-9);
        }
    }

    #[test]
    fn actions_commute_and_preserve_levels() {
        let mut r = rng(7);
        for n in 1..=3 {
            let m = sample_real(&mut r, n, 1.0);
            let s = sample_sp_real(&mut r, n);
            let o = sample_o_real(&mut r, n);
            let left_first = &(&s * &m) * &o;
            let right_first = &s * &(&m * &o);
            let scale = left_first.frobenius_norm().max(1.0);
            assert!((&left_first - &right_first).frobenius_norm() <= 1e-12 * scale);
            let d_o = (&mu_o(&(&s * &m)) - &mu_o(&m)).frobenius_norm();
            let d_sp = (&mu_sp(&(&m * &o)) - &mu_sp(&m)).frobenius_norm();
            assert!(d_o <= 1e-12 * scale * scale, "{d_o}");
            assert!(d_sp <= 1e-12 * scale * scale, "{d_sp}");
        }
    }

    #[test]
    fn expm_real_scalar_and_rotation() {
        let x = RealMatrix::from_row_major(1, 1, vec![1.5]).unwrap();
        assert!((expm_real(&x)[(0, 0)] - 1.5f64.exp()).abs() < 1e-14);
        let r = expm_real(&j_n(1).scale(0.3));
        assert!((r[(0, 0)] - 0.3f64.cos()).abs() < 1e-15);
        assert!((r[(0, 1)] - 0.3f64.sin()).abs() < 1e-15);
    }
}
