use alloc::vec::Vec;

// Needed without std; shadowed by inherent methods when std is linked.
#[allow(unused_imports)]
use num_traits::{Float, Zero};

use super::{ComplexMatrix, C64};
use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

const MAX_SWEEPS: usize = 80;

/// Eigendecomposition `H = Q Λ Q*` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Unitary; column `k` belongs to `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

/// [`HermitianEig::compute`] with the default Hermiticity tolerance.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<HermitianEig> {
    HermitianEig::compute(h, Tolerances::default().herm_tol)
}

impl HermitianEig {
    /// Cyclic complex Jacobi iteration.
    ///
    /// The input is symmetrised to `(H + H*)/2` after the Hermiticity check,
    /// so round-off asymmetry never leaks into the spectrum.
    pub fn compute(h: &ComplexMatrix, herm_tol: f64) -> Result<Self> {
        if !h.is_square() {
            return Err(Error::DimensionMismatch {
                op: "hermitian_eig",
                left: h.shape(),
                right: h.shape(),
            });
        }
        if !h.is_finite() {
            return Err(Error::NonFinite);
        }
        let scale = h.frobenius_norm();
        let asym = h.hermitian_residual();
        if asym > herm_tol * scale {
            return Err(Error::NotHermitian {
                residual: if scale > 0.0 { asym / scale } else { asym },
            });
        }

        let n = h.rows();
        let mut a = h.hermitian_part();
        for k in 0..n {
            a[(k, k)].im = 0.0;
        }
        let mut q = ComplexMatrix::identity(n);
        let stop = 1e-15 * scale;

        let mut converged = n <= 1 || scale == 0.0;
        let mut sweeps = 0;
        while !converged {
            if sweeps == MAX_SWEEPS {
                return Err(Error::EigFailure { sweeps });
            }
            sweeps += 1;
            for p in 0..n {
                for r in p + 1..n {
                    rotate(&mut a, &mut q, p, r);
                }
            }
            converged = off_diagonal(&a) <= stop;
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
        let eigenvalues = order.iter().map(|&k| a[(k, k)].re).collect();
        let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| q[(i, order[j])]);
        Ok(Self {
            eigenvalues,
            eigenvectors,
        })
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `Q f(Λ) Q*`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.dim();
        let q = &self.eigenvectors;
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| q[(i, k)] * q[(j, k)].conj() * fl[k]).sum()
        })
    }

    /// `Q f(Λ) Q*` for a complex-valued scalar function.
    pub fn map_complex(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let n = self.dim();
        let q = &self.eigenvectors;
        let fl: Vec<C64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| q[(i, k)] * q[(j, k)].conj() * fl[k]).sum()
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map(|l| l)
    }

    /// `‖Q Λ Q* − H‖_F / ‖H‖_F` (absolute when `H = 0`).
    pub fn reconstruction_residual(&self, h: &ComplexMatrix) -> f64 {
        let r = (&self.reconstruct() - h).frobenius_norm();
        let s = h.frobenius_norm();
        if s > 0.0 {
            r / s
        } else {
            r
        }
    }

    /// `‖Q*Q − id‖_F`.
    pub fn unitarity_residual(&self) -> f64 {
        let q = &self.eigenvectors;
        (&(&q.adjoint() * q) - &ComplexMatrix::identity(self.dim())).frobenius_norm()
    }
}

fn off_diagonal(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// One two-sided rotation `A ← V* A V` annihilating `a[p][q]`.
///
/// With `a[p][q] = r·e`, `|e| = 1`, the rotation is the real Jacobi
/// rotation of `[[a_pp, r], [r, a_qq]]` conjugated by `diag(1, ē)`:
/// `V = [[c, s·e], [−s·ē, c]]` on the `(p, q)` plane.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r.is_zero() {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    if r <= 0.1 * f64::EPSILON * (app.abs() * aqq.abs()).sqrt() {
        a[(p, q)] = C64::zero();
        a[(q, p)] = C64::zero();
        return;
    }
    let e = apq / r;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let se = e * s;
    let sec = se.conj();

    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * sec;
        a[(k, q)] = akp * se + akq * c;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * se;
        a[(q, k)] = apk * sec + aqk * c;
    }
    a[(p, p)] = C64::new(app - t * r, 0.0);
    a[(q, q)] = C64::new(aqq + t * r, 0.0);
    a[(p, q)] = C64::zero();
    a[(q, p)] = C64::zero();

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * sec;
        v[(k, q)] = vkp * se + vkq * c;
    }
}
