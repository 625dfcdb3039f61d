//! Reference implementations used only to cross-check the spectral routines.
//!
//! They share no code path with [`crate::matfun`]: the exponential is a plain
//! truncated Taylor series with scaling and squaring, and `argtanh` is its
//! power series. Neither is meant for production use.

// Needed without std; shadowed by inherent methods when std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use crate::linops::ComplexMatrix;

const TAYLOR_ORDER: usize = 16;

/// `exp(M)` by scaling and squaring with a fixed order-16 Taylor polynomial.
pub fn expm_taylor(m: &ComplexMatrix) -> ComplexMatrix {
    assert!(m.is_square(), "expm_taylor needs a square matrix");
    let norm = m.frobenius_norm();
    let mut squarings = 0u32;
    let mut scale = 1.0;
    while norm * scale > 0.5 {
        scale *= 0.5;
        squarings += 1;
    }
    let x = m.scale_real(scale);
    let n = m.rows();
    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=TAYLOR_ORDER {
        term = (&term * &x).scale_real(1.0 / k as f64);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// `Z Σ_k (Z*Z)^k / (2k+1)`, truncated once terms fall below `1e-18·‖Z‖_F`.
/// Only sensible for `‖Z‖_op ≤ 0.5` or so.
pub fn argtanh_series(z: &ComplexMatrix) -> ComplexMatrix {
    let gram = &z.adjoint() * z;
    let n = z.cols();
    let mut power = ComplexMatrix::identity(n);
    let mut sum = ComplexMatrix::identity(n);
    let floor = 1e-18 * z.frobenius_norm().max(1e-300);
    for k in 1..400 {
        power = &power * &gram;
        let term = power.scale_real(1.0 / (2 * k + 1) as f64);
        let size = term.frobenius_norm();
        sum += &term;
        if size < floor {
            break;
        }
    }
    z * &sum
}
