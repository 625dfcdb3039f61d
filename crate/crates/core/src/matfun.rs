//! Hermitian matrix functions evaluated spectrally, and the closed-form
//! exponential of off-diagonal block generators.
//!
//! Functions of `|A| = (A*A)^{1/2}` go through one eigendecomposition of
//! `A*A`. Quotients such as `sinh(x)/x` are evaluated by a scalar rule with
//! an explicit Taylor branch near zero, so no singular value is ever divided
//! by.

// Needed without std; shadowed by inherent methods when std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use crate::blockgroup::BlockOperator;
use crate::error::{Error, Result};
use crate::linops::{hermitian_eig, ComplexMatrix, C64};
use crate::tolerance::Tolerances;

/// Below this argument the quotient rules switch to their Taylor expansion.
const TAYLOR_CUTOFF: f64 = 1e-8;

/// A real scalar function applied to the spectrum of a Hermitian matrix.
#[derive(Clone, Copy)]
pub struct SafeSpectralFunction {
    pub name: &'static str,
    pub f: fn(f64) -> f64,
}

impl core::fmt::Debug for SafeSpectralFunction {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name)
    }
}

impl SafeSpectralFunction {
    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    /// `Q f(Λ) Q*` for Hermitian `h`.
    pub fn apply(&self, h: &ComplexMatrix) -> Result<ComplexMatrix> {
        Ok(hermitian_eig(h)?.map(self.f))
    }

    /// `f(|A|)`, computed from the eigendecomposition of `A*A`.
    pub fn apply_to_abs(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        let eig = hermitian_eig(&(&a.adjoint() * a))?;
        Ok(eig.map(|l| (self.f)(l.max(0.0).sqrt())))
    }
}

fn identity(x: f64) -> f64 {
    x
}

fn sinhc(x: f64) -> f64 {
    if x.abs() < TAYLOR_CUTOFF {
        let x2 = x * x;
        1.0 + x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sinh() / x
    }
}

fn atanhc(x: f64) -> f64 {
    if x.abs() < TAYLOR_CUTOFF {
        let x2 = x * x;
        1.0 + x2 / 3.0 + x2 * x2 / 5.0
    } else {
        x.atanh() / x
    }
}

fn tanhc(x: f64) -> f64 {
    if x.abs() < TAYLOR_CUTOFF {
        let x2 = x * x;
        1.0 - x2 / 3.0 + 2.0 * x2 * x2 / 15.0
    } else {
        x.tanh() / x
    }
}

pub const ABS: SafeSpectralFunction = SafeSpectralFunction { name: "abs", f: identity };
pub const COSH: SafeSpectralFunction = SafeSpectralFunction { name: "cosh", f: f64_cosh };
pub const TANH: SafeSpectralFunction = SafeSpectralFunction { name: "tanh", f: f64_tanh };
pub const ATANH: SafeSpectralFunction = SafeSpectralFunction { name: "atanh", f: f64_atanh };
/// `sinh(x)/x`, equal to 1 at 0.
pub const SINHC: SafeSpectralFunction = SafeSpectralFunction { name: "sinh(x)/x", f: sinhc };
/// `argtanh(x)/x`, equal to 1 at 0.
pub const ATANHC: SafeSpectralFunction = SafeSpectralFunction { name: "argtanh(x)/x", f: atanhc };
/// `tanh(x)/x`, equal to 1 at 0.
pub const TANHC: SafeSpectralFunction = SafeSpectralFunction { name: "tanh(x)/x", f: tanhc };

fn f64_cosh(x: f64) -> f64 {
    x.cosh()
}

fn f64_tanh(x: f64) -> f64 {
    x.tanh()
}

fn f64_atanh(x: f64) -> f64 {
    x.atanh()
}

/// `|A| = (A*A)^{1/2}`.
pub fn abs_op(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    ABS.apply_to_abs(a)
}

/// `A · sinh|A| / |A|`.
pub fn sinch_abs(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(a * &SINHC.apply_to_abs(a)?)
}

/// `cosh|A|`.
pub fn cosh_abs(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    COSH.apply_to_abs(a)
}

/// `A · tanh|A| / |A|`, the inverse of [`argtanh_scaled`].
pub fn tanh_scaled(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(a * &TANHC.apply_to_abs(a)?)
}

/// `A_Z = Z · argtanh|Z| / |Z|`.
///
/// Rejects `Z` with `‖Z‖_op > 1 − margin` (a relative slack of 1e-12 is
/// allowed so that samplers can land exactly on the bound).
pub fn argtanh_scaled(z: &ComplexMatrix, margin: f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(&(&z.adjoint() * z))?;
    let norm = eig.eigenvalues.last().copied().unwrap_or(0.0).max(0.0).sqrt();
    let limit = 1.0 - margin;
    if !(norm <= limit * (1.0 + 1e-12)) || norm >= 1.0 {
        return Err(Error::SpectrumAtOne { norm, limit });
    }
    Ok(z * &eig.map(|l| atanhc(l.max(0.0).sqrt())))
}

/// Closed-form `exp [[0, A], [Ā, 0]]` for symmetric `A`.
///
/// The generator squares to `diag(AA*, A*A)`, so the upper-left block is
/// `cosh((AA*)^{1/2}) = cosh|A*|`, which equals `conj(cosh|A|)` when
/// `A^T = A`; the upper-right block is `A sinh|A| / |A|`.
pub fn exp_offdiag(a: &ComplexMatrix) -> Result<BlockOperator> {
    exp_offdiag_with(a, &Tolerances::default())
}

pub fn exp_offdiag_with(a: &ComplexMatrix, tol: &Tolerances) -> Result<BlockOperator> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            op: "exp_offdiag",
            left: a.shape(),
            right: a.shape(),
        });
    }
    let residual = a.symmetry_residual();
    if residual > tol.sym_tol * a.frobenius_norm().max(1.0) {
        return Err(Error::NotSymmetric { residual });
    }
    let g = cosh_abs(&a.adjoint())?;
    let h = sinch_abs(a)?;
    BlockOperator::new(g, h)
}

/// `exp(A)` for anti-Hermitian `A`, via the eigendecomposition of the
/// Hermitian matrix `iA`.
pub fn expm_anti_hermitian(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let ia = a.scale(C64::new(0.0, 1.0));
    let eig = hermitian_eig(&ia)?;
    Ok(eig.map_complex(|l| C64::new(0.0, -l).exp()))
}
