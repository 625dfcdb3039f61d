//! The Siegel disc `{Z : Z^T = Z, id − Z*Z ≻ 0}` at truncation `n`, its
//! Möbius action, and the explicit transporter `0 ↦ Z`.

use rand::Rng;

use crate::blockgroup::{sample_u1, BlockOperator};
use crate::error::{Error, Result};
use crate::linops::{hermitian_eig, min_singular_value, sample_matrix, ComplexMatrix, MatrixKind};
use crate::matfun::{argtanh_scaled, exp_offdiag};
use crate::tolerance::Tolerances;

/// Outcome of [`is_in_disc`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscReport {
    /// `‖Z^T − Z‖_F`.
    pub symmetry: f64,
    /// Smallest eigenvalue of `id − Z*Z`.
    pub min_eig: f64,
    pub passed: bool,
}

/// Membership test: symmetry within `tol.sym_tol` (relative to
/// `max(1, ‖Z‖_F)`) and `λ_min(id − Z*Z) ≥ tol.pd_floor`.
pub fn is_in_disc(z: &ComplexMatrix, tol: &Tolerances) -> Result<DiscReport> {
    if !z.is_square() {
        return Err(Error::DimensionMismatch {
            op: "is_in_disc",
            left: z.shape(),
            right: z.shape(),
        });
    }
    let symmetry = z.symmetry_residual();
    let n = z.rows();
    let gap = &ComplexMatrix::identity(n) - &(&z.adjoint() * z);
    let min_eig = hermitian_eig(&gap)?
        .eigenvalues
        .first()
        .copied()
        .unwrap_or(1.0);
    let passed =
        symmetry <= tol.sym_tol * z.frobenius_norm().max(1.0) && min_eig >= tol.pd_floor;
    Ok(DiscReport {
        symmetry,
        min_eig,
        passed,
    })
}

/// A point of the truncated Siegel disc.
#[derive(Debug, Clone, PartialEq)]
pub struct SiegelPoint {
    z: ComplexMatrix,
}

impl SiegelPoint {
    pub fn new(z: ComplexMatrix) -> Result<Self> {
        Self::new_with(z, &Tolerances::default())
    }

    pub fn new_with(z: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        let rep = is_in_disc(&z, tol)?;
        if !rep.passed {
            return Err(Error::NotInDisc {
                symmetry: rep.symmetry,
                min_eig: rep.min_eig,
            });
        }
        Ok(Self { z })
    }

    /// The origin of the disc.
    pub fn origin(n: usize) -> Self {
        Self {
            z: ComplexMatrix::zeros(n, n),
        }
    }

    /// Wraps a matrix produced by an operation whose output is known to lie
    /// in the disc when its inputs do.
    fn trusted(z: ComplexMatrix) -> Self {
        Self { z }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.z
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.z
    }

    pub fn n(&self) -> usize {
        self.z.rows()
    }
}

/// A tangent vector `U = U^T` at any point of the disc.
#[derive(Debug, Clone, PartialEq)]
pub struct SiegelTangent {
    u: ComplexMatrix,
}

impl SiegelTangent {
    pub fn new(u: ComplexMatrix) -> Result<Self> {
        Self::new_with(u, &Tolerances::default())
    }

    pub fn new_with(u: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if !u.is_square() {
            return Err(Error::DimensionMismatch {
                op: "SiegelTangent::new",
                left: u.shape(),
                right: u.shape(),
            });
        }
        let residual = u.symmetry_residual();
        if residual > tol.sym_tol * u.frobenius_norm().max(1.0) {
            return Err(Error::NotSymmetric { residual });
        }
        Ok(Self { u })
    }

    fn trusted(u: ComplexMatrix) -> Self {
        Self { u }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.u
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.u
    }
}

/// `h̄Z + ḡ`, checked for invertibility.
fn denominator(a: &BlockOperator, z: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    if a.n() != z.rows() || !z.is_square() {
        return Err(Error::DimensionMismatch {
            op: "mobius",
            left: a.g().shape(),
            right: z.shape(),
        });
    }
    let d = &(&a.h().conj() * z) + &a.g().conj();
    let sigma_min = min_singular_value(&d)?;
    if sigma_min < tol.sing_tol {
        return Err(Error::DenominatorSingular { sigma_min });
    }
    Ok(d)
}

/// `(gZ + h)(h̄Z + ḡ)⁻¹` on an arbitrary square matrix; no disc checks.
pub fn mobius_matrix(a: &BlockOperator, z: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = denominator(a, z, &Tolerances::default())?;
    let num = &(a.g() * z) + a.h();
    num.right_divide(&d)
}

/// Möbius action `a · Z = (gZ + h)(h̄Z + ḡ)⁻¹`. Expects `a ∈ Sp`.
pub fn mobius(a: &BlockOperator, z: &SiegelPoint) -> Result<SiegelPoint> {
    Ok(SiegelPoint::trusted(mobius_matrix(a, &z.z)?))
}

/// The symplectic element `exp [[0, A_Z], [Ā_Z, 0]]` sending `0` to `Z`.
pub fn transporter(z: &SiegelPoint, margin: f64) -> Result<BlockOperator> {
    exp_offdiag(&argtanh_scaled(&z.z, margin)?)
}

/// Coset representative `h ḡ⁻¹`; constant on right `U_1` cosets.
pub fn coset_rep(a: &BlockOperator) -> Result<SiegelPoint> {
    let gbar = a.g().conj();
    let sigma_min = min_singular_value(&gbar)?;
    if sigma_min < Tolerances::default().sing_tol {
        return Err(Error::Singular { sigma_min });
    }
    Ok(SiegelPoint::trusted(a.h().right_divide(&gbar)?))
}

/// `Ũ = (g*)⁻¹ U ḡ⁻¹`, the image of `U ∈ T_0` under `a`.
pub fn pushforward_at_zero(a: &BlockOperator, u: &SiegelTangent) -> Result<SiegelTangent> {
    let gstar = a.g().adjoint();
    let left = gstar.lu().map_err(|_| Error::Singular { sigma_min: 0.0 })?.solve(&u.u);
    Ok(SiegelTangent::trusted(left.right_divide(&a.g().conj())?))
}

/// The three equal expressions for the pushforward at `0`:
/// `(g*)⁻¹ U ḡ⁻¹`, `g U ḡ⁻¹ − h ḡ⁻¹ h̄ U ḡ⁻¹` and `(id − Z Z̄) g U ḡ⁻¹` with
/// `Z = h ḡ⁻¹`.
pub fn pushforward_at_zero_forms(
    a: &BlockOperator,
    u: &SiegelTangent,
) -> Result<[ComplexMatrix; 3]> {
    let first = pushforward_at_zero(a, u)?.u;
    let gbar = a.g().conj();
    let gu_gbar_inv = (a.g() * &u.u).right_divide(&gbar)?;
    let z = a.h().right_divide(&gbar)?;
    let hbar_u_gbar_inv = (&a.h().conj() * &u.u).right_divide(&gbar)?;
    let second = &gu_gbar_inv - &(&z * &hbar_u_gbar_inv);
    let n = a.n();
    let third = &(&ComplexMatrix::identity(n) - &(&z * &z.conj())) * &gu_gbar_inv;
    Ok([first, second, third])
}

/// `‖(id − Z Z̄) − (g g*)⁻¹‖_F` for `Z = coset_rep(a)`, `a ∈ Sp`.
pub fn coset_resolvent_residual(a: &BlockOperator) -> Result<f64> {
    let z = coset_rep(a)?.z;
    let n = a.n();
    let lhs = &ComplexMatrix::identity(n) - &(&z * &z.conj());
    let rhs = (a.g() * &a.g().adjoint()).inverse()?;
    Ok((&lhs - &rhs).frobenius_norm())
}

/// Differential of the Möbius action at `Z` along `U`:
/// `(g − Z' h̄) U (h̄Z + ḡ)⁻¹` with `Z' = a · Z`.
pub fn mobius_differential(
    a: &BlockOperator,
    z: &SiegelPoint,
    u: &SiegelTangent,
) -> Result<SiegelTangent> {
    let d = denominator(a, &z.z, &Tolerances::default())?;
    let image = (&(a.g() * &z.z) + a.h()).right_divide(&d)?;
    let lead = a.g() - &(&image * &a.h().conj());
    Ok(SiegelTangent::trusted((&lead * &u.u).right_divide(&d)?))
}

/// Random symmetric contraction with `‖Z‖_op ≤ 1 − margin`.
pub fn sample_point<R: Rng + ?Sized>(rng: &mut R, n: usize, margin: f64) -> SiegelPoint {
    SiegelPoint::trusted(sample_matrix(rng, n, n, MatrixKind::ContractionSymmetric { margin }))
}

pub fn sample_tangent<R: Rng + ?Sized>(rng: &mut R, n: usize) -> SiegelTangent {
    SiegelTangent::trusted(sample_matrix(rng, n, n, MatrixKind::SymmetricT))
}

/// Random symplectic element `transporter(Z) ∘ u` with `u ∈ U_1`.
pub fn sample_sp<R: Rng + ?Sized>(rng: &mut R, n: usize, margin: f64) -> Result<BlockOperator> {
    let z = sample_point(rng, n, margin);
    let u = sample_u1(rng, n)?;
    transporter(&z, margin)?.compose(&u)
}

/// `mobius(a, 0) = 0` forces `h = 0` and `g` unitary; this returns
/// `(‖h‖_F, ‖g*g − id‖_F)`.
pub fn isotropy_residuals(a: &BlockOperator) -> (f64, f64) {
    let n = a.n();
    let h = a.h().frobenius_norm();
    let g = (&(&a.g().adjoint() * a.g()) - &ComplexMatrix::identity(n)).frobenius_norm();
    (h, g)
}
