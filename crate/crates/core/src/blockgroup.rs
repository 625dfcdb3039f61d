//! Block operators `[[g, h], [h̄, ḡ]]` on `H+ ⊕ H-` and membership tests for
//! the groups and Lie algebras built from them.
//!
//! An operator on the complexification preserves the real subspace exactly
//! when it has this block shape, so the shape is stored structurally (only
//! `g` and `h` are kept) and is closed under products, inverses and adjoints
//! by construction.
//!
//! At finite truncation `Sp`, `Sp_res` and `Sp_{1,2}` are the same group and
//! `GL_{1,2}` is just the invertible block operators. [`mixed_norm`] is kept as
//! a diagnostic of the trace-class / Hilbert–Schmidt split.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::linops::{
    sample_matrix, sample_unitary, schatten_norm, singular_extremes, ComplexMatrix, MatrixKind,
    Schatten, C64, I,
};
use crate::tolerance::Tolerances;

/// `[[x1, x2], [x̄2, x̄1]] · [[y1, y2], [ȳ2, ȳ1]]`, returned as its top row.
fn block_mul(
    x1: &ComplexMatrix,
    x2: &ComplexMatrix,
    y1: &ComplexMatrix,
    y2: &ComplexMatrix,
) -> (ComplexMatrix, ComplexMatrix) {
    let top_left = &(x1 * y1) + &(x2 * &y2.conj());
    let top_right = &(x1 * y2) + &(x2 * &y1.conj());
    (top_left, top_right)
}

fn embed_blocks(x1: &ComplexMatrix, x2: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_blocks(x1, x2, &x2.conj(), &x1.conj())
}

/// Splits a `2n × 2n` matrix into the top row of blocks and reports how far
/// the bottom row is from `[x̄2, x̄1]`.
fn split_blocks(m: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix, f64)> {
    let (r, c) = m.shape();
    if r != c || r % 2 != 0 {
        return Err(Error::DimensionMismatch {
            op: "split_blocks",
            left: (r, c),
            right: (r, r),
        });
    }
    let n = r / 2;
    let x1 = m.block(0, 0, n, n);
    let x2 = m.block(0, n, n, n);
    let lower = ComplexMatrix::from_blocks(
        &ComplexMatrix::zeros(n, n),
        &ComplexMatrix::zeros(n, n),
        &x2.conj(),
        &x1.conj(),
    );
    let mut actual = m.clone();
    for i in 0..n {
        for j in 0..2 * n {
            actual[(i, j)] = C64::new(0.0, 0.0);
        }
    }
    let residual = (&actual - &lower).frobenius_norm();
    Ok((x1, x2, residual))
}

fn check_pair(op: &'static str, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if !a.is_square() || a.shape() != b.shape() {
        return Err(Error::DimensionMismatch {
            op,
            left: a.shape(),
            right: b.shape(),
        });
    }
    Ok(())
}

/// Operator `[[g, h], [h̄, ḡ]]` on `C^{2n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockOperator {
    g: ComplexMatrix,
    h: ComplexMatrix,
}

impl BlockOperator {
    pub fn new(g: ComplexMatrix, h: ComplexMatrix) -> Result<Self> {
        check_pair("BlockOperator::new", &g, &h)?;
        Ok(Self { g, h })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            g: ComplexMatrix::identity(n),
            h: ComplexMatrix::zeros(n, n),
        }
    }

    /// The complex structure `J = diag(i·id, −i·id)`, i.e. `g = i·id`, `h = 0`.
    pub fn complex_structure(n: usize) -> Self {
        Self {
            g: ComplexMatrix::identity(n).scale(I),
            h: ComplexMatrix::zeros(n, n),
        }
    }

    /// Reads the blocks off a `2n × 2n` matrix, returning the operator and
    /// the distance of the lower blocks from the required pattern.
    pub fn from_embedded(m: &ComplexMatrix) -> Result<(Self, f64)> {
        let (g, h, res) = split_blocks(m)?;
        Ok((Self { g, h }, res))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.g.rows()
    }

    pub fn g(&self) -> &ComplexMatrix {
        &self.g
    }

    pub fn h(&self) -> &ComplexMatrix {
        &self.h
    }

    pub fn into_parts(self) -> (ComplexMatrix, ComplexMatrix) {
        (self.g, self.h)
    }

    /// The full `2n × 2n` matrix.
    pub fn embed(&self) -> ComplexMatrix {
        embed_blocks(&self.g, &self.h)
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch {
                op: "compose",
                left: self.g.shape(),
                right: other.g.shape(),
            });
        }
        let (g, h) = block_mul(&self.g, &self.h, &other.g, &other.h);
        Ok(Self { g, h })
    }

    /// `a*` = `[[g*, h^T], [h*, g^T]]`.
    pub fn adjoint(&self) -> Self {
        Self {
            g: self.g.adjoint(),
            h: self.h.transpose(),
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        self.inverse_with(&Tolerances::default())
    }

    /// Inverse through the embedded matrix; rejects operators whose smallest
    /// singular value is below `sing_tol` or whose condition number exceeds
    /// `cond_max`.
    pub fn inverse_with(&self, tol: &Tolerances) -> Result<Self> {
        let m = self.embed();
        let (smin, smax) = singular_extremes(&m)?;
        if smin < tol.sing_tol || smax > tol.cond_max * smin {
            return Err(Error::Singular { sigma_min: smin });
        }
        let inv = m.inverse()?;
        let n = self.n();
        Ok(Self {
            g: inv.block(0, 0, n, n),
            h: inv.block(0, n, n, n),
        })
    }

    /// `self · t` for a tangent vector `t` (right translation of tangents).
    pub fn mul_tangent(&self, t: &BlockTangent) -> BlockTangent {
        let (a1, a2) = block_mul(&self.g, &self.h, &t.a1, &t.a2);
        BlockTangent { a1, a2 }
    }

    /// `self − id` as an element of the Lie algebra.
    pub fn offset_from_identity(&self) -> BlockTangent {
        BlockTangent {
            a1: &self.g - &ComplexMatrix::identity(self.n()),
            a2: self.h.clone(),
        }
    }

    pub fn as_tangent(&self) -> BlockTangent {
        BlockTangent {
            a1: self.g.clone(),
            a2: self.h.clone(),
        }
    }
}

/// Element `[[A1, A2], [Ā2, Ā1]]` of `gl_{1,2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockTangent {
    pub a1: ComplexMatrix,
    pub a2: ComplexMatrix,
}

impl BlockTangent {
    pub fn new(a1: ComplexMatrix, a2: ComplexMatrix) -> Result<Self> {
        check_pair("BlockTangent::new", &a1, &a2)?;
        Ok(Self { a1, a2 })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            a1: ComplexMatrix::zeros(n, n),
            a2: ComplexMatrix::zeros(n, n),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.a1.rows()
    }

    pub fn embed(&self) -> ComplexMatrix {
        embed_blocks(&self.a1, &self.a2)
    }

    pub fn from_embedded(m: &ComplexMatrix) -> Result<(Self, f64)> {
        let (a1, a2, res) = split_blocks(m)?;
        Ok((Self { a1, a2 }, res))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            a1: &self.a1 + &other.a1,
            a2: &self.a2 + &other.a2,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            a1: &self.a1 - &other.a1,
            a2: &self.a2 - &other.a2,
        }
    }

    /// Real scaling; complex scalars would break the block pattern.
    pub fn scale(&self, s: f64) -> Self {
        Self {
            a1: self.a1.scale_real(s),
            a2: self.a2.scale_real(s),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a1, a2) = block_mul(&self.a1, &self.a2, &other.a1, &other.a2);
        Self { a1, a2 }
    }

    /// Right translation `t · a`.
    pub fn mul_operator(&self, a: &BlockOperator) -> Self {
        let (a1, a2) = block_mul(&self.a1, &self.a2, &a.g, &a.h);
        Self { a1, a2 }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn adjoint(&self) -> Self {
        Self {
            a1: self.a1.adjoint(),
            a2: self.a2.transpose(),
        }
    }

    /// `id + self` as a point of the flat space.
    pub fn exp_base(&self) -> BlockOperator {
        BlockOperator {
            g: &ComplexMatrix::identity(self.n()) + &self.a1,
            h: self.a2.clone(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.embed().frobenius_norm()
    }
}

impl From<BlockTangent> for BlockOperator {
    fn from(t: BlockTangent) -> Self {
        BlockOperator { g: t.a1, h: t.a2 }
    }
}

/// Residuals of a membership test. `passed` is decided by the predicate
/// that produced the report; diagnostics never affect it.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipReport {
    pub residuals: Vec<(&'static str, f64)>,
    pub diagnostics: Vec<(&'static str, f64)>,
    pub tol: f64,
    pub passed: bool,
}

impl MembershipReport {
    pub(crate) fn from_residuals(residuals: Vec<(&'static str, f64)>, tol: f64) -> Self {
        let passed = residuals.iter().all(|(_, r)| *r <= tol);
        Self {
            residuals,
            diagnostics: Vec::new(),
            tol,
            passed,
        }
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|(_, r)| *r).fold(0.0, f64::max)
    }

    pub fn residual(&self, name: &str) -> Option<f64> {
        self.residuals
            .iter()
            .chain(&self.diagnostics)
            .find(|(n, _)| *n == name)
            .map(|(_, r)| *r)
    }
}

/// `‖a*Ja − J‖_F` on the embedded matrix.
pub fn sp_residual_embedded(a: &BlockOperator) -> f64 {
    let m = a.embed();
    let j = BlockOperator::complex_structure(a.n()).embed();
    (&(&(&m.adjoint() * &j) * &m) - &j).frobenius_norm()
}

/// Symplectic membership: `g*g − h^T h̄ = id` and `g*h = h^T ḡ`, plus the
/// equivalent `a*Ja = J`.
pub fn is_sp(a: &BlockOperator, tol: f64) -> MembershipReport {
    let n = a.n();
    let (g, h) = (&a.g, &a.h);
    let ht = h.transpose();
    let r1 = (&(&(&g.adjoint() * g) - &(&ht * &h.conj())) - &ComplexMatrix::identity(n))
        .frobenius_norm();
    let r2 = (&(&g.adjoint() * h) - &(&ht * &g.conj())).frobenius_norm();
    let r3 = sp_residual_embedded(a);
    MembershipReport::from_residuals(vec![("unit", r1), ("symmetric", r2), ("aJa", r3)], tol)
}

/// Orthogonality `a*a = id`.
pub fn is_o12(a: &BlockOperator, tol: f64) -> MembershipReport {
    let m = a.embed();
    let r = (&(&m.adjoint() * &m) - &ComplexMatrix::identity(2 * a.n())).frobenius_norm();
    MembershipReport::from_residuals(vec![("a*a", r)], tol)
}

/// `h = 0` and `g` unitary.
pub fn is_u1(a: &BlockOperator, tol: f64) -> MembershipReport {
    let n = a.n();
    let rh = a.h.frobenius_norm();
    let rg = (&(&a.g.adjoint() * &a.g) - &ComplexMatrix::identity(n)).frobenius_norm();
    MembershipReport::from_residuals(vec![("h", rh), ("g*g", rg)], tol)
}

/// Invertibility within `sing_tol` / `cond_max`, with `‖a − id‖_{1,2}` as a
/// diagnostic.
pub fn is_gl12(a: &BlockOperator, tol: &Tolerances) -> Result<MembershipReport> {
    let (smin, smax) = singular_extremes(&a.embed())?;
    let invertible = smin >= tol.sing_tol && smax <= tol.cond_max * smin;
    let inverse_residual = if invertible {
        let inv = a.inverse_with(tol)?;
        (&a.compose(&inv)?.embed() - &ComplexMatrix::identity(2 * a.n())).frobenius_norm()
    } else {
        f64::INFINITY
    };
    let mut report = MembershipReport::from_residuals(vec![("inverse", inverse_residual)], tol.pass);
    report.passed &= invertible;
    report.diagnostics = vec![
        ("sigma_min", smin),
        ("condition", if smin > 0.0 { smax / smin } else { f64::INFINITY }),
        ("mixed_norm", mixed_norm(&a.offset_from_identity())?),
    ];
    Ok(report)
}

/// Anti-Hermiticity `T* + T = 0` of the embedded tangent.
pub fn is_o12_algebra(t: &BlockTangent, tol: f64) -> MembershipReport {
    MembershipReport::from_residuals(vec![("T*+T", t.embed().anti_hermitian_residual())], tol)
}

/// `‖A1‖_1 + ‖A2‖_2`.
pub fn mixed_norm(t: &BlockTangent) -> Result<f64> {
    Ok(schatten_norm(&t.a1, Schatten::One)? + schatten_norm(&t.a2, Schatten::Two)?)
}

/// `Ad(a)A = a A a⁻¹`.
pub fn adjoint_action(a: &BlockOperator, t: &BlockTangent) -> Result<BlockTangent> {
    let inv = a.inverse()?;
    Ok(a.mul_tangent(t).mul_operator(&inv))
}

/// Canonical real basis of `o_{1,2}` at truncation `n`: anti-Hermitian
/// `A1` (`n²` elements) followed by antisymmetric complex `A2`
/// (`n(n−1)` elements). Orthogonal for the trace pairing.
pub fn o12_basis(n: usize) -> Vec<BlockTangent> {
    (0..o12_dim(n)).map(|k| o12_basis_element(n, k)).collect()
}

/// `dim o_{1,2} = 2n² − n` at truncation `n`.
pub fn o12_dim(n: usize) -> usize {
    2 * n * n - n
}

/// Element `k` of [`o12_basis`], built without the others.
pub fn o12_basis_element(n: usize, k: usize) -> BlockTangent {
    assert!(k < o12_dim(n), "basis index {k} out of range for n = {n}");
    let one = C64::new(1.0, 0.0);
    let pair = |i: usize, j: usize, z: C64, sign: f64| {
        let mut m = ComplexMatrix::zeros(n, n);
        m[(i, j)] = z;
        m[(j, i)] = z * sign;
        m
    };
    // Index of the unordered pair (j, l), j < l, in row-major order.
    let unpair = |mut r: usize| {
        let mut j = 0;
        while r >= n - 1 - j {
            r -= n - 1 - j;
            j += 1;
        }
        (j, j + 1 + r)
    };
    let zero = ComplexMatrix::zeros(n, n);
    let offdiag = n * (n - 1) / 2;
    if k < n {
        let mut a1 = zero.clone();
        a1[(k, k)] = I;
        return BlockTangent { a1, a2: zero };
    }
    let k = k - n;
    if k < 2 * offdiag {
        let (j, l) = unpair(k / 2);
        let a1 = if k % 2 == 0 { pair(j, l, one, -1.0) } else { pair(j, l, I, 1.0) };
        return BlockTangent { a1, a2: zero };
    }
    let k = k - 2 * offdiag;
    let (j, l) = unpair(k / 2);
    let a2 = if k % 2 == 0 { pair(j, l, one, -1.0) } else { pair(j, l, I, -1.0) };
    BlockTangent { a1: zero, a2 }
}

pub fn sample_tangent<R: Rng + ?Sized>(rng: &mut R, n: usize) -> BlockTangent {
    BlockTangent {
        a1: sample_matrix(rng, n, n, MatrixKind::General),
        a2: sample_matrix(rng, n, n, MatrixKind::General),
    }
}

/// `id + scale·X` with `X` a random tangent.
pub fn sample_block<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> BlockOperator {
    sample_tangent(rng, n).scale(scale).exp_base()
}

/// Random element of `o_{1,2}`: anti-Hermitian `A1`, antisymmetric `A2`.
pub fn sample_o12_algebra<R: Rng + ?Sized>(rng: &mut R, n: usize) -> BlockTangent {
    let t = sample_tangent(rng, n);
    BlockTangent {
        a1: (&t.a1 - &t.a1.adjoint()).scale_real(0.5),
        a2: (&t.a2 - &t.a2.transpose()).scale_real(0.5),
    }
}

/// `(u, 0)` with `u` a random unitary.
pub fn sample_u1<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<BlockOperator> {
    Ok(BlockOperator {
        g: sample_unitary(rng, n)?,
        h: ComplexMatrix::zeros(n, n),
    })
}

/// `exp(A)` for a random `A ∈ o_{1,2}`.
pub fn sample_o12<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<BlockOperator> {
    let algebra = sample_o12_algebra(rng, n);
    let (a, _) = BlockOperator::from_embedded(&crate::matfun::expm_anti_hermitian(&algebra.embed())?)?;
    Ok(a)
}
