//! Flat Kähler structure on `M_{1,2} = id + gl_{1,2}`, the momentum map of
//! the right `O_{1,2}` action, its equivariance defect, and the symplectic
//! form induced on the quotient `μ⁻¹(0) / U_1`, i.e. on the Siegel disc.
//!
//! Tangent vectors of `M_{1,2}` are [`BlockTangent`]s. Traces are taken on
//! the embedded `2n × 2n` matrices; the real-valued functions return the
//! real part and the `*_complex` variants expose the full trace so callers
//! can check that the imaginary part vanishes.

use alloc::vec::Vec;

use crate::blockgroup::{adjoint_action, BlockOperator, BlockTangent};
use crate::error::{Error, Result};
use crate::linops::{ComplexMatrix, C64, I};
use crate::siegel::{mobius, mobius_differential, SiegelPoint, SiegelTangent};

fn j_embedded(n: usize) -> ComplexMatrix {
    BlockOperator::complex_structure(n).embed()
}

/// A point of the flat space `id + gl_{1,2}`. At finite `n` every block
/// operator qualifies.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatPoint(pub BlockOperator);

impl FlatPoint {
    pub fn new(m: BlockOperator) -> Result<Self> {
        if !m.g().is_finite() || !m.h().is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Self(m))
    }

    pub fn operator(&self) -> &BlockOperator {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }
}

/// Coefficient `S` of a functional `A ↦ −½ Tr(S·A)` on `o_{1,2}`, stored as
/// an embedded `2n × 2n` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumCoefficient {
    pub s: ComplexMatrix,
}

impl MomentumCoefficient {
    /// `−½ Tr(S·A)` including its imaginary part.
    pub fn pair_complex(&self, a: &BlockTangent) -> C64 {
        // Tr(S·A) = Σ_ij S_ij A_ji without forming the product.
        let m = a.embed();
        let n = self.s.rows();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += self.s[(i, j)] * m[(j, i)];
            }
        }
        acc * -0.5
    }

    /// `−½ Re Tr(S·A)`.
    pub fn pair(&self, a: &BlockTangent) -> f64 {
        self.pair_complex(a).re
    }

    pub fn anti_hermitian_residual(&self) -> f64 {
        self.s.anti_hermitian_residual()
    }

    /// Distance of the lower blocks from the `[[x1, x2], [x̄2, x̄1]]` pattern.
    pub fn block_residual(&self) -> f64 {
        BlockTangent::from_embedded(&self.s).map(|(_, r)| r).unwrap_or(f64::INFINITY)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.s.frobenius_norm()
    }
}

/// `g_M(V1, V2) = Tr V1* V2`, complex.
pub fn kahler_metric_complex(v1: &BlockTangent, v2: &BlockTangent) -> C64 {
    v1.embed().inner(&v2.embed())
}

pub fn kahler_metric(v1: &BlockTangent, v2: &BlockTangent) -> f64 {
    kahler_metric_complex(v1, v2).re
}

/// `J_M V = J V`, which multiplies both blocks by `i`.
#[allow(non_snake_case)]
pub fn kahler_J(v: &BlockTangent) -> BlockTangent {
    BlockTangent {
        a1: v.a1.scale(I),
        a2: v.a2.scale(I),
    }
}

/// `ω_M(V1, V2) = Tr V1* J V2`, complex.
pub fn kahler_omega_complex(v1: &BlockTangent, v2: &BlockTangent) -> C64 {
    let jv2 = &j_embedded(v2.n()) * &v2.embed();
    v1.embed().inner(&jv2)
}

/// `ω_M(V1, V2)`. With these conventions `ω_M(V1, V2) = g_M(V1, J V2)
/// = −g_M(J V1, V2)`.
pub fn kahler_omega(v1: &BlockTangent, v2: &BlockTangent) -> f64 {
    kahler_omega_complex(v1, v2).re
}

/// `μ_O(M)`, with coefficient `S = M*JM − J`.
pub fn momentum(m: &FlatPoint) -> MomentumCoefficient {
    let e = m.0.embed();
    let j = j_embedded(m.n());
    MomentumCoefficient {
        s: &(&(&e.adjoint() * &j) * &e) - &j,
    }
}

/// Derivative of the coefficient of [`momentum`] at `M` along `V`:
/// `V*JM + M*JV`, so that `⟨d_Mμ(V) | A⟩ = −½ Tr((V*JM + M*JV) A)`.
pub fn momentum_differential(m: &FlatPoint, v: &BlockTangent) -> MomentumCoefficient {
    let e = m.0.embed();
    let ve = v.embed();
    let j = j_embedded(m.n());
    let first = &(&ve.adjoint() * &j) * &e;
    let second = &(&e.adjoint() * &j) * &ve;
    MomentumCoefficient { s: &first + &second }
}

/// Right-hand side of the momentum-map identity, `ω_M(X^A(M), V)` with the
/// fundamental field `X^A(M) = M·A`.
pub fn hamiltonian_rhs(m: &FlatPoint, v: &BlockTangent, a: &BlockTangent) -> f64 {
    kahler_omega(&m.0.mul_tangent(a), v)
}

/// Coadjoint action on coefficients, `S ↦ a⁻¹ S a`, which represents
/// `A ↦ ξ(a A a⁻¹)` by cyclicity of the trace.
pub fn coadjoint(a: &BlockOperator, xi: &MomentumCoefficient) -> Result<MomentumCoefficient> {
    let e = a.embed();
    let inv = a.inverse()?.embed();
    Ok(MomentumCoefficient {
        s: &(&inv * &xi.s) * &e,
    })
}

/// Both sides of the equivariance-defect identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefectPair {
    /// `⟨μ(M·a), A⟩ − ⟨μ(M), Ad(a)A⟩`.
    pub lhs: f64,
    /// `−½ Re Tr((a⁻¹Ja − J) A)`, independent of `M`.
    pub rhs: f64,
}

impl DefectPair {
    pub fn gap(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }
}

/// Expects `a ∈ O_{1,2}` and `A ∈ o_{1,2}`.
pub fn equivariance_defect(
    m: &FlatPoint,
    a: &BlockOperator,
    alg: &BlockTangent,
) -> Result<DefectPair> {
    let moved = FlatPoint(m.0.compose(a)?);
    let ad = adjoint_action(a, alg)?;
    let lhs = momentum(&moved).pair(alg) - momentum(m).pair(&ad);
    Ok(DefectPair {
        lhs,
        rhs: defect_rhs(a, alg)?,
    })
}

/// `−½ Re Tr((a⁻¹Ja − J) A)`.
pub fn defect_rhs(a: &BlockOperator, alg: &BlockTangent) -> Result<f64> {
    let j = j_embedded(a.n());
    let inv = a.inverse()?.embed();
    let coefficient = MomentumCoefficient {
        s: &(&(&inv * &j) * &a.embed()) - &j,
    };
    Ok(coefficient.pair(alg))
}

/// `max_A |⟨μ(M), A⟩|` over the supplied basis of `o_{1,2}`; zero exactly on
/// the zero level set.
pub fn level_set_residual(m: &FlatPoint, basis: &[BlockTangent]) -> f64 {
    let mu = momentum(m);
    basis.iter().map(|a| mu.pair(a).abs()).fold(0.0, f64::max)
}

/// `(id − Z Z̄)⁻¹`; its conjugate is `(id − Z̄ Z)⁻¹`.
fn resolvent(z: &SiegelPoint) -> Result<ComplexMatrix> {
    let zm = z.matrix();
    let n = z.n();
    (&ComplexMatrix::identity(n) - &(zm * &zm.conj())).inverse()
}

/// `ω_Q(Z)(U, V) = 2 Im Tr((id − Z̄Z)⁻¹ U* (id − ZZ̄)⁻¹ V)`.
pub fn omega_q(z: &SiegelPoint, u: &SiegelTangent, v: &SiegelTangent) -> Result<f64> {
    let p = resolvent(z)?;
    let q = p.conj();
    let prod = &(&(&q * &u.matrix().adjoint()) * &p) * v.matrix();
    Ok(2.0 * prod.trace().im)
}

/// `−2 Im Tr((id − ZZ̄)⁻¹ U (id − Z̄Z)⁻¹ V̄)`, equal to [`omega_q`] for
/// symmetric `Z`, `U`, `V`.
pub fn omega_q_proof_form(z: &SiegelPoint, u: &SiegelTangent, v: &SiegelTangent) -> Result<f64> {
    let p = resolvent(z)?;
    let q = p.conj();
    let prod = &(&(&p * u.matrix()) * &q) * &v.matrix().conj();
    Ok(-2.0 * prod.trace().im)
}

/// `ω_Q` at the image of `0` under `a`, computed by pulling `Ũ`, `Ṽ` back to
/// `T_0` through the representative `a`: `U = g* Ũ ḡ`, value `2 Im Tr(U*V)`.
pub fn omega_q_via_representative(
    a: &BlockOperator,
    u_tilde: &SiegelTangent,
    v_tilde: &SiegelTangent,
) -> f64 {
    let gstar = a.g().adjoint();
    let gbar = a.g().conj();
    let u = &(&gstar * u_tilde.matrix()) * &gbar;
    let v = &(&gstar * v_tilde.matrix()) * &gbar;
    2.0 * u.inner(&v).im
}

/// `|ω_Q(a·Z)(a·U, a·V) − ω_Q(Z)(U, V)|`.
pub fn omega_q_invariance_residual(
    a: &BlockOperator,
    z: &SiegelPoint,
    u: &SiegelTangent,
    v: &SiegelTangent,
) -> Result<f64> {
    let before = omega_q(z, u, v)?;
    let az = mobius(a, z)?;
    let au = mobius_differential(a, z, u)?;
    let av = mobius_differential(a, z, v)?;
    let after = omega_q(&az, &au, &av)?;
    Ok((after - before).abs())
}

/// `ω_M` evaluated on the horizontal lifts `[[0, U], [Ū, 0]]`,
/// `[[0, V], [V̄, 0]]` at the identity; equals `−2 Im Tr(U*V)`.
pub fn omega_m_on_complement(u: &SiegelTangent, v: &SiegelTangent) -> f64 {
    let n = u.matrix().rows();
    let lift = |x: &SiegelTangent| BlockTangent {
        a1: ComplexMatrix::zeros(n, n),
        a2: x.matrix().clone(),
    };
    kahler_omega(&lift(u), &lift(v))
}

/// Largest `|Im|` of the pairing over a basis; zero when the pairing is real.
pub fn pairing_imaginary_part(mu: &MomentumCoefficient, basis: &[BlockTangent]) -> f64 {
    basis.iter().map(|a| mu.pair_complex(a).im.abs()).fold(0.0, f64::max)
}

/// Every tangent vector in `basis` pushed through `M ↦ M·A`.
pub fn fundamental_fields(m: &FlatPoint, basis: &[BlockTangent]) -> Vec<BlockTangent> {
    basis.iter().map(|a| m.0.mul_tangent(a)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blockgroup::{is_sp, o12_basis, sample_block, sample_o12, sample_o12_algebra, sample_tangent, sample_u1};
    use crate::siegel::{coset_rep, sample_point, sample_sp, sample_tangent as sample_sym, transporter};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn metric_and_omega_basics() {
        let mut r = rng(1);
        for _ in 0..20 {
            let v = sample_tangent(&mut r, 3);
            let w = sample_tangent(&mut r, 3);
            assert!(kahler_metric(&v, &v) > 0.0);
            assert!(kahler_omega(&v, &v).abs() < 1e-13);
            assert!((kahler_omega(&v, &w) + kahler_omega(&w, &v)).abs() < 1e-12);
            assert!(kahler_metric_complex(&v, &w).im.abs() < 1e-12);
            assert!(kahler_omega_complex(&v, &w).im.abs() < 1e-12);
            // ω(V, W) = g(V, JW) = −g(JV, W)
            assert!((kahler_omega(&v, &w) - kahler_metric(&v, &kahler_J(&w))).abs() < 1e-12);
            assert!((kahler_omega(&v, &w) + kahler_metric(&kahler_J(&v), &w)).abs() < 1e-12);
            // J² = −1
            let jj = kahler_J(&kahler_J(&v));
            assert!((&jj.embed() + &v.embed()).frobenius_norm() < 1e-15);
        }
    }

    #[test]
    fn momentum_identity_and_sp_vanish() {
        let mu = momentum(&FlatPoint(BlockOperator::identity(3)));
        assert_eq!(mu.frobenius_norm(), 0.0);
        let mut r = rng(2);
        let a = sample_sp(&mut r, 3, 0.05).unwrap();
        assert!(momentum(&FlatPoint(a)).frobenius_norm() < 1e-12);
    }

    #[test]
    fn pairing_is_real_and_coefficient_structured() {
        let mut r = rng(3);
        let basis = o12_basis(3);
        for _ in 0..10 {
            let m = FlatPoint(sample_block(&mut r, 3, 0.6));
            let mu = momentum(&m);
            assert!(mu.anti_hermitian_residual() < 1e-13);
            assert!(mu.block_residual() < 1e-13);
            assert!(pairing_imaginary_part(&mu, &basis) < 1e-12);
        }
    }

    #[test]
    fn hamiltonian_identity_and_finite_differences() {
        let mut r = rng(4);
        let basis = o12_basis(3);
        let t = 1e-5;
        for _ in 0..10 {
            let m = FlatPoint(sample_block(&mut r, 3, 0.6));
            let v = sample_tangent(&mut r, 3);
            let dmu = momentum_differential(&m, &v);
            let plus = momentum(&FlatPoint(v.scale(t).add(&m.0.as_tangent()).into()));
            let minus = momentum(&FlatPoint(m.0.as_tangent().sub(&v.scale(t)).into()));
            let fd = (&plus.s - &minus.s).scale_real(0.5 / t);
            assert!((&fd - &dmu.s).frobenius_norm() < 1e-6);
            for a in &basis {
                assert!((dmu.pair(a) - hamiltonian_rhs(&m, &v, a)).abs() < 1e-10);
            }
        }
        let zero = momentum_differential(&FlatPoint(BlockOperator::identity(2)), &BlockTangent::zero(2));
        assert_eq!(zero.frobenius_norm(), 0.0);
    }

    #[test]
    fn coadjoint_matches_functional_definition() {
        let mut r = rng(5);
        let a = sample_o12(&mut r, 3).unwrap();
        let m = FlatPoint(sample_block(&mut r, 3, 0.5));
        let alg = sample_o12_algebra(&mut r, 3);
        let mu = momentum(&m);
        let lhs = coadjoint(&a, &mu).unwrap().pair(&alg);
        let rhs = mu.pair(&adjoint_action(&a, &alg).unwrap());
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn defect_cases() {
        let mut r = rng(6);
        let m = FlatPoint(sample_block(&mut r, 3, 0.5));
        let alg = sample_o12_algebra(&mut r, 3);
        let d = equivariance_defect(&m, &BlockOperator::identity(3), &alg).unwrap();
        assert!(d.lhs.abs() < 1e-13 && d.rhs.abs() < 1e-13);

        let u = sample_u1(&mut r, 3).unwrap();
        let d = equivariance_defect(&m, &u, &alg).unwrap();
        assert!(d.lhs.abs() < 1e-12 && d.rhs.abs() < 1e-12);

        let a = sample_o12(&mut r, 4).unwrap();
        let alg = sample_o12_algebra(&mut r, 4);
        let rhs = defect_rhs(&a, &alg).unwrap();
        assert!(rhs.abs() > 1e-3, "generic O12 element should have a defect");
        for _ in 0..10 {
            let m = FlatPoint(sample_block(&mut r, 4, 0.5));
            let d = equivariance_defect(&m, &a, &alg).unwrap();
            assert!(d.gap() < 1e-10);
            assert!((d.rhs - rhs).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_level_set_is_sp() {
        let mut r = rng(7);
        let basis = o12_basis(3);
        for k in 0..40 {
            let a = if k % 2 == 0 { sample_sp(&mut r, 3, 0.05).unwrap() } else { sample_block(&mut r, 3, 0.5) };
            let on_level = level_set_residual(&FlatPoint(a.clone()), &basis) <= 1e-9;
            assert_eq!(on_level, is_sp(&a, 1e-9).passed);
            assert_eq!(on_level, k % 2 == 0);
        }
    }

    #[test]
    fn omega_q_scalar_and_origin() {
        let z = SiegelPoint::origin(1);
        let u = SiegelTangent::new(ComplexMatrix::scalar(C64::new(1.0, 0.0))).unwrap();
        let v = SiegelTangent::new(ComplexMatrix::scalar(I)).unwrap();
        assert!((omega_q(&z, &u, &v).unwrap() - 2.0).abs() < 1e-15);

        let mut r = rng(8);
        let u = sample_sym(&mut r, 4);
        let v = sample_sym(&mut r, 4);
        let direct = 2.0 * u.matrix().inner(v.matrix()).im;
        assert!((omega_q(&SiegelPoint::origin(4), &u, &v).unwrap() - direct).abs() < 1e-13);
        // Literal ω_M on the horizontal lifts has the opposite sign.
        assert!((omega_m_on_complement(&u, &v) + direct).abs() < 1e-12);
    }

    #[test]
    fn omega_q_forms_and_invariance() {
        let mut r = rng(9);
        for _ in 0..10 {
            let z = sample_point(&mut r, 4, 0.05);
            let u = sample_sym(&mut r, 4);
            let v = sample_sym(&mut r, 4);
            let w1 = omega_q(&z, &u, &v).unwrap();
            let w2 = omega_q_proof_form(&z, &u, &v).unwrap();
            assert!((w1 - w2).abs() < 1e-10);
            assert!((w1 + omega_q(&z, &v, &u).unwrap()).abs() < 1e-10);

            let a = sample_sp(&mut r, 4, 0.05).unwrap();
            assert!(omega_q_invariance_residual(&a, &z, &u, &v).unwrap() < 1e-8);
        }
        let z = sample_point(&mut r, 3, 0.05);
        let u = sample_sym(&mut r, 3);
        let v = sample_sym(&mut r, 3);
        assert!(omega_q_invariance_residual(&BlockOperator::identity(3), &z, &u, &v).unwrap() < 1e-13);
    }

    #[test]
    fn omega_q_invariance_under_transporter_at_origin() {
        let mut r = rng(11);
        for n in [1, 3, 8] {
            let t = transporter(&sample_point(&mut r, n, 0.05), 0.05).unwrap();
            let (u, v) = (sample_sym(&mut r, n), sample_sym(&mut r, n));
            assert!(omega_q_invariance_residual(&t, &SiegelPoint::origin(n), &u, &v).unwrap() < 1e-8);
        }
    }

    #[test]
    fn omega_q_through_representatives() {
        let mut r = rng(10);
        let a = sample_sp(&mut r, 3, 0.05).unwrap();
        let u = sample_u1(&mut r, 3).unwrap();
        let z = coset_rep(&a).unwrap();
        let ut = sample_sym(&mut r, 3);
        let vt = sample_sym(&mut r, 3);
        let direct = omega_q(&z, &ut, &vt).unwrap();
        let via_a = omega_q_via_representative(&a, &ut, &vt);
        let via_au = omega_q_via_representative(&a.compose(&u).unwrap(), &ut, &vt);
        assert!((direct - via_a).abs() < 1e-9);
        assert!((via_a - via_au).abs() < 1e-9);
        let w = SiegelPoint::new(z.matrix().clone()).unwrap();
        let t = transporter(&w, 0.05).unwrap();
        assert!((omega_q_via_representative(&t, &ut, &vt) - direct).abs() < 1e-9);
    }
}
