//! Randomized checks grouped by suite. Every trial draws from its own
//! ChaCha8 stream keyed by `(seed, check name, trial index)`, so results do
//! not depend on scheduling or on which other checks ran.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use siegel_core::blockgroup::{
    adjoint_action, is_o12, is_sp, is_u1, o12_basis_element, o12_dim, sample_block, sample_o12,
    sample_o12_algebra, sample_tangent, sample_u1, sp_residual_embedded, BlockOperator, BlockTangent,
};
use siegel_core::findim::{
    embed_unitary, is_o_real, is_sp_real, j_n, mu_o, mu_o_level_residual, mu_sp, omega_flat,
    pair_real, sample_antisymmetric_real, sample_o_real, sample_real, sample_sp_algebra_real,
    sample_sp_real, stabilizer_check, unitary_image_residual, RealMatrix,
};
use siegel_core::linops::{op_norm, sample_matrix, sample_unitary, ComplexMatrix, MatrixKind};
use siegel_core::matfun::{argtanh_scaled, exp_offdiag, tanh_scaled, ABS, COSH, SINHC, TANH};
use siegel_core::oracle::expm_taylor;
use siegel_core::reduction::{
    coadjoint, equivariance_defect, hamiltonian_rhs, kahler_J, kahler_metric,
    kahler_metric_complex, kahler_omega, kahler_omega_complex, level_set_residual, momentum,
    momentum_differential, omega_m_on_complement, omega_q, omega_q_invariance_residual,
    omega_q_proof_form, omega_q_via_representative, FlatPoint,
};
use siegel_core::siegel::{
    coset_rep, coset_resolvent_residual, isotropy_residuals, mobius, mobius_differential,
    pushforward_at_zero_forms, sample_point, sample_sp, sample_tangent as sample_sym, transporter,
};
use siegel_core::{Result, SiegelPoint};

use crate::config::Suite;
use crate::probe::{convergence_probe, non_decreasing_steps, ProbeConfig};
use crate::report::CheckRecord;

/// Basis quantifiers use the full `o_{1,2}` basis up to this truncation and a
/// seeded subsample of [`BASIS_SAMPLE`] elements beyond it.
pub const FULL_BASIS_MAX_DIM: usize = 8;
pub const BASIS_SAMPLE: usize = 128;
/// Truncation above which residual thresholds grow linearly with `n`.
pub const SCALE_FROM_DIM: usize = 16;
/// Largest real half-dimension used by the finite-dimensional pair.
pub const FINDIM_MAX_DIM: usize = 6;

#[derive(Debug, Clone)]
pub struct Ctx {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub margin: f64,
    pub dim_max: usize,
    /// Run only checks with these short names; `None` runs everything.
    pub only: Option<Vec<String>>,
}

impl Ctx {
    pub fn threshold_scale(&self) -> f64 {
        (self.n as f64 / SCALE_FROM_DIM as f64).max(1.0)
    }

    fn wants(&self, name: &str) -> bool {
        self.only.as_ref().is_none_or(|names| names.iter().any(|x| x == name))
    }
}

#[derive(Clone, Copy)]
enum Agg {
    /// Largest residual over trials; threshold scaled with `n`.
    Max,
    /// Number of disagreeing trials; threshold is a count.
    Count,
}

fn fnv1a(s: &str) -> u64 {
    s.bytes()
        .fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
}

pub fn trial_rng(seed: u64, check: &str, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fnv1a(check));
    rng.set_stream(trial as u64);
    rng
}

fn check<F>(ctx: &Ctx, name: &str, threshold: f64, agg: Agg, f: F) -> Option<CheckRecord>
where
    F: Fn(&mut ChaCha8Rng) -> Result<f64> + Sync,
{
    if !ctx.wants(name) {
        return None;
    }
    let values: Vec<f64> = (0..ctx.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(ctx.seed, name, t);
            match f(&mut rng) {
                Ok(v) if !v.is_nan() => v,
                _ => f64::INFINITY,
            }
        })
        .collect();
    let (value, threshold) = match agg {
        Agg::Max => (values.iter().copied().fold(0.0, f64::max), threshold * ctx.threshold_scale()),
        Agg::Count => (values.iter().sum(), threshold),
    };
    Some(CheckRecord::new(name, ctx.trials, value, threshold))
}

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

fn dist(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).frobenius_norm()
}

fn rel(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    dist(a, b) / b.frobenius_norm().max(1.0)
}

fn tangent_dist(a: &BlockTangent, b: &BlockTangent) -> f64 {
    dist(&a.embed(), &b.embed())
}

/// The `o_{1,2}` basis, or a random subset of it for large `n`.
fn basis<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<BlockTangent> {
    let dim = o12_dim(n);
    if n <= FULL_BASIS_MAX_DIM {
        (0..dim).map(|k| o12_basis_element(n, k)).collect()
    } else {
        (0..BASIS_SAMPLE).map(|_| o12_basis_element(n, rng.gen_range(0..dim))).collect()
    }
}

pub fn run(suite: Suite, ctx: &Ctx) -> std::result::Result<Vec<CheckRecord>, crate::CliError> {
    let checks: Vec<Option<CheckRecord>> = match suite {
        Suite::Groups => groups(ctx),
        Suite::Transitivity => transitivity(ctx),
        Suite::Momentum => momentum_suite(ctx),
        Suite::Defect => defect(ctx),
        Suite::Kahler => kahler(ctx),
        Suite::QuotientForm => quotient_form(ctx),
        Suite::Findim => findim(ctx),
        Suite::Convergence => convergence(ctx)?.into_iter().filter(|c| ctx.wants(&c.name)).map(Some).collect(),
        Suite::All => {
            let mut all = Vec::new();
            for s in Suite::EACH {
                all.extend(run(s, ctx)?);
            }
            return Ok(all);
        }
    };
    Ok(checks
        .into_iter()
        .flatten()
        .map(|mut c| {
            c.name = format!("{}/{}", suite.name(), c.name);
            c
        })
        .collect())
}

pub fn groups(ctx: &Ctx) -> Vec<Option<CheckRecord>> {
    let n = ctx.n;
    let tol = ctx.tol;
    let margin = ctx.margin;
    vec![
        check(ctx, "block_shape_closed", 1e-10, Agg::Max, |r| {
            let a = sample_block(r, n, 0.4);
            let b = sample_block(r, n, 0.4);
            let product = dist(&a.compose(&b)?.embed(), &(&a.embed() * &b.embed()));
            let inv = a.embed().inverse()?;
            let (_, inv_pattern) = BlockOperator::from_embedded(&inv)?;
            let (_, adj_pattern) = BlockOperator::from_embedded(&a.embed().adjoint())?;
            Ok(product.max(inv_pattern / inv.frobenius_norm()).max(adj_pattern))
        }),
        check(ctx, "sp_predicate_routes_agree", 0.0, Agg::Count, move |r| {
            let on = sample_sp(r, n, margin)?;
            let off = sample_block(r, n, 0.5);
            let mut bad = 0.0;
            for (a, expect) in [(on, true), (off, false)] {
                let block = is_sp(&a, tol).passed;
                bad += flag(block != (sp_residual_embedded(&a) <= tol)) + flag(block != expect);
            }
            Ok(bad)
        }),
        check(ctx, "u1_in_sp_and_o12", 1e-10, Agg::Max, |r| {
            let u = sample_u1(r, n)?;
            Ok(is_u1(&u, 0.0).max_residual().max(is_sp(&u, 0.0).max_residual()).max(is_o12(&u, 0.0).max_residual()))
        }),
        check(ctx, "exp_offdiag_vs_oracle", 1e-10, Agg::Max, |r| {
            let s = sample_matrix(r, n, n, MatrixKind::SymmetricT);
            let target = 3.0 * r.gen_range(0.05..1.0);
            let a = s.scale_real(target / op_norm(&s)?);
            let z = ComplexMatrix::zeros(n, n);
            let generic = expm_taylor(&ComplexMatrix::from_blocks(&z, &a, &a.conj(), &z));
            Ok(dist(&exp_offdiag(&a)?.embed(), &generic))
        }),
        check(ctx, "spectral_functions_commute", 1e-11, Agg::Max, |r| {
            let a = sample_matrix(r, n, n, MatrixKind::General);
            let a = a.scale_real(3.0 / op_norm(&a)?);
            let abs = ABS.apply_to_abs(&a)?;
            let mut worst: f64 = 0.0;
            for f in [COSH, SINHC, TANH] {
                let fa = f.apply(&abs)?;
                worst = worst.max(dist(&(&fa * &abs), &(&abs * &fa)));
            }
            Ok(worst)
        }),
    ]
}

pub fn transitivity(ctx: &Ctx) -> Vec<Option<CheckRecord>> {
    let n = ctx.n;
    let margin = ctx.margin;
    let origin = SiegelPoint::origin(n);
    vec![
        check(ctx, "transporter_round_trip", 1e-9, Agg::Max, |r| {
            let z = sample_point(r, n, margin);
            let t = transporter(&z, margin)?;
            Ok(dist(mobius(&t, &origin)?.matrix(), z.matrix()))
        }),
        check(ctx, "coset_rep_round_trip", 1e-9, Agg::Max, |r| {
            let z = sample_point(r, n, margin);
            let a = transporter(&z, margin)?.compose(&sample_u1(r, n)?)?;
            Ok(dist(coset_rep(&a)?.matrix(), z.matrix()))
        }),
        check(ctx, "argtanh_round_trip", 1e-9, Agg::Max, |r| {
            let z = sample_point(r, n, margin);
            Ok(dist(&tanh_scaled(&argtanh_scaled(z.matrix(), margin)?)?, z.matrix()))
        }),
        check(ctx, "action_property", 1e-8, Agg::Max, |r| {
            let a = sample_sp(r, n, 0.3)?;
            let b = sample_sp(r, n, 0.3)?;
            let z = sample_point(r, n, margin);
            let lhs = mobius(&a, &mobius(&b, &z)?)?;
            let rhs = mobius(&a.compose(&b)?, &z)?;
            Ok(dist(lhs.matrix(), rhs.matrix()))
        }),
        check(ctx, "isotropy_of_origin", 1e-9, Agg::Max, |r| {
            let u = sample_u1(r, n)?;
            let fixed = mobius(&u, &origin)?.matrix().max_abs();
            // An element fixing 0 built from a generic one: t(Z)⁻¹ a.
            let a = sample_sp(r, n, margin)?;
            let stab = transporter(&coset_rep(&a)?, margin)?.inverse()?.compose(&a)?;
            let moved = mobius(&stab, &origin)?.matrix().max_abs();
            let (h, g) = isotropy_residuals(&stab);
            Ok(fixed.max(moved).max(h).max(g))
        }),
        check(ctx, "differential_chain_rule", 1e-8, Agg::Max, |r| {
            let a = sample_sp(r, n, 0.3)?;
            let b = sample_sp(r, n, 0.3)?;
            let z = sample_point(r, n, margin);
            let u = sample_sym(r, n);
            let lhs = mobius_differential(&a.compose(&b)?, &z, &u)?;
            let inner = mobius_differential(&b, &z, &u)?;
            let rhs = mobius_differential(&a, &mobius(&b, &z)?, &inner)?;
            Ok(dist(lhs.matrix(), rhs.matrix()))
        }),
        check(ctx, "differential_vs_fd", 1e-6, Agg::Max, |r| {
            let a = sample_sp(r, n, 0.3)?;
            let z = sample_point(r, n, 0.3);
            let u = sample_sym(r, n);
            let t = 1e-5;
            let step = u.matrix().scale_real(t);
            let plus = mobius(&a, &SiegelPoint::new(z.matrix() + &step)?)?;
            let minus = mobius(&a, &SiegelPoint::new(z.matrix() - &step)?)?;
            let fd = (plus.matrix() - minus.matrix()).scale_real(0.5 / t);
            Ok(rel(&fd, mobius_differential(&a, &z, &u)?.matrix()))
        }),
        check(ctx, "pushforward_forms_agree", 1e-10, Agg::Max, |r| {
            let a = sample_sp(r, n, margin)?;
            let [p, q, s] = pushforward_at_zero_forms(&a, &sample_sym(r, n))?;
            Ok(dist(&q, &p).max(dist(&s, &p)))
        }),
    ]
}

pub fn momentum_suite(ctx: &Ctx) -> Vec<Option<CheckRecord>> {
    let n = ctx.n;
    let tol = ctx.tol;
    let margin = ctx.margin;
    vec![
        check(ctx, "hamiltonian_identity", 1e-10, Agg::Max, |r| {
            let m = FlatPoint(sample_block(r, n, 0.6));
            let v = sample_tangent(r, n);
            let dmu = momentum_differential(&m, &v);
            let worst = basis(r, n)
                .iter()
                .map(|a| (dmu.pair(a) - hamiltonian_rhs(&m, &v, a)).abs())
                .fold(0.0, f64::max);
            Ok(worst)
        }),
        check(ctx, "differential_vs_fd", 1e-6, Agg::Max, |r| {
            let m = sample_block(r, n, 0.6);
            let v = sample_tangent(r, n);
            let t = 1e-5;
            let x = m.as_tangent();
            let plus = momentum(&FlatPoint(x.add(&v.scale(t)).into()));
            let minus = momentum(&FlatPoint(x.sub(&v.scale(t)).into()));
            let fd = (&plus.s - &minus.s).scale_real(0.5 / t);
            Ok(dist(&fd, &momentum_differential(&FlatPoint(m), &v).s))
        }),
        check(ctx, "pairing_is_real", 1e-12, Agg::Max, |r| {
            let mu = momentum(&FlatPoint(sample_block(r, n, 0.6)));
            let imag = basis(r, n).iter().map(|a| mu.pair_complex(a).im.abs()).fold(0.0, f64::max);
            Ok(imag.max(mu.anti_hermitian_residual()).max(mu.block_residual()))
        }),
        check(ctx, "momentum_zero_on_sp", 1e-10, Agg::Max, move |r| {
            Ok(momentum(&FlatPoint(sample_sp(r, n, margin)?)).frobenius_norm())
        }),
        check(ctx, "zero_level_set_iff_sp", 0.0, Agg::Count, move |r| {
            let on = sample_sp(r, n, margin)?;
            let off = sample_block(r, n, 0.5);
            let mut bad = 0.0;
            for (a, expect) in [(on, true), (off, false)] {
                let level = level_set_residual(&FlatPoint(a.clone()), &basis(r, n)) <= tol;
                bad += flag(level != is_sp(&a, tol).passed) + flag(level != expect);
            }
            Ok(bad)
        }),
    ]
}

pub fn defect(ctx: &Ctx) -> Vec<Option<CheckRecord>> {
    let n = ctx.n;
    vec![
        check(ctx, "lhs_equals_rhs", 1e-10, Agg::Max, |r| {
            let a = sample_o12(r, n)?;
            let alg = sample_o12_algebra(r, n);
            let m = FlatPoint(sample_block(r, n, 0.5));
            Ok(equivariance_defect(&m, &a, &alg)?.gap())
        }),
        check(ctx, "independent_of_m", 1e-10, Agg::Max, |r| {
            let a = sample_o12(r, n)?;
            let alg = sample_o12_algebra(r, n);
            let mut lhs = Vec::with_capacity(10);
            for _ in 0..10 {
                lhs.push(equivariance_defect(&FlatPoint(sample_block(r, n, 0.5)), &a, &alg)?.lhs);
            }
            Ok(lhs.iter().map(|x| (x - lhs[0]).abs()).fold(0.0, f64::max))
        }),
        check(ctx, "vanishes_on_u1", 1e-10, Agg::Max, |r| {
            let u = sample_u1(r, n)?;
            let alg = sample_o12_algebra(r, n);
            let d = equivariance_defect(&FlatPoint(sample_block(r, n, 0.5)), &u, &alg)?;
            Ok(d.lhs.abs().max(d.rhs.abs()))
        }),
        check(ctx, "coadjoint_transport", 1e-10, Agg::Max, |r| {
            let a = sample_o12(r, n)?;
            let alg = sample_o12_algebra(r, n);
            let mu = momentum(&FlatPoint(sample_block(r, n, 0.5)));
            Ok((coadjoint(&a, &mu)?.pair(&alg) - mu.pair(&adjoint_action(&a, &alg)?)).abs())
        }),
    ]
}

pub fn kahler(ctx: &Ctx) -> Vec<Option<CheckRecord>> {
    let n = ctx.n;
    let margin = ctx.margin;
    vec![
        check(ctx, "u1_invariance", 1e-10, Agg::Max, |r| {
            let u = sample_u1(r, n)?;
            let v = sample_tangent(r, n);
            let w = sample_tangent(r, n);
            let (vu, wu) = (v.mul_operator(&u), w.mul_operator(&u));
            let metric = (kahler_metric(&vu, &wu) - kahler_metric(&v, &w)).abs();
            let omega = (kahler_omega(&vu, &wu) - kahler_omega(&v, &w)).abs();
            let j = tangent_dist(&kahler_J(&v).mul_operator(&u), &kahler_J(&vu));
            Ok(metric.max(omega).max(j))
        }),
        check(ctx, "values_are_real", 1e-12, Agg::Max, |r| {
            let v = sample_tangent(r, n);
            let w = sample_tangent(r, n);
            Ok(kahler_metric_complex(&v, &w).im.abs().max(kahler_omega_complex(&v, &w).im.abs()))
        }),
        check(ctx, "omega_metric_compatible", 1e-12, Agg::Max, |r| {
            let v = sample_tangent(r, n);
            let w = sample_tangent(r, n);
            let om = kahler_omega(&v, &w);
            let scale = kahler_metric(&v, &v).sqrt() * kahler_metric(&w, &w).sqrt();
            let residuals = [
                om - kahler_metric(&v, &kahler_J(&w)),
                om + kahler_metric(&kahler_J(&v), &w),
                om + kahler_omega(&w, &v),
                kahler_omega(&v, &v),
            ];
            Ok(residuals.iter().map(|x| x.abs()).fold(0.0, f64::max) / scale.max(1.0))
        }),
        check(ctx, "metric_positive", 0.0, Agg::Count, |r| {
            let v = sample_tangent(r, n);
            Ok(flag(!(kahler_metric(&v, &v) > 0.0)))
        }),
        check(ctx, "level_set_u1_preserved", 1e-10, Agg::Max, move |r| {
            let m = sample_sp(r, n, margin)?;
            let u = sample_u1(r, n)?;
            Ok(level_set_residual(&FlatPoint(m.compose(&u)?), &basis(r, n)))
        }),
    ]
}

pub fn quotient_form(ctx: &Ctx) -> Vec<Option<CheckRecord>> {
    let n = ctx.n;
    let margin = ctx.margin;
    let origin = SiegelPoint::origin(n);
    let sym = |r: &mut ChaCha8Rng| (sample_sym(r, n), sample_sym(r, n));
    vec![
        check(ctx, "origin_value", 1e-12, Agg::Max, |r| {
            let (u, v) = sym(r);
            let direct = 2.0 * u.matrix().inner(v.matrix()).im;
            Ok((omega_q(&origin, &u, &v)? - direct).abs())
        }),
        check(ctx, "identity_coset_lift", 1e-12, Agg::Max, |r| {
            // Literal ω_M on [[0, U], [Ū, 0]] carries the opposite sign.
            let (u, v) = sym(r);
            Ok((omega_m_on_complement(&u, &v) + omega_q(&origin, &u, &v)?).abs())
        }),
        check(ctx, "theorem_vs_proof_form", 1e-10, Agg::Max, move |r| {
            let z = sample_point(r, n, margin);
            let (u, v) = sym(r);
            Ok((omega_q(&z, &u, &v)? - omega_q_proof_form(&z, &u, &v)?).abs())
        }),
        check(ctx, "antisymmetric", 1e-10, Agg::Max, move |r| {
            let z = sample_point(r, n, margin);
            let (u, v) = sym(r);
            Ok((omega_q(&z, &u, &v)? + omega_q(&z, &v, &u)?).abs())
        }),
        check(ctx, "sp_invariance", 1e-8, Agg::Max, move |r| {
            let a = sample_sp(r, n, 0.3)?;
            let z = sample_point(r, n, 0.3);
            let (u, v) = sym(r);
            omega_q_invariance_residual(&a, &z, &u, &v)
        }),
        check(ctx, "transporter_invariance", 1e-8, Agg::Max, move |r| {
            let t = transporter(&sample_point(r, n, margin), margin)?;
            let (u, v) = sym(r);
            omega_q_invariance_residual(&t, &origin, &u, &v)
        }),
        check(ctx, "coset_representative_independent", 1e-9, Agg::Max, move |r| {
            let a = sample_sp(r, n, margin)?;
            let u1 = sample_u1(r, n)?;
            let (u, v) = sym(r);
            let w1 = omega_q_via_representative(&a, &u, &v);
            let w2 = omega_q_via_representative(&a.compose(&u1)?, &u, &v);
            let direct = omega_q(&coset_rep(&a)?, &u, &v)?;
            Ok((w1 - w2).abs().max((w1 - direct).abs()))
        }),
        check(ctx, "resolvent_identity", 1e-10, Agg::Max, move |r| {
            coset_resolvent_residual(&sample_sp(r, n, margin)?)
        }),
    ]
}

fn real_dist(a: &RealMatrix, b: &RealMatrix) -> f64 {
    (a - b).frobenius_norm()
}

pub fn findim(ctx: &Ctx) -> Vec<Option<CheckRecord>> {
    let n = ctx.n.min(FINDIM_MAX_DIM);
    let tol = ctx.tol;
    vec![
        check(ctx, "level_set_iff_sp", 0.0, Agg::Count, move |r| {
            let target = j_n(n).scale(-0.5);
            let on = sample_sp_real(r, n);
            let off = sample_real(r, n, 1.0);
            let mut bad = 0.0;
            for (m, expect) in [(on, true), (off, false)] {
                let level = mu_o_level_residual(&m, &target) <= 0.5 * tol;
                bad += flag(level != is_sp_real(&m, tol).passed) + flag(level != expect);
            }
            Ok(bad)
        }),
        check(ctx, "unitary_embedding_in_stabilizer", 1e-12, Agg::Max, |r| {
            let e = embed_unitary(&sample_unitary(r, n)?, 1e-10)?;
            let j = j_n(n);
            let commute = real_dist(&(&e * &j), &(&j * &e));
            Ok(commute.max(is_o_real(&e, 0.0).max_residual()).max(is_sp_real(&e, 0.0).max_residual()))
        }),
        check(ctx, "unitary_embedding_homomorphism", 1e-12, Agg::Max, |r| {
            let u1 = sample_unitary(r, n)?;
            let u2 = sample_unitary(r, n)?;
            let lhs = embed_unitary(&(&u1 * &u2), 1e-9)?;
            let rhs = &embed_unitary(&u1, 1e-10)? * &embed_unitary(&u2, 1e-10)?;
            Ok(real_dist(&lhs, &rhs))
        }),
        check(ctx, "stabilizer_iff_unitary_image", 0.0, Agg::Count, move |r| {
            let mut bad = 0.0;
            let candidates = [embed_unitary(&sample_unitary(r, n)?, 1e-10)?, sample_o_real(r, n)];
            for m in candidates {
                let (image, unit) = unitary_image_residual(&m);
                bad += flag(stabilizer_check(&m, tol) != (image <= tol && unit <= tol));
            }
            Ok(bad)
        }),
        check(ctx, "actions_commute", 1e-12, Agg::Max, |r| {
            let m = sample_real(r, n, 1.0);
            let s = sample_sp_real(r, n);
            let o = sample_o_real(r, n);
            let assoc = real_dist(&(&(&s * &m) * &o), &(&s * &(&m * &o)));
            let o_level = real_dist(&mu_o(&(&s * &m)), &mu_o(&m));
            let sp_level = real_dist(&mu_sp(&(&m * &o)), &mu_sp(&m));
            Ok(assoc.max(o_level).max(sp_level))
        }),
        check(ctx, "hamiltonian_identities_fd", 1e-7, Agg::Max, |r| {
            let m = sample_real(r, n, 1.0);
            let v = sample_real(r, n, 1.0);
            let t = 1e-5;
            let (mp, mm) = (&m + &v.scale(t), &m - &v.scale(t));
            let a = sample_sp_algebra_real(r, n);
            let b = sample_antisymmetric_real(r, 2 * n);
            let d_sp = pair_real(&(&mu_sp(&mp) - &mu_sp(&mm)).scale(0.5 / t), &a);
            let d_o = pair_real(&(&mu_o(&mp) - &mu_o(&mm)).scale(0.5 / t), &b);
            let sp = (d_sp - omega_flat(&(&a * &m), &v)).abs();
            let o = (d_o - omega_flat(&(&m * &b), &v)).abs();
            Ok(sp.max(o))
        }),
    ]
}

/// Dimensions `8, 16, 32, …` up to `dim_max`, capped at 64.
pub fn probe_dims(dim_max: usize) -> Vec<usize> {
    let mut dims = Vec::new();
    let mut d = 8;
    while d <= dim_max.min(64) {
        dims.push(d);
        d *= 2;
    }
    dims
}

pub fn convergence(ctx: &Ctx) -> std::result::Result<Vec<CheckRecord>, crate::CliError> {
    let dims = probe_dims(ctx.dim_max);
    if dims.len() < 2 {
        return Err(crate::CliError::ConfigInvalid(format!(
            "convergence probe needs dim_max ≥ 16, got {}",
            ctx.dim_max
        )));
    }
    let fast = convergence_probe(&ProbeConfig::new(dims.clone(), 2.0, ctx.seed))?;
    let slow = convergence_probe(&ProbeConfig::new(dims.clone(), 0.6, ctx.seed))?;
    let zero = convergence_probe(&ProbeConfig { amplitude: 0.0, ..ProbeConfig::new(dims, 2.0, ctx.seed) })?;

    let omega_steps = {
        let d: Vec<f64> = fast.iter().filter_map(|r| r.omega_q_diff).collect();
        d.windows(2).filter(|w| !(w[1] < w[0])).count()
    };
    let growth = slow.last().unwrap().trace_norm / slow[0].trace_norm;
    let zero_sum: f64 = zero.iter().map(|r| r.pairing.abs() + r.omega_q.abs() + r.mixed_norm).sum();
    Ok(vec![
        CheckRecord::new("pairing_differences_decrease", 1, non_decreasing_steps(&fast) as f64, 0.0),
        CheckRecord::new("omega_q_differences_decrease", 1, omega_steps as f64, 0.0),
        // Residual 2/ratio, so the check passes when the ratio reaches 2.
        CheckRecord::new("trace_norm_grows_without_decay", 1, 2.0 / growth, 1.0),
        CheckRecord::new("zero_operator_vanishes", 1, zero_sum, 0.0),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(n: usize, trials: usize) -> Ctx {
        Ctx { n, trials, seed: 3, tol: 1e-9, margin: 0.05, dim_max: 64, only: None }
    }

    #[test]
    fn streams_differ_by_name_and_trial() {
        let a: u64 = trial_rng(1, "x", 0).gen();
        assert_eq!(a, trial_rng(1, "x", 0).gen::<u64>());
        assert_ne!(a, trial_rng(1, "y", 0).gen::<u64>());
        assert_ne!(a, trial_rng(1, "x", 1).gen::<u64>());
        assert_ne!(a, trial_rng(2, "x", 0).gen::<u64>());
    }

    #[test]
    fn basis_subsample_only_above_cutoff() {
        let mut r = trial_rng(0, "b", 0);
        assert_eq!(basis(&mut r, 3).len(), o12_dim(3));
        assert_eq!(basis(&mut r, 12).len(), BASIS_SAMPLE);
    }

    #[test]
    fn threshold_scale() {
        assert_eq!(ctx(4, 1).threshold_scale(), 1.0);
        assert_eq!(ctx(16, 1).threshold_scale(), 1.0);
        assert_eq!(ctx(32, 1).threshold_scale(), 2.0);
    }

    #[test]
    fn probe_dims_follow_dim_max() {
        assert_eq!(probe_dims(64), vec![8, 16, 32, 64]);
        assert_eq!(probe_dims(40), vec![8, 16, 32]);
        assert_eq!(probe_dims(200), vec![8, 16, 32, 64]);
        assert!(convergence(&Ctx { dim_max: 8, ..ctx(4, 1) }).is_err());
    }

    #[test]
    fn filter_selects_checks() {
        let c = Ctx { only: Some(vec!["argtanh_round_trip".into(), "zero_operator_vanishes".into()]), ..ctx(2, 2) };
        let names: Vec<String> = run(Suite::All, &c).unwrap().into_iter().map(|r| r.name).collect();
        assert_eq!(names, ["transitivity/argtanh_round_trip", "convergence/zero_operator_vanishes"]);
    }

    #[test]
    fn every_suite_passes_small() {
        for s in Suite::EACH {
            for c in run(s, &ctx(3, 4)).unwrap() {
                assert!(c.pass, "{} failed: {} > {}", c.name, c.max_residual, c.threshold);
            }
        }
    }
}
