use rand::Rng;

use super::{hermitian_eig, op_norm, ComplexMatrix, C64};
use crate::error::Result;

/// Structure imposed on a sampled matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MatrixKind {
    /// Independent entries with real and imaginary parts uniform in `[-1, 1)`.
    General,
    Hermitian,
    AntiHermitian,
    /// `M^T = M`.
    SymmetricT,
    /// Symmetric with `‖M‖_op ≤ 1 − margin`.
    ContractionSymmetric { margin: f64 },
}

fn general<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

/// Draws a matrix of the requested kind. Deterministic for a given RNG state.
///
/// Structured kinds need `rows == cols`.
pub fn sample_matrix<R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    kind: MatrixKind,
) -> ComplexMatrix {
    let m = general(rng, rows, cols);
    match kind {
        MatrixKind::General => m,
        MatrixKind::Hermitian => m.hermitian_part(),
        MatrixKind::AntiHermitian => (&m - &m.adjoint()).scale_real(0.5),
        MatrixKind::SymmetricT => (&m + &m.transpose()).scale_real(0.5),
        MatrixKind::ContractionSymmetric { margin } => {
            let s = (&m + &m.transpose()).scale_real(0.5);
            // The Gram matrix of a finite matrix is always Hermitian, so the
            // norm cannot fail here.
            let norm = op_norm(&s).expect("operator norm of a finite matrix");
            s.scale_real((1.0 - margin) / norm.max(1.0))
        }
    }
}

/// Unitary matrix from the eigenvectors of a random Hermitian matrix.
pub fn sample_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<ComplexMatrix> {
    let h = sample_matrix(rng, n, n, MatrixKind::Hermitian);
    Ok(hermitian_eig(&h)?.eigenvectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn structured_kinds_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = sample_matrix(&mut rng, 5, 5, MatrixKind::AntiHermitian);
        assert!(a.anti_hermitian_residual() == 0.0);
        let h = sample_matrix(&mut rng, 5, 5, MatrixKind::Hermitian);
        assert!(h.hermitian_residual() == 0.0);
        let s = sample_matrix(&mut rng, 5, 5, MatrixKind::SymmetricT);
        assert!(s.symmetry_residual() == 0.0);
        for n in [1, 2, 8, 16] {
            let z = sample_matrix(&mut rng, n, n, MatrixKind::ContractionSymmetric { margin: 0.05 });
            assert!(z.symmetry_residual() == 0.0);
            assert!(op_norm(&z).unwrap() <= 0.95 + 1e-12);
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let a = sample_matrix(&mut ChaCha8Rng::seed_from_u64(42), 4, 3, MatrixKind::General);
        let b = sample_matrix(&mut ChaCha8Rng::seed_from_u64(42), 4, 3, MatrixKind::General);
        assert_eq!(a, b);
        let u = sample_unitary(&mut ChaCha8Rng::seed_from_u64(9), 4).unwrap();
        assert!((&(&u.adjoint() * &u) - &ComplexMatrix::identity(4)).frobenius_norm() < 1e-13);
    }
}
