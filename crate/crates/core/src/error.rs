use core::fmt;

/// Failures raised by the numerical routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    /// `‖H − H*‖_F` exceeded `herm_tol · ‖H‖_F`.
    NotHermitian { residual: f64 },
    /// Jacobi sweeps did not reduce the off-diagonal mass.
    EigFailure { sweeps: usize },
    NotSymmetric { residual: f64 },
    NotUnitary { residual: f64 },
    Singular { sigma_min: f64 },
    /// `(h̄Z + ḡ)` is numerically singular in the Möbius action.
    DenominatorSingular { sigma_min: f64 },
    /// Operator norm too close to (or beyond) 1 for `argtanh`.
    SpectrumAtOne { norm: f64, limit: f64 },
    NotInDisc { symmetry: f64, min_eig: f64 },
    NonFinite,
    Invalid(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { op, left, right } => write!(
                f,
                "dimension mismatch in {op}: {}x{} vs {}x{}",
                left.0, left.1, right.0, right.1
            ),
            Error::NotHermitian { residual } => {
                write!(f, "matrix is not Hermitian (relative residual {residual:e})")
            }
            Error::EigFailure { sweeps } => {
                write!(f, "Hermitian eigensolver did not converge after {sweeps} sweeps")
            }
            Error::NotSymmetric { residual } => {
                write!(f, "matrix is not symmetric (residual {residual:e})")
            }
            Error::NotUnitary { residual } => {
                write!(f, "matrix is not unitary (residual {residual:e})")
            }
            Error::Singular { sigma_min } => {
                write!(f, "matrix is singular (smallest singular value {sigma_min:e})")
            }
            Error::DenominatorSingular { sigma_min } => write!(
                f,
                "Möbius denominator is singular (smallest singular value {sigma_min:e})"
            ),
            Error::SpectrumAtOne { norm, limit } => {
                write!(f, "operator norm {norm} exceeds the admissible bound {limit}")
            }
            Error::NotInDisc { symmetry, min_eig } => write!(
                f,
                "point is outside the Siegel disc (symmetry residual {symmetry:e}, min eig of id - Z*Z {min_eig:e})"
            ),
            Error::NonFinite => f.write_str("matrix has non-finite entries"),
            Error::Invalid(msg) => f.write_str(msg),
        }
    }
}

impl core::error::Error for Error {}
