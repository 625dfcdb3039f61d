/// Numerical thresholds shared across the crate.
///
/// Every routine that needs a threshold either takes one explicitly or
/// falls back to [`Tolerances::default`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative Hermiticity bound accepted by the eigensolver.
    pub herm_tol: f64,
    /// Relative reconstruction bound of the eigensolver.
    pub eig_tol: f64,
    /// Symmetry residual `‖Z^T − Z‖_F / max(1, ‖Z‖_F)`.
    pub sym_tol: f64,
    /// Smallest singular value below which a matrix is treated as singular.
    pub sing_tol: f64,
    pub cond_max: f64,
    /// Lower bound on the smallest eigenvalue of `id − Z*Z`.
    pub pd_floor: f64,
    /// Distance from the unit sphere kept by samplers and `argtanh`.
    pub margin: f64,
    /// Pass threshold of the membership predicates.
    pub pass: f64,
}

pub const DEFAULT_MARGIN: f64 = 0.05;

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            herm_tol: 1e-10,
            eig_tol: 1e-10,
            sym_tol: 1e-10,
            sing_tol: 1e-13,
            cond_max: 1e12,
            pd_floor: 1e-12,
            margin: DEFAULT_MARGIN,
            pass: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn with_margin(mut self, margin: f64) -> Self {
        self.margin = margin;
        self
    }

    pub fn with_pass(mut self, pass: f64) -> Self {
        self.pass = pass;
        self
    }
}
