use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::CliError;

/// Largest truncation accepted unless `SIEGEL_DIM_MAX` says otherwise.
pub const DEFAULT_DIM_MAX: usize = 64;
pub const DIM_MAX_ENV: &str = "SIEGEL_DIM_MAX";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Groups,
    Transitivity,
    Momentum,
    Defect,
    Kahler,
    QuotientForm,
    Findim,
    Convergence,
    All,
}

impl Suite {
    pub const EACH: [Suite; 8] = [
        Suite::Groups,
        Suite::Transitivity,
        Suite::Momentum,
        Suite::Defect,
        Suite::Kahler,
        Suite::QuotientForm,
        Suite::Findim,
        Suite::Convergence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Groups => "groups",
            Suite::Transitivity => "transitivity",
            Suite::Momentum => "momentum",
            Suite::Defect => "defect",
            Suite::Kahler => "kahler",
            Suite::QuotientForm => "quotient-form",
            Suite::Findim => "findim",
            Suite::Convergence => "convergence",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| CliError::UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub dim: usize,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub margin: f64,
    pub report_path: Option<PathBuf>,
    pub dim_max: usize,
    /// Restrict the run to checks with these short names.
    pub only: Option<Vec<String>>,
}

impl SuiteConfig {
    pub fn new(suite: Suite) -> Self {
        Self {
            suite,
            dim: 4,
            trials: 50,
            seed: 0,
            tol: 1e-9,
            margin: siegel_core::tolerance::DEFAULT_MARGIN,
            report_path: None,
            dim_max: DEFAULT_DIM_MAX,
            only: None,
        }
    }

    pub fn with_dim(mut self, dim: usize) -> Self {
        self.dim = dim;
        self
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_only(mut self, names: &[&str]) -> Self {
        self.only = Some(names.iter().map(|s| s.to_string()).collect());
        self
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::ConfigInvalid(msg));
        if self.dim == 0 {
            return bad("dim must be positive".into());
        }
        if self.dim > self.dim_max {
            return bad(format!("dim {} exceeds dim_max {}", self.dim, self.dim_max));
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return bad(format!("tol must be positive, got {}", self.tol));
        }
        if !(self.margin > 0.0 && self.margin < 0.5) {
            return bad(format!("margin must lie in (0, 0.5), got {}", self.margin));
        }
        Ok(())
    }
}

/// Reads `SIEGEL_DIM_MAX`, falling back to [`DEFAULT_DIM_MAX`] when unset.
pub fn dim_max_from_env() -> Result<usize, CliError> {
    match std::env::var(DIM_MAX_ENV) {
        Err(_) => Ok(DEFAULT_DIM_MAX),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(d) if d > 0 => Ok(d),
            _ => Err(CliError::ConfigInvalid(format!("{DIM_MAX_ENV}={v:?} is not a positive integer"))),
        },
    }
}
