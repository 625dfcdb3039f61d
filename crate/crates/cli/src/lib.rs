//! Seeded verification suites over `siegel-core`, the truncation
//! convergence probe, and JSON reports.

pub mod config;
pub mod error;
pub mod probe;
pub mod report;
pub mod suites;

use std::time::Instant;

pub use config::{Suite, SuiteConfig};
pub use error::CliError;
pub use probe::{convergence_probe, ProbeConfig, ProbeRow};
pub use report::{CheckRecord, SuiteReport};

/// Runs `cfg.suite`. Identical configurations give identical reports apart
/// from `wall_time_s`.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport, CliError> {
    cfg.validate()?;
    let start = Instant::now();
    let ctx = suites::Ctx {
        n: cfg.dim,
        trials: cfg.trials,
        seed: cfg.seed,
        tol: cfg.tol,
        margin: cfg.margin,
        dim_max: cfg.dim_max,
        only: cfg.only.clone(),
    };
    let checks = suites::run(cfg.suite, &ctx)?;
    Ok(SuiteReport::new(cfg, ctx.threshold_scale(), checks, start.elapsed().as_secs_f64()))
}
