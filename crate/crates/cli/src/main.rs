use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use siegel_cli::config::dim_max_from_env;
use siegel_cli::probe::{convergence_probe, format_table, ProbeConfig};
use siegel_cli::suites::probe_dims;
use siegel_cli::{run_suite, CliError, Suite, SuiteConfig};

/// Seeded numerical checks for the restricted Siegel disc.
#[derive(Debug, Parser)]
#[command(name = "siegel", version)]
struct Args {
    /// groups, transitivity, momentum, defect, kahler, quotient-form,
    /// findim, convergence or all.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Truncation dimension n.
    #[arg(long, default_value_t = 4)]
    dim: usize,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Membership tolerance for level-set and group predicates.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Distance kept from the disc boundary when sampling, in (0, 0.5).
    #[arg(long, default_value_t = 0.05)]
    margin: f64,
    /// Write the JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
}

fn config(args: Args) -> Result<SuiteConfig, CliError> {
    let suite: Suite = args.suite.parse()?;
    let cfg = SuiteConfig {
        suite,
        dim: args.dim,
        trials: args.trials,
        seed: args.seed,
        tol: args.tol,
        margin: args.margin,
        report_path: args.report,
        dim_max: dim_max_from_env()?,
        only: None,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn run(cfg: &SuiteConfig) -> Result<bool, CliError> {
    let report = run_suite(cfg)?;
    println!("{}", report.summary());
    if matches!(cfg.suite, Suite::Convergence | Suite::All) {
        let dims = probe_dims(cfg.dim_max);
        for decay in [2.0, 0.6] {
            let rows = convergence_probe(&ProbeConfig::new(dims.clone(), decay, cfg.seed))?;
            println!("\nconvergence probe, decay {decay}\n{}", format_table(&rows));
        }
    }
    if let Some(path) = &cfg.report_path {
        std::fs::write(path, report.to_json(true))?;
    }
    Ok(report.pass)
}

fn main() -> ExitCode {
    let cfg = match config(Args::parse()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("siegel: {e}");
            return ExitCode::from(2);
        }
    };
    match run(&cfg) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("siegel: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
