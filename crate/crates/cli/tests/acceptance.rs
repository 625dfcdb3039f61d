//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the lines are always printed; exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use siegel_cli::probe::{convergence_probe, non_decreasing_steps, ProbeConfig};
use siegel_cli::{run_suite, CheckRecord, Suite, SuiteConfig};

struct Outcome {
    pass: bool,
    detail: String,
}

/// Runs `suite` at each dimension and keeps the named checks.
fn checks(suite: Suite, dims: &[usize], trials: usize, names: &[&str]) -> Vec<(usize, CheckRecord)> {
    let mut out = Vec::new();
    for &n in dims {
        let cfg = SuiteConfig::new(suite)
            .with_dim(n)
            .with_trials(trials)
            .with_seed(20240601)
            .with_only(names);
        let report = run_suite(&cfg).expect("suite configuration is valid");
        for c in report.checks {
            let short = c.name.rsplit('/').next().unwrap().to_string();
            if names.contains(&short.as_str()) {
                out.push((n, c));
            }
        }
    }
    assert_eq!(out.len(), dims.len() * names.len(), "missing checks for {suite}");
    out
}

fn summarize(records: &[(usize, CheckRecord)]) -> Outcome {
    let pass = records.iter().all(|(_, c)| c.pass);
    let detail = records
        .iter()
        .map(|(n, c)| {
            let name = c.name.rsplit('/').next().unwrap();
            format!("{name}@n={n} {:.2e}/{:.0e}", c.max_residual, c.threshold)
        })
        .collect::<Vec<_>>()
        .join(", ");
    Outcome { pass, detail }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let recs = checks(Suite::Transitivity, &[2, 4, 8, 16], 100, &["transporter_round_trip"]);
    let elapsed = start.elapsed();
    let mut o = summarize(&recs);
    o.pass &= elapsed < Duration::from_secs(10);
    o.detail.push_str(&format!("; {:.2} s (limit 10 s)", elapsed.as_secs_f64()));
    o
}

fn criterion_2() -> Outcome {
    summarize(&checks(Suite::Groups, &[1, 2, 4, 8, 16], 50, &["exp_offdiag_vs_oracle"]))
}

fn criterion_3() -> Outcome {
    summarize(&checks(Suite::Momentum, &[4], 50, &["hamiltonian_identity", "differential_vs_fd"]))
}

fn criterion_4() -> Outcome {
    summarize(&checks(Suite::Defect, &[4], 50, &["lhs_equals_rhs", "independent_of_m", "vanishes_on_u1"]))
}

fn criterion_5() -> Outcome {
    // Each trial tests one group element and one generic block operator.
    summarize(&checks(Suite::Momentum, &[4], 100, &["zero_level_set_iff_sp"]))
}

fn criterion_6() -> Outcome {
    summarize(&checks(Suite::Kahler, &[4], 50, &["u1_invariance"]))
}

fn criterion_7() -> Outcome {
    summarize(&checks(
        Suite::QuotientForm,
        &[8],
        100,
        &[
            "origin_value",
            "theorem_vs_proof_form",
            "sp_invariance",
            "coset_representative_independent",
            "resolvent_identity",
        ],
    ))
}

fn criterion_8() -> Outcome {
    summarize(&checks(
        Suite::Findim,
        &[1, 2, 4, 6],
        100,
        &["level_set_iff_sp", "unitary_embedding_in_stabilizer", "unitary_embedding_homomorphism"],
    ))
}

fn criterion_9() -> Outcome {
    let dims = vec![8, 16, 32, 64];
    let fast = convergence_probe(&ProbeConfig::new(dims.clone(), 2.0, 20240601)).unwrap();
    let slow = convergence_probe(&ProbeConfig::new(dims, 0.6, 20240601)).unwrap();
    let steps = non_decreasing_steps(&fast);
    let diffs: Vec<String> = fast.iter().filter_map(|r| r.pairing_diff).map(|d| format!("{d:.3e}")).collect();
    let ratio = slow[3].trace_norm / slow[0].trace_norm;
    Outcome {
        pass: steps == 0 && ratio >= 2.0,
        detail: format!("decay 2 diffs [{}]; decay 0.6 trace-norm ratio {ratio:.3}", diffs.join(", ")),
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("transitivity round trip", criterion_1),
        ("block exponential closed form", criterion_2),
        ("momentum map identity", criterion_3),
        ("non-equivariance defect", criterion_4),
        ("zero level set equals Sp", criterion_5),
        ("Kahler invariance under U1", criterion_6),
        ("reduced symplectic form", criterion_7),
        ("finite-dimensional dual pair", criterion_8),
        ("convergence probe", criterion_9),
    ];
    let start = Instant::now();
    let mut failures = 0;
    for (k, (title, run)) in criteria.iter().enumerate() {
        let o = run();
        failures += usize::from(!o.pass);
        println!("criterion {} {:<30} {}  {}", k + 1, title, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    // Every suite at the CLI defaults, on top of the runs above.
    let all = run_suite(&SuiteConfig::new(Suite::All)).expect("default configuration is valid");
    let total = start.elapsed();
    let ok = all.pass && total < Duration::from_secs(120);
    failures += usize::from(!ok);
    println!(
        "full suite                     {}  {} checks at defaults ({} failing); {:.2} s total (limit 120 s)",
        if ok { "PASS" } else { "FAIL" },
        all.checks.len(),
        all.failed().count(),
        total.as_secs_f64()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criterion line(s) failed");
        ExitCode::FAILURE
    }
}
