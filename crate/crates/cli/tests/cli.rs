use std::process::Command;

use serde_json::Value;
use siegel_cli::{run_suite, Suite, SuiteConfig};

fn siegel() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_siegel"));
    c.env_remove("SIEGEL_DIM_MAX");
    c
}

fn code(cmd: &mut Command) -> i32 {
    cmd.output().expect("binary runs").status.code().expect("exit code")
}

#[test]
fn transitivity_example() {
    let cfg = SuiteConfig::new(Suite::Transitivity).with_dim(8).with_trials(50).with_seed(1);
    let report = run_suite(&cfg).unwrap();
    assert!(report.pass);
    let round_trip = report.checks.iter().find(|c| c.name.ends_with("transporter_round_trip")).unwrap();
    assert!(round_trip.max_residual <= 1e-9);
}

#[test]
fn defect_example() {
    let report = run_suite(&SuiteConfig::new(Suite::Defect).with_dim(4)).unwrap();
    assert!(report.pass);
    let c = report.checks.iter().find(|c| c.name == "defect/lhs_equals_rhs").unwrap();
    assert_eq!(c.trials, 50);
    assert!(c.max_residual <= 1e-10);
}

#[test]
fn reports_are_byte_identical() {
    let cfg = SuiteConfig::new(Suite::All).with_dim(2).with_trials(5).with_seed(0);
    let a = run_suite(&cfg).unwrap().to_json(false);
    let b = run_suite(&cfg).unwrap().to_json(false);
    assert_eq!(a, b);
    let other = run_suite(&cfg.clone().with_seed(1)).unwrap().to_json(false);
    assert_ne!(a, other);
}

#[test]
fn report_file_schema_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let mut docs = Vec::new();
    for name in ["a.json", "b.json"] {
        let path = dir.path().join(name);
        let status = siegel()
            .args(["--suite", "kahler", "--dim", "3", "--trials", "4", "--seed", "9", "--report"])
            .arg(&path)
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0));
        let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert!(v["wall_time_s"].as_f64().unwrap() >= 0.0);
        v.as_object_mut().unwrap().remove("wall_time_s");
        docs.push(v);
    }
    assert_eq!(docs[0], docs[1]);
    let v = &docs[0];
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["suite"], "kahler");
    assert_eq!(v["config"]["dim"], 3);
    assert_eq!(v["config"]["seed"], 9);
    assert_eq!(v["config"]["dim_max"], 64);
    assert_eq!(v["threshold_scale"], 1.0);
    assert_eq!(v["pass"], true);
    for c in v["checks"].as_array().unwrap() {
        for key in ["name", "trials", "max_residual", "threshold", "pass"] {
            assert!(c.get(key).is_some(), "missing {key}");
        }
    }
}

#[test]
fn exit_codes() {
    assert_eq!(code(siegel().args(["--suite", "groups", "--dim", "2", "--trials", "2"])), 0);
    // A membership tolerance far below round-off makes the level-set check fail.
    assert_eq!(code(siegel().args(["--suite", "momentum", "--dim", "2", "--trials", "2", "--tol", "1e-300"])), 1);
    assert_eq!(code(siegel().args(["--suite", "nope"])), 2);
    assert_eq!(code(siegel().args(["--dim", "0"])), 2);
    assert_eq!(code(siegel().args(["--dim", "65"])), 2);
    assert_eq!(code(siegel().args(["--trials", "0"])), 2);
    assert_eq!(code(siegel().args(["--margin", "0.7"])), 2);
    assert_eq!(code(siegel().args(["--tol", "-1"])), 2);
    assert_eq!(code(siegel().args(["--suite", "groups", "--dim", "5"]).env("SIEGEL_DIM_MAX", "4")), 2);
    assert_eq!(code(siegel().args(["--suite", "groups", "--dim", "2"]).env("SIEGEL_DIM_MAX", "x")), 2);
    assert_eq!(code(siegel().args(["--suite", "convergence"]).env("SIEGEL_DIM_MAX", "8")), 2);
}

#[test]
fn summary_goes_to_stdout() {
    let out = siegel().args(["--suite", "convergence"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("convergence/pairing_differences_decrease"));
    assert!(text.contains("convergence probe, decay 0.6"));
    assert!(text.trim_end().lines().any(|l| l.starts_with("PASS")));
}
