use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;

use crate::config::SuiteConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub trials: usize,
    /// `null` in JSON when a trial failed numerically.
    pub max_residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, trials: usize, max_residual: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            trials,
            max_residual,
            threshold,
            pass: max_residual <= threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub dim: usize,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub margin: f64,
    pub dim_max: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub only: Option<Vec<String>>,
}

impl From<&SuiteConfig> for ConfigEcho {
    fn from(c: &SuiteConfig) -> Self {
        Self {
            dim: c.dim,
            trials: c.trials,
            seed: c.seed,
            tol: c.tol,
            margin: c.margin,
            dim_max: c.dim_max,
            only: c.only.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub suite: String,
    pub config: ConfigEcho,
    /// Factor applied to every non-zero residual threshold, `max(1, dim/16)`.
    pub threshold_scale: f64,
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

impl SuiteReport {
    pub fn new(cfg: &SuiteConfig, threshold_scale: f64, checks: Vec<CheckRecord>, wall_time_s: f64) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            suite: cfg.suite.name().to_string(),
            config: cfg.into(),
            threshold_scale,
            pass: checks.iter().all(|c| c.pass),
            checks,
            wall_time_s: Some(wall_time_s),
        }
    }

    pub fn failed(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Pretty JSON with 17 significant digits per float. Without timing the
    /// output depends only on the configuration.
    pub fn to_json(&self, include_timing: bool) -> String {
        let mut out = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut out, Digits17::default());
        if include_timing {
            self.serialize(&mut ser)
        } else {
            SuiteReport { wall_time_s: None, ..self.clone() }.serialize(&mut ser)
        }
        .expect("report serialization cannot fail");
        String::from_utf8(out).expect("serde_json emits UTF-8")
    }

    /// Fixed-width table for terminals.
    pub fn summary(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        let mut s = format!(
            "suite {} (n = {}, trials = {}, seed = {}, threshold scale {})\n",
            self.suite, self.config.dim, self.config.trials, self.config.seed, self.threshold_scale
        );
        for c in &self.checks {
            s.push_str(&format!(
                "  {:<width$}  {:>5}  max {:>10.3e}  thr {:>9.1e}  trials {}\n",
                c.name,
                if c.pass { "ok" } else { "FAIL" },
                c.max_residual,
                c.threshold,
                c.trials,
            ));
        }
        s.push_str(if self.pass { "PASS" } else { "FAIL" });
        if let Some(t) = self.wall_time_s {
            s.push_str(&format!(" in {t:.2} s"));
        }
        s
    }
}

/// Pretty printer that writes floats as `d.dddddddddddddddde±x`.
#[derive(Default)]
struct Digits17 {
    inner: serde_json::ser::PrettyFormatter<'static>,
}

impl Formatter for Digits17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_array(w)
    }
    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array(w)
    }
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array_value(w)
    }
    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object(w)
    }
    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object(w)
    }
    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object_value(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Suite;

    fn sample() -> SuiteReport {
        let cfg = SuiteConfig::new(Suite::Groups);
        let checks = vec![
            CheckRecord::new("a", 3, 0.1, 1e-9),
            CheckRecord::new("b", 3, f64::INFINITY, 1.0),
        ];
        SuiteReport::new(&cfg, 1.0, checks, 0.25)
    }

    #[test]
    fn overall_pass_is_conjunction() {
        let r = sample();
        assert!(!r.pass);
        assert_eq!(r.failed().count(), 2);
        let cfg = SuiteConfig::new(Suite::Groups);
        let ok = SuiteReport::new(&cfg, 1.0, vec![CheckRecord::new("c", 1, 0.0, 0.0)], 0.0);
        assert!(ok.pass);
    }

    #[test]
    fn json_shape_and_digits() {
        let r = sample();
        let text = r.to_json(true);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["suite"], "groups");
        assert_eq!(v["checks"][0]["max_residual"].as_f64(), Some(0.1));
        assert!(v["checks"][1]["max_residual"].is_null());
        assert!(text.contains("1.0000000000000001e-1"));
        assert!(v.get("wall_time_s").is_some());
        let bare: serde_json::Value = serde_json::from_str(&r.to_json(false)).unwrap();
        assert!(bare.get("wall_time_s").is_none());
    }
}
