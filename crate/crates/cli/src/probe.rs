//! Truncation sweep over a diagonal reference operator with singular values
//! `amplitude · k^(−decay)`.
//!
//! The diagonal block `a1` is trace class only for `decay > 1`, while the
//! off-diagonal block `a2` is Hilbert–Schmidt for `decay > 1/2`. The
//! momentum pairing `⟨μ(id + X), J⟩ = 2 Σ σ_k` needs the former, so its
//! successive differences form a Cauchy sequence exactly in the trace-class
//! regime.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use siegel_core::blockgroup::{mixed_norm, BlockOperator, BlockTangent};
use siegel_core::linops::{schatten_norm, ComplexMatrix, Schatten, C64};
use siegel_core::reduction::{momentum, omega_q, FlatPoint};
use siegel_core::{SiegelPoint, SiegelTangent};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeConfig {
    pub dims: Vec<usize>,
    pub decay: f64,
    pub seed: u64,
    /// Scale of the leading singular value, in `[0, 1]`.
    pub amplitude: f64,
}

impl ProbeConfig {
    pub fn new(dims: Vec<usize>, decay: f64, seed: u64) -> Self {
        Self { dims, decay, seed, amplitude: 1.0 }
    }

    fn validate(&self) -> Result<(), CliError> {
        let bad = |m: &str| Err(CliError::ConfigInvalid(m.to_string()));
        if self.dims.is_empty() || self.dims[0] == 0 {
            return bad("probe dims must be non-empty and positive");
        }
        if self.dims.windows(2).any(|w| w[0] >= w[1]) {
            return bad("probe dims must be strictly ascending");
        }
        if !(self.decay > 0.0 && self.decay.is_finite()) {
            return bad("probe decay must be positive");
        }
        if !(0.0..=1.0).contains(&self.amplitude) {
            return bad("probe amplitude must lie in [0, 1]");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeRow {
    pub n: usize,
    pub pairing: f64,
    /// `|pairing(n) − pairing(previous n)|`; `None` on the first row.
    pub pairing_diff: Option<f64>,
    pub omega_q: f64,
    pub omega_q_diff: Option<f64>,
    /// `‖a1‖₁`.
    pub trace_norm: f64,
    /// `‖a1‖₁ + ‖a2‖₂`.
    pub mixed_norm: f64,
}

/// Singular values and phases up to the largest requested dimension.
fn reference(cfg: &ProbeConfig) -> (Vec<f64>, Vec<C64>) {
    let max = *cfg.dims.last().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let sigma = (1..=max).map(|k| cfg.amplitude * (k as f64).powf(-cfg.decay)).collect();
    let phase = (0..max)
        .map(|_| C64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)))
        .collect();
    (sigma, phase)
}

pub fn convergence_probe(cfg: &ProbeConfig) -> Result<Vec<ProbeRow>, CliError> {
    cfg.validate()?;
    let (sigma, phase) = reference(cfg);
    let mut rows: Vec<ProbeRow> = Vec::with_capacity(cfg.dims.len());
    for &n in &cfg.dims {
        let s = &sigma[..n];
        let x = BlockTangent {
            a1: ComplexMatrix::from_real_diag(s),
            a2: ComplexMatrix::from_diag(&(0..n).map(|k| phase[k] * s[k]).collect::<Vec<_>>()),
        };
        let j = BlockOperator::complex_structure(n).as_tangent();
        let pairing = momentum(&FlatPoint(x.exp_base())).pair(&j);

        let z = ComplexMatrix::from_diag(&(0..n).map(|k| phase[k] * (0.5 * s[k])).collect::<Vec<_>>());
        let u = ComplexMatrix::from_real_diag(s);
        let v = u.scale(C64::new(0.0, 1.0));
        let w = omega_q(&SiegelPoint::new(z)?, &SiegelTangent::new(u)?, &SiegelTangent::new(v)?)?;

        let prev = rows.last();
        rows.push(ProbeRow {
            n,
            pairing,
            pairing_diff: prev.map(|p| (pairing - p.pairing).abs()),
            omega_q: w,
            omega_q_diff: prev.map(|p| (w - p.omega_q).abs()),
            trace_norm: schatten_norm(&x.a1, Schatten::One)?,
            mixed_norm: mixed_norm(&x)?,
        });
    }
    Ok(rows)
}

/// Number of places where the successive pairing differences fail to
/// strictly decrease.
pub fn non_decreasing_steps(rows: &[ProbeRow]) -> usize {
    let diffs: Vec<f64> = rows.iter().filter_map(|r| r.pairing_diff).collect();
    diffs.windows(2).filter(|w| !(w[1] < w[0])).count()
}

pub fn format_table(rows: &[ProbeRow]) -> String {
    let mut s = format!(
        "{:>5} {:>14} {:>11} {:>14} {:>11} {:>11} {:>11}\n",
        "n", "pairing", "diff", "omega_q", "diff", "|a1|_1", "mixed"
    );
    let opt = |d: Option<f64>| d.map_or_else(|| "-".to_string(), |v| format!("{v:.4e}"));
    for r in rows {
        s.push_str(&format!(
            "{:>5} {:>14.10} {:>11} {:>14.10} {:>11} {:>11.4} {:>11.4}\n",
            r.n,
            r.pairing,
            opt(r.pairing_diff),
            r.omega_q,
            opt(r.omega_q_diff),
            r.trace_norm,
            r.mixed_norm
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        let cfg = ProbeConfig::new(vec![3, 7], 1.5, 4);
        let rows = convergence_probe(&cfg).unwrap();
        for r in &rows {
            let sig: Vec<f64> = (1..=r.n).map(|k| (k as f64).powf(-1.5)).collect();
            let pairing: f64 = 2.0 * sig.iter().sum::<f64>();
            let omega: f64 = sig.iter().map(|s| 2.0 * s * s / (1.0 - 0.25 * s * s).powi(2)).sum();
            let hs: f64 = sig.iter().map(|s| s * s).sum::<f64>().sqrt();
            assert!((r.pairing - pairing).abs() < 1e-12);
            assert!((r.omega_q - omega).abs() < 1e-12);
            assert!((r.trace_norm - pairing / 2.0).abs() < 1e-12);
            assert!((r.mixed_norm - pairing / 2.0 - hs).abs() < 1e-12);
        }
        assert!(rows[0].pairing_diff.is_none());
    }

    #[test]
    fn zero_amplitude_is_zero() {
        let cfg = ProbeConfig { amplitude: 0.0, ..ProbeConfig::new(vec![2, 4, 8], 2.0, 1) };
        for r in convergence_probe(&cfg).unwrap() {
            assert_eq!((r.pairing, r.omega_q, r.trace_norm, r.mixed_norm), (0.0, 0.0, 0.0, 0.0));
            assert!(r.pairing_diff.is_none_or(|d| d == 0.0));
        }
    }

    #[test]
    fn regimes() {
        let fast = convergence_probe(&ProbeConfig::new(vec![8, 16, 32, 64], 2.0, 0)).unwrap();
        assert_eq!(non_decreasing_steps(&fast), 0);
        let slow = convergence_probe(&ProbeConfig::new(vec![8, 16, 32, 64], 0.6, 0)).unwrap();
        assert!(slow[3].trace_norm >= 2.0 * slow[0].trace_norm);
    }

    #[test]
    fn rejects_bad_configs() {
        for cfg in [
            ProbeConfig::new(vec![], 2.0, 0),
            ProbeConfig::new(vec![8, 8], 2.0, 0),
            ProbeConfig::new(vec![8], 0.0, 0),
            ProbeConfig { amplitude: 1.5, ..ProbeConfig::new(vec![8], 2.0, 0) },
        ] {
            assert!(matches!(convergence_probe(&cfg), Err(CliError::ConfigInvalid(_))));
        }
    }
}
