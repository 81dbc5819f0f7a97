//! JSON scenario files describing a pressure law and a pattern experiment.

use serde::{Deserialize, Serialize};

use crate::error::{PtrackError, Result};
use crate::pattern::{PatternKind, PatternSpec};
use crate::pressure::{gamma_law, table_law, PressureLaw};

/// Pressure-law declaration:
/// `{"kind":"gamma","gamma":3.0}` or `{"kind":"table","knots":[[v,p],...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LawSpec {
    Gamma { gamma: f64 },
    Table { knots: Vec<(f64, f64)> },
}

impl LawSpec {
    pub fn build(&self) -> Result<PressureLaw> {
        match self {
            LawSpec::Gamma { gamma } => gamma_law(*gamma),
            LawSpec::Table { knots } => table_law(knots),
        }
    }
}

fn default_v_base() -> f64 {
    1.0
}

fn default_window() -> (f64, f64) {
    (0.5, 2.0)
}

fn default_pairs() -> usize {
    40
}

fn default_cycles() -> usize {
    20
}

/// A full experiment description.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Scenario {
    pub law: LawSpec,
    pub pattern: PatternKind,
    pub s_inner: f64,
    pub eps: f64,
    #[serde(default = "default_v_base")]
    pub v_base: f64,
    #[serde(default = "default_pairs")]
    pub pairs: usize,
    #[serde(default = "default_cycles")]
    pub cycles: usize,
    #[serde(default = "default_window")]
    pub window: (f64, f64),
    /// Left-boundary tilt fraction in (0, 1]; 1 is the symmetric geometry.
    /// When absent the asymmetric builder searches for it.
    #[serde(default)]
    pub lambda_tilt: Option<f64>,
    /// Optional x positions: [left wall, inner 2-wave, inner 1-wave, right wall].
    #[serde(default)]
    pub seed_positions: Option<[f64; 4]>,
    /// Seed a tracked probe front of strength eps.
    #[serde(default)]
    pub probe: bool,
    /// Seed the 2^-k eps wave train (pairs > 0).
    #[serde(default)]
    pub train: bool,
}

impl Scenario {
    pub fn from_json(json: &str) -> Result<Scenario> {
        Ok(serde_json::from_str(json)?)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Scenario> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            PtrackError::Scenario(format!("cannot read {}: {e}", path.display()))
        })?;
        Self::from_json(&text)
    }

    pub fn to_pattern_spec(&self) -> Result<PatternSpec> {
        let law = self.law.build()?;
        Ok(PatternSpec {
            law,
            kind: self.pattern,
            v_base: self.v_base,
            s_inner: self.s_inner,
            eps: self.eps,
            pairs: if self.train { self.pairs } else { 0 },
            cycles: self.cycles,
            window: self.window,
            lambda_tilt: self.lambda_tilt,
            seed_positions: self.seed_positions,
            probe: self.probe,
            target_kappa: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_gamma_scenario() {
        let json = r#"{
            "law": {"kind": "gamma", "gamma": 3.0},
            "pattern": "symmetric",
            "s_inner": 0.1,
            "eps": 1e-5,
            "cycles": 10,
            "probe": true
        }"#;
        let sc = Scenario::from_json(json).unwrap();
        assert_eq!(sc.pairs, 40);
        assert_eq!(sc.cycles, 10);
        assert!(sc.probe && !sc.train);
        let spec = sc.to_pattern_spec().unwrap();
        assert_eq!(spec.pairs, 0); // train not requested
        assert_eq!(spec.v_base, 1.0);
    }

    #[test]
    fn parses_table_law() {
        let knots: Vec<(f64, f64)> = (0..30)
            .map(|i| {
                let v = 0.6 + i as f64 * 0.05;
                (v, v.powf(-2.0))
            })
            .collect();
        let sc = Scenario {
            law: LawSpec::Table { knots },
            pattern: PatternKind::Symmetric,
            s_inner: 0.05,
            eps: 1e-4,
            v_base: 1.0,
            pairs: 4,
            cycles: 2,
            window: (0.7, 1.6),
            lambda_tilt: None,
            seed_positions: None,
            probe: false,
            train: false,
        };
        let round = Scenario::from_json(&serde_json::to_string(&sc).unwrap()).unwrap();
        assert!(round.law.build().is_ok());
    }

    #[test]
    fn missing_file_is_a_scenario_error() {
        let err = Scenario::from_file(std::path::Path::new("/nonexistent/file.json"));
        assert!(matches!(err, Err(PtrackError::Scenario(_))));
    }
}
