//! JSON run configuration with strict key validation.
//!
//! Unknown keys are rejected with a nearest-key suggestion; numeric fields
//! are validated against documented ranges before any computation starts.
//! Defaults are applied and the resolved configuration is echoed into the
//! output directory.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::evolve::{BoundaryKind, InitialData};
use crate::models::{build_preset, build_terrace, ReactionModel, TerraceSpec};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terrace: Option<TerraceSpec>,
}

impl ModelConfig {
    pub fn build(&self) -> Result<ReactionModel> {
        match (&self.preset, &self.terrace) {
            (Some(name), None) => build_preset(name, &self.params),
            (None, Some(spec)) => build_terrace(spec),
            _ => Err(Error::Config(
                "model: exactly one of `preset` or `terrace` must be given".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct NumericsConfig {
    pub h: f64,
    pub dt: f64,
    pub x_lo: f64,
    pub x_hi: f64,
    pub t_end: f64,
    pub frame_speed: f64,
    pub bc: BoundaryKind,
    pub snapshot_every: f64,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        NumericsConfig {
            h: 0.1,
            dt: 0.005,
            x_lo: -100.0,
            x_hi: 300.0,
            t_end: 100.0,
            frame_speed: 0.0,
            bc: BoundaryKind::Neumann,
            snapshot_every: 2.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct InitialConfig {
    pub kind: String,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
    pub amp: Vec<f64>,
    pub width: f64,
    pub ell: u32,
    pub shifts: Vec<f64>,
}

impl Default for InitialConfig {
    fn default() -> Self {
        InitialConfig {
            kind: "step".into(),
            left: vec![1.0],
            right: Vec::new(),
            amp: vec![1.0],
            width: 10.0,
            ell: 0,
            shifts: Vec::new(),
        }
    }
}

impl InitialConfig {
    pub fn build(&self, n: usize) -> Result<InitialData> {
        let fit = |v: &Vec<f64>| -> Vec<f64> {
            let mut out = v.clone();
            out.resize(n, 0.0);
            out
        };
        Ok(match self.kind.as_str() {
            "step" => InitialData::Step { left: fit(&self.left) },
            "sign_changing_step" => {
                InitialData::SignChangingStep { amp: fit(&self.amp), width: self.width }
            }
            "bump" => InitialData::Bump { amp: fit(&self.amp), width: self.width },
            "phase_step" => InitialData::PhaseStep { ell: self.ell },
            "two_states" => {
                InitialData::TwoStates { left: fit(&self.left), right: fit(&self.right) }
            }
            "staggered_step" => {
                InitialData::StaggeredStep { left: fit(&self.left), shifts: fit(&self.shifts) }
            }
            other => {
                return Err(Error::Config(format!(
                    "initial.kind `{other}` unknown; accepted: step, sign_changing_step, bump, phase_step, two_states, staggered_step"
                )))
            }
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct TrackingConfig {
    pub component: usize,
    pub level: f64,
    pub offset: f64,
}

impl Default for TrackingConfig {
    fn default() -> Self {
        TrackingConfig { component: 0, level: 0.5, offset: 20.0 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct DispersionConfig {
    pub c_min: f64,
    pub c_max: f64,
    pub n_c: usize,
    /// Equilibrium state the linearization is taken at.
    pub at: Vec<f64>,
    pub eta: f64,
    pub k_max: f64,
    pub n_k: usize,
}

impl Default for DispersionConfig {
    fn default() -> Self {
        DispersionConfig {
            c_min: 0.0,
            c_max: 4.0,
            n_c: 41,
            at: Vec::new(),
            eta: 0.0,
            k_max: 6.0,
            n_k: 257,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ProfileConfig {
    pub c: f64,
    pub from: Vec<f64>,
    pub to: Vec<f64>,
    pub l: f64,
    pub n_grid: usize,
    pub method: String,
    /// Per-component tanh interface shifts of the initial guess.
    pub init_shifts: Vec<f64>,
    pub eta: f64,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        ProfileConfig {
            c: 2.0,
            from: vec![1.0],
            to: Vec::new(),
            l: 30.0,
            n_grid: 2401,
            method: "bvp".into(),
            init_shifts: Vec::new(),
            eta: 0.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub model: ModelConfig,
    #[serde(default)]
    pub numerics: NumericsConfig,
    #[serde(default)]
    pub initial: InitialConfig,
    #[serde(default)]
    pub tracking: TrackingConfig,
    #[serde(default)]
    pub dispersion: DispersionConfig,
    #[serde(default)]
    pub profile: ProfileConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ExperimentConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<super::sweep::SweepConfig>,
    #[serde(default = "default_output_dir")]
    pub output_dir: String,
    #[serde(default = "default_parallelism")]
    pub parallelism: usize,
}

fn default_output_dir() -> String {
    "out".into()
}

fn default_parallelism() -> usize {
    4
}

const TOP_KEYS: [&str; 9] = [
    "model",
    "numerics",
    "initial",
    "tracking",
    "dispersion",
    "profile",
    "experiment",
    "sweep",
    "output_dir",
];

fn edit_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0usize; b.len() + 1];
    for i in 1..=a.len() {
        cur[0] = i;
        for j in 1..=b.len() {
            let cost = if a[i - 1] == b[j - 1] { 0 } else { 1 };
            cur[j] = (prev[j] + 1).min(cur[j - 1] + 1).min(prev[j - 1] + cost);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

fn check_keys(value: &Value, allowed: &[&str], context: &str) -> Result<()> {
    if let Value::Object(map) = value {
        for key in map.keys() {
            if !allowed.contains(&key.as_str()) && key != "parallelism" {
                let suggestion = allowed
                    .iter()
                    .min_by_key(|cand| edit_distance(key, cand))
                    .filter(|cand| edit_distance(key, cand) <= 3)
                    .map(|cand| format!("; did you mean `{cand}`?"))
                    .unwrap_or_default();
                return Err(Error::Config(format!(
                    "unknown key `{key}` in {context}{suggestion}"
                )));
            }
        }
    }
    Ok(())
}

/// Parse and validate a configuration from a JSON string.
pub fn parse_config_str(text: &str) -> Result<RunConfig> {
    let value: Value = serde_json::from_str(text)?;
    check_keys(&value, &TOP_KEYS, "config root")?;
    if let Some(numerics) = value.get("numerics") {
        check_keys(
            numerics,
            &["h", "dt", "x_lo", "x_hi", "t_end", "frame_speed", "bc", "snapshot_every"],
            "numerics",
        )?;
    }
    if let Some(model) = value.get("model") {
        check_keys(model, &["preset", "params", "terrace"], "model")?;
    }
    if let Some(tracking) = value.get("tracking") {
        check_keys(tracking, &["component", "level", "offset"], "tracking")?;
    }
    if let Some(initial) = value.get("initial") {
        check_keys(
            initial,
            &["kind", "left", "right", "amp", "width", "ell", "shifts"],
            "initial",
        )?;
    }
    let config: RunConfig = serde_json::from_value(value)?;
    validate(&config)?;
    Ok(config)
}

/// Parse and validate a configuration file.
pub fn parse_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config_str(&text)
}

fn validate(cfg: &RunConfig) -> Result<()> {
    let n = &cfg.numerics;
    let checks: [(&str, bool, &str); 6] = [
        ("numerics.h", n.h > 0.0 && n.h <= 2.0, "(0, 2]"),
        ("numerics.dt", n.dt > 0.0 && n.dt <= 1.0, "(0, 1]"),
        ("numerics.t_end", n.t_end > 0.0 && n.t_end <= 1e6, "(0, 1e6]"),
        ("numerics.domain", n.x_hi > n.x_lo, "x_hi > x_lo"),
        (
            "numerics.snapshot_every",
            n.snapshot_every > 0.0,
            "positive",
        ),
        ("profile.n_grid", cfg.profile.n_grid >= 400, ">= 400"),
    ];
    for (name, ok, range) in checks {
        if !ok {
            return Err(Error::Config(format!("{name} out of range; accepted: {range}")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_applies_defaults() {
        let cfg =
            parse_config_str(r#"{"model": {"preset": "nagumo", "params": {"a": 1.0}}}"#).unwrap();
        assert_eq!(cfg.numerics.h, 0.1);
        assert_eq!(cfg.numerics.dt, 0.005);
        assert_eq!(cfg.tracking.offset, 20.0);
    }

    #[test]
    fn unknown_key_suggested() {
        let err = parse_config_str(r#"{"modle": {"preset": "nagumo"}}"#).unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("modle") && msg.contains("model"), "{msg}");
    }

    #[test]
    fn out_of_range_named() {
        let err = parse_config_str(
            r#"{"model": {"preset": "nagumo"}, "numerics": {"h": -0.1}}"#,
        )
        .unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("numerics.h") && msg.contains("(0, 2]"), "{msg}");
    }

    #[test]
    fn terrace_config_round_trips() {
        let text = r#"{"model": {"terrace": {"n_levels": 3, "levels": [0.0, 1.0, 2.0, 3.0], "detune": [0.0, 0.05, 0.05]}}}"#;
        let cfg = parse_config_str(text).unwrap();
        let serialized = serde_json::to_string_pretty(&cfg).unwrap();
        let cfg2 = parse_config_str(&serialized).unwrap();
        let again = serde_json::to_string_pretty(&cfg2).unwrap();
        assert_eq!(serialized, again, "resolved config must round-trip unchanged");
        assert!(cfg2.model.terrace.is_some());
    }
}
