//! Scenario configuration: defaults, named presets, JSON documents and
//! field-level overrides.

use std::collections::BTreeSet;
use std::f64::consts::TAU;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use squeeze_core::bath::{BathContext, SpectralDensity, ThermalMode};
use squeeze_core::dynamics::SqueezedState;

use crate::error::ConfigError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "high_T")]
    HighT,
    #[serde(rename = "exact")]
    Exact,
}

impl From<Mode> for ThermalMode {
    fn from(mode: Mode) -> Self {
        match mode {
            Mode::HighT => ThermalMode::HighTemperature,
            Mode::Exact => ThermalMode::Exact,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Baseline {
    NonMarkovian,
    Markovian,
    Both,
}

impl Baseline {
    pub fn non_markovian(self) -> bool {
        matches!(self, Baseline::NonMarkovian | Baseline::Both)
    }

    pub fn markovian(self) -> bool {
        matches!(self, Baseline::Markovian | Baseline::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputKind {
    Coefficients,
    Variances,
    Spectrum,
    Wigner,
    Summary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Ohmicity exponent.
    pub s: f64,
    pub g: f64,
    /// Cutoff ratio ω_c/ω₀.
    pub r: f64,
    /// k_BT/ω₀.
    pub temperature: f64,
    pub sigma2: f64,
    pub mode: Mode,
    pub baseline: Baseline,
    /// End time in units of 1/ω₀.
    pub t_end: f64,
    pub steps_per_period: usize,
    pub outputs: BTreeSet<OutputKind>,
    /// Exponents written by the spectrum output; empty means just `s`.
    pub spectrum_exponents: Vec<f64>,
    pub spectrum_omega_max: f64,
    pub spectrum_points: usize,
    /// Requested Wigner snapshot times, snapped to the nearest grid point.
    pub wigner_times: Vec<f64>,
    pub wigner_points: usize,
    /// Half-width of the Wigner box in standard deviations per axis.
    pub wigner_box_sigmas: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            s: 1.0,
            g: 0.1,
            r: 0.1,
            temperature: 1.5e3,
            sigma2: 0.1,
            mode: Mode::HighT,
            baseline: Baseline::Both,
            t_end: 30.0 * TAU,
            steps_per_period: 200,
            outputs: [
                OutputKind::Coefficients,
                OutputKind::Variances,
                OutputKind::Summary,
            ]
            .into(),
            spectrum_exponents: Vec::new(),
            spectrum_omega_max: 1.0,
            spectrum_points: 500,
            wigner_times: vec![0.0],
            wigner_points: 101,
            wigner_box_sigmas: 5.0,
        }
    }
}

pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
}

pub const PRESETS: [Preset; 4] = [
    Preset {
        name: "fig1",
        description: "scaled spectral distributions for s = 0.5, 1, 3 at r = 0.1",
    },
    Preset {
        name: "fig2-ohmic",
        description: "x-quadrature variance, Ohmic reservoir (s = 1), with Markovian baseline",
    },
    Preset {
        name: "fig2-superohmic",
        description:
            "x-quadrature variance, super-Ohmic reservoir (s = 3), with Markovian baseline",
    },
    Preset {
        name: "fig2-subohmic",
        description:
            "x-quadrature variance, sub-Ohmic reservoir (s = 0.5), with Markovian baseline",
    },
];

impl ScenarioConfig {
    pub fn preset(name: &str) -> Result<Self, ConfigError> {
        let base = Self::default();
        let config = match name {
            "fig1" => Self {
                outputs: [OutputKind::Spectrum].into(),
                spectrum_exponents: vec![0.5, 1.0, 3.0],
                ..base
            },
            "fig2-ohmic" => Self { s: 1.0, ..base },
            "fig2-superohmic" => Self { s: 3.0, ..base },
            "fig2-subohmic" => Self { s: 0.5, ..base },
            other => {
                return Err(ConfigError::UnknownPreset(other.to_string()));
            }
        };
        Ok(config)
    }

    /// Overlay a (possibly partial) JSON document onto this configuration.
    pub fn merged_with_json(&self, doc: &Value) -> Result<Self, ConfigError> {
        let Value::Object(overrides) = doc else {
            return Err(ConfigError::Parse(
                "configuration must be a JSON object".into(),
            ));
        };
        let mut merged = match serde_json::to_value(self).expect("config serializes") {
            Value::Object(map) => map,
            _ => unreachable!("config serializes to an object"),
        };
        for (key, value) in overrides {
            merged.insert(key.clone(), value.clone());
        }
        serde_json::from_value(Value::Object(merged)).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    pub fn merged_with_file(&self, path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Parse(format!("{}: {e}", path.display())))?;
        let doc: Value = serde_json::from_str(&text)
            .map_err(|e| ConfigError::Parse(format!("{}: {e}", path.display())))?;
        self.merged_with_json(&doc)
    }

    /// Set a single field from its textual value (numbers, or the string
    /// values of `mode` / `baseline`).
    pub fn with_field(&self, field: &str, raw: &str) -> Result<Self, ConfigError> {
        let value = serde_json::from_str::<Value>(raw)
            .ok()
            .filter(|v| v.is_number())
            .unwrap_or_else(|| Value::String(raw.to_string()));
        let mut doc = Map::new();
        doc.insert(field.to_string(), value);
        self.merged_with_json(&Value::Object(doc))
            .map_err(|e| ConfigError::field(field, e.to_string()))
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = |field: &'static str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(ConfigError::field(
                    field,
                    format!("must be positive and finite, got {v}"),
                ))
            }
        };
        positive("s", self.s)?;
        positive("g", self.g)?;
        positive("r", self.r)?;
        positive("temperature", self.temperature)?;
        positive("sigma2", self.sigma2)?;
        positive("t_end", self.t_end)?;
        positive("spectrum_omega_max", self.spectrum_omega_max)?;
        positive("wigner_box_sigmas", self.wigner_box_sigmas)?;
        for &s in &self.spectrum_exponents {
            positive("spectrum_exponents", s)?;
        }
        if self.steps_per_period < 50 {
            return Err(ConfigError::field(
                "steps_per_period",
                format!("must be at least 50, got {}", self.steps_per_period),
            ));
        }
        if self.spectrum_points < 1 {
            return Err(ConfigError::field("spectrum_points", "must be at least 1"));
        }
        if self.wigner_points < 2 {
            return Err(ConfigError::field("wigner_points", "must be at least 2"));
        }
        if let Some(&t) = self
            .wigner_times
            .iter()
            .find(|&&t| !(t.is_finite() && (0.0..=self.t_end).contains(&t)))
        {
            return Err(ConfigError::field(
                "wigner_times",
                format!("{t} lies outside [0, t_end]"),
            ));
        }
        Ok(())
    }

    /// Non-fatal remarks about the configuration.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.steps_per_period < 200 {
            out.push(format!(
                "steps_per_period = {} is below the recommended 200",
                self.steps_per_period
            ));
        }
        if let (Ok(sd), Ok(ctx)) = (self.spectral_density(), self.bath_context()) {
            out.extend(ctx.validity_warning(&sd));
        }
        out
    }

    pub fn spectral_density(&self) -> Result<SpectralDensity, ConfigError> {
        SpectralDensity::new(self.g, self.s, self.r)
            .map_err(|e| ConfigError::field("bath", e.to_string()))
    }

    pub fn spectral_density_with_exponent(&self, s: f64) -> Result<SpectralDensity, ConfigError> {
        SpectralDensity::new(self.g, s, self.r)
            .map_err(|e| ConfigError::field("spectrum_exponents", e.to_string()))
    }

    pub fn bath_context(&self) -> Result<BathContext, ConfigError> {
        BathContext::new(self.temperature, self.mode.into())
            .map_err(|e| ConfigError::field("temperature", e.to_string()))
    }

    pub fn squeezed_state(&self) -> Result<SqueezedState, ConfigError> {
        SqueezedState::vacuum(self.sigma2).map_err(|e| ConfigError::field("sigma2", e.to_string()))
    }

    pub fn wants(&self, kind: OutputKind) -> bool {
        self.outputs.contains(&kind)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_the_fig2_parameters() {
        let c = ScenarioConfig::default();
        assert_eq!((c.g, c.r, c.sigma2, c.temperature), (0.1, 0.1, 0.1, 1500.0));
        c.validate().unwrap();
        assert!(c.warnings().is_empty());
    }

    #[test]
    fn presets_resolve() {
        for p in PRESETS {
            ScenarioConfig::preset(p.name).unwrap().validate().unwrap();
        }
        assert_eq!(ScenarioConfig::preset("fig2-superohmic").unwrap().s, 3.0);
        assert!(matches!(
            ScenarioConfig::preset("fig3"),
            Err(ConfigError::UnknownPreset(_))
        ));
    }

    #[test]
    fn partial_json_overrides() {
        let doc: Value =
            serde_json::from_str(r#"{"s": 3, "mode": "exact", "outputs": ["summary"]}"#).unwrap();
        let c = ScenarioConfig::default().merged_with_json(&doc).unwrap();
        assert_eq!(c.s, 3.0);
        assert_eq!(c.mode, Mode::Exact);
        assert_eq!(c.outputs, [OutputKind::Summary].into());
        assert_eq!(c.g, 0.1);
    }

    #[test]
    fn unknown_field_rejected() {
        let doc: Value = serde_json::from_str(r#"{"coupling": 0.2}"#).unwrap();
        assert!(ScenarioConfig::default().merged_with_json(&doc).is_err());
    }

    #[test]
    fn field_override_parses_numbers_and_names() {
        let c = ScenarioConfig::default()
            .with_field("steps_per_period", "400")
            .unwrap()
            .with_field("baseline", "markovian")
            .unwrap();
        assert_eq!(c.steps_per_period, 400);
        assert_eq!(c.baseline, Baseline::Markovian);
        let err = ScenarioConfig::default()
            .with_field("mode", "lukewarm")
            .unwrap_err();
        assert!(err.to_string().contains("mode"));
    }

    #[test]
    fn validation_names_the_field() {
        let c = ScenarioConfig {
            sigma2: -1.0,
            ..Default::default()
        };
        assert!(c.validate().unwrap_err().to_string().contains("sigma2"));
        let c = ScenarioConfig {
            steps_per_period: 20,
            ..Default::default()
        };
        assert!(c
            .validate()
            .unwrap_err()
            .to_string()
            .contains("steps_per_period"));
        let c = ScenarioConfig {
            steps_per_period: 100,
            ..Default::default()
        };
        c.validate().unwrap();
        assert_eq!(c.warnings().len(), 1);
    }

    #[test]
    fn cold_high_temperature_mode_warns() {
        let c = ScenarioConfig {
            temperature: 2.0,
            ..Default::default()
        };
        assert_eq!(c.warnings().len(), 1);
    }
}
