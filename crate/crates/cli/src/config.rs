//! User-facing JSON configuration.
//!
//! A config names a preset and overrides any subset of its defaults; the
//! resolved configuration is what actually runs and what gets echoed into
//! the output summary. Unknown fields are rejected so typos fail loudly,
//! with the offending field named in the message.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use timeless::experiments::{
    Preset, Regime, ResolvedConfig, SeedSpec, SweepValue, WeightSpec, SCHEMA_VERSION,
};

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub schema_version: u32,
    pub preset: String,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub max_dim: Option<usize>,
    #[serde(default)]
    pub weights: Option<String>,
    #[serde(default)]
    pub seed_state: Option<String>,
    #[serde(default)]
    pub universe: Option<RawUniverse>,
    #[serde(default)]
    pub sweep: Option<BTreeMap<String, Vec<serde_json::Value>>>,
    #[serde(default)]
    pub out_dir: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawUniverse {
    #[serde(default)]
    pub clock_dim: Option<usize>,
    #[serde(default)]
    pub spacing: Option<f64>,
    #[serde(default)]
    pub rest_dims: Option<Vec<usize>>,
    #[serde(default)]
    pub coupling: Option<f64>,
    #[serde(default)]
    pub record_qubits: Option<usize>,
    #[serde(default)]
    pub regime: Option<String>,
}

/// Parses the file and resolves it against the preset defaults. Also
/// returns the config's own output-directory preference, if any.
pub fn load(path: &Path) -> Result<(ResolvedConfig, Option<String>), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|err| CliError::config(format!("cannot read config {}: {err}", path.display())))?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<(ResolvedConfig, Option<String>), CliError> {
    let raw: RawConfig = serde_json::from_str(text)
        .map_err(|err| CliError::config(format!("invalid config: {err}")))?;
    let out_dir = raw.out_dir.clone();
    Ok((resolve(raw)?, out_dir))
}

fn resolve(raw: RawConfig) -> Result<ResolvedConfig, CliError> {
    if raw.schema_version != SCHEMA_VERSION {
        return Err(CliError::config(format!(
            "field \"schema_version\": expected {SCHEMA_VERSION}, got {}",
            raw.schema_version
        )));
    }
    let preset = Preset::parse(&raw.preset)
        .map_err(|err| CliError::config(format!("field \"preset\": {err}")))?;
    let mut config = preset.default_config();

    if let Some(seed) = raw.seed {
        config.seed = seed;
    }
    if let Some(max_dim) = raw.max_dim {
        config.max_dim = max_dim;
    }
    if let Some(weights) = &raw.weights {
        config.weights = match weights.as_str() {
            "uniform" => WeightSpec::Uniform,
            "gaussian" => WeightSpec::Gaussian,
            other => {
                return Err(CliError::config(format!(
                    "field \"weights\": expected \"uniform\" or \"gaussian\", got \"{other}\""
                )));
            }
        };
    }
    if let Some(seed_state) = &raw.seed_state {
        config.seed_state = match seed_state.as_str() {
            "preset" => SeedSpec::Preset,
            "uniform" => SeedSpec::Uniform,
            "random" => SeedSpec::Random,
            other => {
                return Err(CliError::config(format!(
                    "field \"seed_state\": expected \"preset\", \"uniform\" or \"random\", got \"{other}\""
                )));
            }
        };
    }
    if let Some(universe) = raw.universe {
        if let Some(clock_dim) = universe.clock_dim {
            config.universe.clock_dim = clock_dim;
        }
        if let Some(spacing) = universe.spacing {
            config.universe.spacing = spacing;
        }
        if let Some(rest_dims) = universe.rest_dims {
            if rest_dims.is_empty() {
                return Err(CliError::config(
                    "field \"universe.rest_dims\": must not be empty".to_string(),
                ));
            }
            config.universe.rest_dims = rest_dims;
        }
        if let Some(coupling) = universe.coupling {
            config.universe.coupling = coupling;
        }
        if let Some(record_qubits) = universe.record_qubits {
            config.universe.record_qubits = record_qubits;
        }
        if let Some(regime) = &universe.regime {
            config.universe.regime = match regime.as_str() {
                "separation" => Regime::Separation,
                "attraction" => Regime::Attraction,
                other => {
                    return Err(CliError::config(format!(
                        "field \"universe.regime\": expected \"separation\" or \"attraction\", got \"{other}\""
                    )));
                }
            };
        }
    }
    if let Some(sweep) = raw.sweep {
        config.sweep = sweep
            .into_iter()
            .map(|(key, values)| {
                let converted = values
                    .into_iter()
                    .map(|v| sweep_value(&key, v))
                    .collect::<Result<Vec<_>, CliError>>()?;
                Ok((key, converted))
            })
            .collect::<Result<BTreeMap<_, _>, CliError>>()?;
    }
    Ok(config)
}

fn sweep_value(key: &str, value: serde_json::Value) -> Result<SweepValue, CliError> {
    match value {
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_u64() {
                Ok(SweepValue::Integer(i))
            } else if let Some(x) = n.as_f64() {
                Ok(SweepValue::Real(x))
            } else {
                Err(CliError::config(format!(
                    "field \"sweep.{key}\": number {n} is not representable"
                )))
            }
        }
        serde_json::Value::String(s) => Ok(SweepValue::Text(s)),
        other => Err(CliError::config(format!(
            "field \"sweep.{key}\": expected number or string, got {other}"
        ))),
    }
}
