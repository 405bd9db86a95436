//! Named, reproducible experiments.
//!
//! Every experiment is a preset: a full default configuration that a user
//! config may override field by field. A run expands the sweep grid (or the
//! single base point), executes the points independently — in parallel under
//! the default feature — and merges records in grid order. Identical
//! configurations produce bit-identical results: every pseudo-random object
//! is derived from the config seed plus a fixed stream index, and nothing
//! wall-clock-dependent enters the records.

mod ambiguity;
mod cosmo;
mod emergent;
mod metrics;
mod readability;
mod record;
mod size_scan;

pub use metrics::{mutual_information, readability as readability_metric};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert;
use crate::par;

/// Experiment registry. Names sort alphabetically for stable listings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    ClockAmbiguity,
    CosmoToy,
    EmergentBasic,
    ReadabilityScan,
    RecordArrow,
    SizeScan,
}

impl Preset {
    pub const ALL: [Preset; 6] = [
        Preset::ClockAmbiguity,
        Preset::CosmoToy,
        Preset::EmergentBasic,
        Preset::ReadabilityScan,
        Preset::RecordArrow,
        Preset::SizeScan,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::ClockAmbiguity => "clock_ambiguity",
            Preset::CosmoToy => "cosmo_toy",
            Preset::EmergentBasic => "emergent_basic",
            Preset::ReadabilityScan => "readability_scan",
            Preset::RecordArrow => "record_arrow",
            Preset::SizeScan => "size_scan",
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            Preset::ClockAmbiguity => {
                "repartitions the universe by a global unitary and checks which invariants survive the change of clock"
            }
            Preset::CosmoToy => {
                "expansion-as-clock toy: two small modes coupled through reading-modulated attraction or separation"
            }
            Preset::EmergentBasic => {
                "baseline conditioning run: zero-energy history state, branch weights and emergent dynamics fidelity"
            }
            Preset::ReadabilityScan => {
                "how strongly a small subsystem's conditional state tracks the clock as the coupling is turned up"
            }
            Preset::RecordArrow => {
                "windowed record register written tick by tick: monotone record counts orient a direction of time"
            }
            Preset::SizeScan => {
                "clock/rest size mismatch: aliased rest ladders, kernel truncation and the fidelity cost of oversized rests"
            }
        }
    }

    pub fn parse(name: &str) -> Result<Preset> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == name)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown preset \"{name}\"")))
    }

    /// Full default configuration for this preset.
    pub fn default_config(&self) -> ResolvedConfig {
        let universe = match self {
            Preset::EmergentBasic => UniverseParams {
                clock_dim: 8,
                spacing: 1.0,
                rest_dims: vec![4],
                coupling: 0.0,
                record_qubits: 2,
                regime: Regime::Separation,
            },
            Preset::ReadabilityScan => UniverseParams {
                clock_dim: 16,
                spacing: 1.0,
                rest_dims: vec![2, 8],
                coupling: 0.6,
                record_qubits: 2,
                regime: Regime::Separation,
            },
            Preset::RecordArrow => UniverseParams {
                clock_dim: 16,
                spacing: 1.0,
                rest_dims: vec![4],
                coupling: 1.0,
                record_qubits: 2,
                regime: Regime::Separation,
            },
            Preset::ClockAmbiguity => UniverseParams {
                clock_dim: 4,
                spacing: 1.0,
                rest_dims: vec![4],
                coupling: 0.0,
                record_qubits: 2,
                regime: Regime::Separation,
            },
            Preset::SizeScan => UniverseParams {
                clock_dim: 8,
                spacing: 1.0,
                rest_dims: vec![8],
                coupling: 0.0,
                record_qubits: 2,
                regime: Regime::Separation,
            },
            Preset::CosmoToy => UniverseParams {
                clock_dim: 16,
                spacing: 1.0,
                rest_dims: vec![2, 2],
                coupling: 0.4,
                record_qubits: 2,
                regime: Regime::Separation,
            },
        };
        let mut sweep = BTreeMap::new();
        match self {
            Preset::ReadabilityScan => {
                sweep.insert(
                    "coupling".to_string(),
                    vec![0.0, 0.05, 0.1, 0.2, 0.4, 0.6]
                        .into_iter()
                        .map(SweepValue::Real)
                        .collect(),
                );
            }
            Preset::CosmoToy => {
                sweep.insert(
                    "coupling".to_string(),
                    vec![0.0, 0.2, 0.4].into_iter().map(SweepValue::Real).collect(),
                );
            }
            Preset::SizeScan => {
                sweep.insert(
                    "clock_dim".to_string(),
                    vec![2u64, 8].into_iter().map(SweepValue::Integer).collect(),
                );
                sweep.insert(
                    "rest_dim".to_string(),
                    vec![2u64, 4, 8, 16].into_iter().map(SweepValue::Integer).collect(),
                );
            }
            Preset::RecordArrow => {
                sweep.insert(
                    "record_qubits".to_string(),
                    vec![2u64, 4].into_iter().map(SweepValue::Integer).collect(),
                );
            }
            Preset::ClockAmbiguity => {
                sweep.insert(
                    "repartition".to_string(),
                    ["identity", "swap", "random"]
                        .into_iter()
                        .map(|s| SweepValue::Text(s.to_string()))
                        .collect(),
                );
            }
            Preset::EmergentBasic => {}
        }
        ResolvedConfig {
            schema_version: SCHEMA_VERSION,
            preset: *self,
            seed: 0,
            max_dim: hilbert::max_total_dim(),
            weights: WeightSpec::default_for(*self),
            seed_state: SeedSpec::Preset,
            universe,
            sweep,
        }
    }
}

pub const SCHEMA_VERSION: u32 = 1;

/// Reading-window modulation profile of the cosmological toy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Coupling strongest at early readings, fading as the clock advances.
    Separation,
    /// Coupling growing with the reading.
    Attraction,
}

/// Branch-weight profile of the global state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightSpec {
    Uniform,
    /// Gaussian bump over readings, centered mid-period with width N/4.
    Gaussian,
}

impl WeightSpec {
    fn default_for(preset: Preset) -> Self {
        match preset {
            Preset::ClockAmbiguity => WeightSpec::Gaussian,
            _ => WeightSpec::Uniform,
        }
    }

    pub fn weights(&self, n: usize) -> Vec<hilbert::C64> {
        match self {
            WeightSpec::Uniform => vec![num_complex::Complex::new(1.0, 0.0); n],
            WeightSpec::Gaussian => {
                let center = (n as f64 - 1.0) / 2.0;
                let width = n as f64 / 4.0;
                (0..n)
                    .map(|k| {
                        let d = k as f64 - center;
                        num_complex::Complex::new((-d * d / (2.0 * width * width)).exp(), 0.0)
                    })
                    .collect()
            }
        }
    }
}

/// Initial rest state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeedSpec {
    /// The preset's canonical seed (documented per preset).
    Preset,
    /// Uniform superposition over the rest basis.
    Uniform,
    /// Haar-random rest state drawn from the config seed.
    Random,
}

/// Concrete universe parameters after preset defaults are applied.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniverseParams {
    pub clock_dim: usize,
    pub spacing: f64,
    pub rest_dims: Vec<usize>,
    pub coupling: f64,
    /// Record-register size (record_arrow).
    pub record_qubits: usize,
    /// Modulation profile (cosmo_toy).
    pub regime: Regime,
}

impl UniverseParams {
    pub fn rest_dim(&self) -> usize {
        self.rest_dims.iter().product()
    }

    pub fn total_dim(&self) -> usize {
        self.clock_dim * self.rest_dim()
    }
}

/// One sweep-axis value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SweepValue {
    Integer(u64),
    Real(f64),
    Text(String),
}

impl SweepValue {
    pub fn as_real(&self) -> Option<f64> {
        match self {
            SweepValue::Real(x) => Some(*x),
            SweepValue::Integer(i) => Some(*i as f64),
            SweepValue::Text(_) => None,
        }
    }

    pub fn as_integer(&self) -> Option<u64> {
        match self {
            SweepValue::Integer(i) => Some(*i),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            SweepValue::Integer(i) => i.to_string(),
            SweepValue::Real(x) => format!("{x}"),
            SweepValue::Text(s) => s.clone(),
        }
    }
}

/// Fully resolved configuration: every field concrete, ready to run and to
/// echo into outputs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResolvedConfig {
    pub schema_version: u32,
    #[serde(serialize_with = "serialize_preset")]
    pub preset: Preset,
    pub seed: u64,
    pub max_dim: usize,
    pub weights: WeightSpec,
    pub seed_state: SeedSpec,
    pub universe: UniverseParams,
    pub sweep: BTreeMap<String, Vec<SweepValue>>,
}

fn serialize_preset<S: serde::Serializer>(
    p: &Preset,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(p.name())
}

impl ResolvedConfig {
    /// Applies one sweep override; the key set doubles as the schema of
    /// sweepable parameters.
    fn apply_override(
        &self,
        params: &mut PointParams,
        key: &str,
        value: &SweepValue,
    ) -> Result<()> {
        let bad = |expected: &str| {
            Error::InvalidArgument(format!(
                "sweep value {} for field \"{key}\" is not {expected}",
                value.label()
            ))
        };
        match key {
            "coupling" => {
                params.universe.coupling = value.as_real().ok_or_else(|| bad("a number"))?;
            }
            "clock_dim" => {
                params.universe.clock_dim =
                    value.as_integer().ok_or_else(|| bad("an integer"))? as usize;
            }
            "rest_dim" => {
                let dim = value.as_integer().ok_or_else(|| bad("an integer"))? as usize;
                params.universe.rest_dims = factor_rest_dim(dim);
            }
            "record_qubits" => {
                params.universe.record_qubits =
                    value.as_integer().ok_or_else(|| bad("an integer"))? as usize;
            }
            "spacing" => {
                params.universe.spacing = value.as_real().ok_or_else(|| bad("a number"))?;
            }
            "repartition" => match value {
                SweepValue::Text(s) => params.repartition = Some(s.clone()),
                _ => return Err(bad("a string")),
            },
            "regime" => match value {
                SweepValue::Text(s) if s == "separation" => {
                    params.universe.regime = Regime::Separation;
                }
                SweepValue::Text(s) if s == "attraction" => {
                    params.universe.regime = Regime::Attraction;
                }
                _ => return Err(bad("\"separation\" or \"attraction\"")),
            },
            other => {
                return Err(Error::InvalidArgument(format!("unknown sweep field \"{other}\"")));
            }
        }
        Ok(())
    }

    /// Expands the sweep grid into point parameter sets, row-major over the
    /// sorted axis names (last axis fastest). Errors on an empty grid.
    pub fn grid_points(&self) -> Result<Vec<PointParams>> {
        if self.sweep.is_empty() || self.sweep.values().any(|v| v.is_empty()) {
            return Err(Error::InvalidArgument("sweep grid is empty".into()));
        }
        let axes: Vec<(&String, &Vec<SweepValue>)> = self.sweep.iter().collect();
        let total: usize = axes.iter().map(|(_, vs)| vs.len()).product();
        let mut points = Vec::with_capacity(total);
        for flat in 0..total {
            let mut params = self.base_point(flat);
            let mut remainder = flat;
            for (name, values) in axes.iter().rev() {
                let idx = remainder % values.len();
                remainder /= values.len();
                self.apply_override(&mut params, name, &values[idx])?;
                params.overrides.insert((*name).clone(), values[idx].clone());
            }
            points.push(params);
        }
        Ok(points)
    }

    fn base_point(&self, index: usize) -> PointParams {
        PointParams {
            index,
            universe: self.universe.clone(),
            weights: self.weights,
            seed_state: self.seed_state,
            repartition: None,
            overrides: BTreeMap::new(),
        }
    }
}

/// Default factorization used when a sweep specifies only the total rest
/// dimension: split off a small leading factor when possible so a subsystem
/// readability is always defined.
pub fn factor_rest_dim(dim: usize) -> Vec<usize> {
    if dim >= 4 && dim % 2 == 0 {
        vec![2, dim / 2]
    } else {
        vec![dim]
    }
}

/// Parameters of a single sweep point.
#[derive(Clone, Debug)]
pub struct PointParams {
    pub index: usize,
    pub universe: UniverseParams,
    pub weights: WeightSpec,
    pub seed_state: SeedSpec,
    /// Repartition label (clock_ambiguity).
    pub repartition: Option<String>,
    /// Echo of the sweep values applied to this point.
    pub overrides: BTreeMap<String, SweepValue>,
}

/// Per-reading series produced by one point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeriesTable {
    /// Metric column names, following `reading_index` and `reading_value`.
    pub columns: Vec<String>,
    pub rows: Vec<SeriesRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeriesRow {
    pub reading_index: usize,
    pub reading_value: f64,
    /// One entry per column; `None` marks an unsupported reading.
    pub values: Vec<Option<f64>>,
}

/// Scalar metrics plus optional series from one point.
#[derive(Clone, Debug, Default)]
pub struct PointOutcome {
    pub summary: BTreeMap<String, f64>,
    pub series: Option<SeriesTable>,
}

/// Record of one sweep point: either its metrics or the reason it failed.
/// Failures are data, not aborts.
#[derive(Clone, Debug, Serialize)]
pub struct PointRecord {
    pub index: usize,
    pub params: BTreeMap<String, SweepValue>,
    pub status: PointStatus,
    pub summary: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series: Option<SeriesTable>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PointStatus {
    Ok,
    Failed { reason: String },
}

/// Everything a run produces, ready for serialization.
#[derive(Clone, Debug, Serialize)]
pub struct ExperimentResult {
    pub preset: String,
    pub crate_version: String,
    pub config: ResolvedConfig,
    pub points: Vec<PointRecord>,
}

impl ExperimentResult {
    pub fn all_failed(&self) -> bool {
        !self.points.is_empty()
            && self.points.iter().all(|p| matches!(p.status, PointStatus::Failed { .. }))
    }
}

fn run_point(preset: Preset, params: &PointParams, seed: u64) -> Result<PointOutcome> {
    if params.universe.total_dim() > hilbert::max_total_dim() {
        return Err(Error::SpaceTooLarge {
            requested: params.universe.total_dim(),
            max: hilbert::max_total_dim(),
        });
    }
    match preset {
        Preset::EmergentBasic => emergent::run(params, seed),
        Preset::ReadabilityScan => readability::run(params, seed),
        Preset::RecordArrow => record::run(params, seed),
        Preset::ClockAmbiguity => ambiguity::run(params, seed),
        Preset::SizeScan => size_scan::run(params, seed),
        Preset::CosmoToy => cosmo::run(params, seed),
    }
}

fn execute(config: &ResolvedConfig, points: Vec<PointParams>) -> ExperimentResult {
    let seed = config.seed;
    let preset = config.preset;
    let records: Vec<PointRecord> = par::map_slice(&points, |point| {
        let (status, summary, series) = match run_point(preset, point, seed) {
            Ok(outcome) => (PointStatus::Ok, outcome.summary, outcome.series),
            Err(err) => {
                (PointStatus::Failed { reason: err.to_string() }, BTreeMap::new(), None)
            }
        };
        PointRecord {
            index: point.index,
            params: point.overrides.clone(),
            status,
            summary,
            series,
        }
    });
    ExperimentResult {
        preset: preset.name().to_string(),
        crate_version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        points: records,
    }
}

/// Runs the preset once at its base parameters.
pub fn run_single(config: &ResolvedConfig) -> ExperimentResult {
    execute(config, vec![config.base_point(0)])
}

/// Expands and runs the sweep grid; point failures are recorded in place.
pub fn run_sweep(config: &ResolvedConfig) -> Result<ExperimentResult> {
    let points = config.grid_points()?;
    Ok(execute(config, points))
}

#[cfg(test)]
mod tests;
