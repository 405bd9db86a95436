//! Serialization of experiment results.
//!
//! Per run: one CSV per time-series (columns: `reading_index`,
//! `reading_value`, then the preset's metric columns), a sweep summary CSV
//! when there are multiple points (one row per point: axes, status, scalar
//! metrics), `summary.json` with the full result including the resolved
//! config echo, and `manifest.json` listing every artifact with its SHA-256
//! digest, written last and verified against the files on disk.
//!
//! Everything written is a pure function of the resolved config, so a rerun
//! produces byte-identical artifacts. Floating-point fields carry 17
//! significant digits, enough for a bit-faithful round trip. CSVs use CRLF
//! line endings per RFC 4180.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use timeless::experiments::{ExperimentResult, PointRecord, PointStatus, SeriesTable};

use crate::CliError;

/// Artifact list with content digests; the run's closing statement.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub preset: String,
    pub artifacts: Vec<ArtifactRecord>,
}

#[derive(Debug, Serialize)]
pub struct ArtifactRecord {
    pub name: String,
    pub bytes: usize,
    pub sha256: String,
}

/// 17 significant digits: round-trips f64 exactly.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn series_csv(table: &SeriesTable) -> Result<Vec<u8>, CliError> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(Vec::new());
    let mut header = vec!["reading_index".to_string(), "reading_value".to_string()];
    header.extend(table.columns.iter().cloned());
    writer
        .write_record(&header)
        .map_err(|err| CliError::other(format!("csv failure: {err}")))?;
    for row in &table.rows {
        let mut record = vec![row.reading_index.to_string(), format_float(row.reading_value)];
        for value in &row.values {
            record.push(value.map(format_float).unwrap_or_default());
        }
        writer
            .write_record(&record)
            .map_err(|err| CliError::other(format!("csv failure: {err}")))?;
    }
    writer.into_inner().map_err(|err| CliError::other(format!("csv failure: {err}")))
}

/// One row per point: axis values, status, then the sorted union of all
/// scalar metrics (empty cells where a point lacks a metric).
fn sweep_summary_csv(result: &ExperimentResult) -> Result<Vec<u8>, CliError> {
    let axes: Vec<String> = result.config.sweep.keys().cloned().collect();
    let metric_names: BTreeSet<String> = result
        .points
        .iter()
        .flat_map(|p| p.summary.keys().cloned())
        .collect();

    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(Vec::new());
    let mut header = vec!["point_index".to_string()];
    header.extend(axes.iter().cloned());
    header.push("status".to_string());
    header.push("failure_reason".to_string());
    header.extend(metric_names.iter().cloned());
    writer
        .write_record(&header)
        .map_err(|err| CliError::other(format!("csv failure: {err}")))?;

    for point in &result.points {
        let mut record = vec![point.index.to_string()];
        for axis in &axes {
            record.push(point.params.get(axis).map(|v| v.label()).unwrap_or_default());
        }
        match &point.status {
            PointStatus::Ok => {
                record.push("ok".to_string());
                record.push(String::new());
            }
            PointStatus::Failed { reason } => {
                record.push("failed".to_string());
                record.push(reason.clone());
            }
        }
        for name in &metric_names {
            record.push(point.summary.get(name).map(|&x| format_float(x)).unwrap_or_default());
        }
        writer
            .write_record(&record)
            .map_err(|err| CliError::other(format!("csv failure: {err}")))?;
    }
    writer.into_inner().map_err(|err| CliError::other(format!("csv failure: {err}")))
}

/// The summary is the result plus the digests of the series files it
/// accompanies (the manifest re-lists them together with the summary's own).
#[derive(Serialize)]
struct SummaryDocument<'a> {
    #[serde(flatten)]
    result: &'a ExperimentResult,
    series_sha256: std::collections::BTreeMap<String, String>,
}

fn summary_json(
    result: &ExperimentResult,
    series: &[(String, Vec<u8>)],
) -> Result<Vec<u8>, CliError> {
    let series_sha256 = series
        .iter()
        .map(|(name, bytes)| (name.clone(), hex::encode(Sha256::digest(bytes))))
        .collect();
    let document = SummaryDocument { result, series_sha256 };
    let mut bytes = serde_json::to_vec_pretty(&document)
        .map_err(|err| CliError::other(format!("json failure: {err}")))?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn point_series_name(point: &PointRecord, multi: bool) -> String {
    if multi {
        format!("point_{:03}_series.csv", point.index)
    } else {
        "series.csv".to_string()
    }
}

/// Writes all artifacts for a result into `out_dir`, then the manifest.
/// Returns the manifest after verifying every digest against disk.
pub fn write_outputs(result: &ExperimentResult, out_dir: &Path) -> Result<RunManifest, CliError> {
    std::fs::create_dir_all(out_dir)?;
    let multi = result.points.len() > 1;
    let mut artifacts: Vec<(String, Vec<u8>)> = Vec::new();

    for point in &result.points {
        if let Some(table) = &point.series {
            artifacts.push((point_series_name(point, multi), series_csv(table)?));
        }
    }
    if multi {
        artifacts.push(("sweep_summary.csv".to_string(), sweep_summary_csv(result)?));
    }
    artifacts.push(("summary.json".to_string(), summary_json(result)?));

    let mut records = Vec::with_capacity(artifacts.len());
    for (name, bytes) in &artifacts {
        std::fs::write(out_dir.join(name), bytes)?;
        records.push(ArtifactRecord {
            name: name.clone(),
            bytes: bytes.len(),
            sha256: hex::encode(Sha256::digest(bytes)),
        });
    }

    // verify against what actually landed on disk before sealing the manifest
    for record in &records {
        let on_disk = std::fs::read(out_dir.join(&record.name))?;
        let digest = hex::encode(Sha256::digest(&on_disk));
        if digest != record.sha256 {
            return Err(CliError::other(format!(
                "artifact {} changed between write and verification",
                record.name
            )));
        }
    }

    let manifest = RunManifest {
        schema_version: timeless::experiments::SCHEMA_VERSION,
        preset: result.preset.clone(),
        artifacts: records,
    };
    let mut manifest_bytes = serde_json::to_vec_pretty(&manifest)
        .map_err(|err| CliError::other(format!("json failure: {err}")))?;
    manifest_bytes.push(b'\n');
    std::fs::write(out_dir.join("manifest.json"), manifest_bytes)?;
    Ok(manifest)
}

/// Output directory resolution: CLI flag, then the TIMELESS_OUT environment
/// variable, then the config's own choice, then `timeless_out/<preset>`.
pub fn resolve_out_dir(
    flag: Option<&Path>,
    config_choice: Option<&str>,
    preset: &str,
) -> PathBuf {
    if let Some(dir) = flag {
        return dir.to_path_buf();
    }
    if let Ok(dir) = std::env::var("TIMELESS_OUT") {
        if !dir.is_empty() {
            return PathBuf::from(dir);
        }
    }
    if let Some(dir) = config_choice {
        return PathBuf::from(dir);
    }
    PathBuf::from("timeless_out").join(preset)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_round_trips() {
        for &x in &[0.0, 1.0, -1.5, std::f64::consts::PI, 1.0 / 3.0, 1e-300, 6.02e23] {
            let text = format_float(x);
            let back: f64 = text.parse().unwrap();
            assert_eq!(x.to_bits(), back.to_bits(), "{text}");
        }
    }

    #[test]
    fn csv_uses_crlf_and_header() {
        let table = SeriesTable {
            columns: vec!["metric".into()],
            rows: vec![timeless::experiments::SeriesRow {
                reading_index: 0,
                reading_value: 0.5,
                values: vec![None],
            }],
        };
        let bytes = series_csv(&table).unwrap();
        let text = String::from_utf8(bytes).unwrap();
        assert!(text.starts_with("reading_index,reading_value,metric\r\n"));
        assert!(text.ends_with("\r\n"));
        // unsupported readings serialize as empty cells
        assert!(text.contains(",\r\n") || text.ends_with(",\r\n"), "{text:?}");
    }
}
