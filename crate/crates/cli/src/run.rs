//! Command orchestration.

use std::path::Path;
use std::time::Instant;

use timeless::experiments::{self, ExperimentResult, PointStatus, Preset, ResolvedConfig};
use timeless::hilbert;

use crate::config;
use crate::output::{resolve_out_dir, write_outputs};
use crate::CliError;

/// Flag-level overrides; they beat both config values and the environment.
#[derive(Debug, Default)]
pub struct Overrides {
    pub out: Option<std::path::PathBuf>,
    pub max_dim: Option<usize>,
    pub seed: Option<u64>,
}

fn prepare(
    config_path: &Path,
    overrides: &Overrides,
) -> Result<(ResolvedConfig, std::path::PathBuf), CliError> {
    let (mut config, config_out) = config::load(config_path)?;
    if let Some(max_dim) = overrides.max_dim {
        config.max_dim = max_dim;
    }
    if let Some(seed) = overrides.seed {
        config.seed = seed;
    }
    hilbert::set_max_total_dim(config.max_dim);
    if config.universe.total_dim() > config.max_dim {
        return Err(CliError::resource_cap(format!(
            "requested total dimension {} exceeds the cap {}",
            config.universe.total_dim(),
            config.max_dim
        )));
    }
    let out_dir =
        resolve_out_dir(overrides.out.as_deref(), config_out.as_deref(), config.preset.name());
    Ok((config, out_dir))
}

fn finish(
    result: &ExperimentResult,
    out_dir: &Path,
    started: Instant,
    require_any_success: bool,
) -> Result<i32, CliError> {
    if require_any_success && result.all_failed() {
        // single-point runs: surface a cap failure under its own exit code
        let reason = result
            .points
            .iter()
            .find_map(|p| match &p.status {
                PointStatus::Failed { reason } => Some(reason.clone()),
                PointStatus::Ok => None,
            })
            .unwrap_or_else(|| "every point failed".to_string());
        if reason.contains("space too large") {
            return Err(CliError::resource_cap(reason));
        }
        return Err(CliError::total_failure(reason));
    }
    let manifest = write_outputs(result, out_dir)?;
    let failed = result
        .points
        .iter()
        .filter(|p| matches!(p.status, PointStatus::Failed { .. }))
        .count();
    eprintln!(
        "{}: {} point(s), {} failed, {} artifact(s) in {} ({:.2?})",
        result.preset,
        result.points.len(),
        failed,
        manifest.artifacts.len() + 1,
        out_dir.display(),
        started.elapsed()
    );
    Ok(0)
}

/// Executes the preset once at its (possibly overridden) base parameters.
pub fn cmd_run(config_path: &Path, overrides: &Overrides) -> Result<i32, CliError> {
    let started = Instant::now();
    let (config, out_dir) = prepare(config_path, overrides)?;
    let result = experiments::run_single(&config);
    finish(&result, &out_dir, started, true)
}

/// Executes every sweep-grid point; failures are recorded, and only a run
/// in which all points fail exits nonzero.
pub fn cmd_sweep(config_path: &Path, overrides: &Overrides) -> Result<i32, CliError> {
    let started = Instant::now();
    let (config, out_dir) = prepare(config_path, overrides)?;
    let result = experiments::run_sweep(&config)
        .map_err(|err| CliError::config(format!("field \"sweep\": {err}")))?;
    if result.all_failed() {
        return Err(CliError::total_failure("every sweep point failed".to_string()));
    }
    finish(&result, &out_dir, started, false)
}

/// Prints the preset registry, sorted by name, one line each.
pub fn cmd_list_presets() -> i32 {
    for preset in Preset::ALL {
        println!("{:<18} {}", preset.name(), preset.description());
    }
    0
}
