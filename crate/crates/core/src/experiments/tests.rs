use super::*;
use crate::hilbert;

fn config_for(preset: Preset) -> ResolvedConfig {
    preset.default_config()
}

fn ok_summary(record: &PointRecord) -> &BTreeMap<String, f64> {
    assert_eq!(record.status, PointStatus::Ok, "point failed: {:?}", record.status);
    &record.summary
}

#[test]
fn preset_names_are_sorted_and_stable() {
    let names: Vec<&str> = Preset::ALL.iter().map(|p| p.name()).collect();
    let mut sorted = names.clone();
    sorted.sort_unstable();
    assert_eq!(names, sorted);
    assert_eq!(
        names,
        vec![
            "clock_ambiguity",
            "cosmo_toy",
            "emergent_basic",
            "readability_scan",
            "record_arrow",
            "size_scan"
        ]
    );
    for p in Preset::ALL {
        assert_eq!(Preset::parse(p.name()).unwrap(), p);
        assert!(!p.description().is_empty());
    }
    assert!(Preset::parse("nonsense").is_err());
}

#[test]
fn grid_expansion_is_row_major_over_sorted_axes() {
    let mut config = config_for(Preset::EmergentBasic);
    config.sweep.insert(
        "clock_dim".into(),
        vec![SweepValue::Integer(4), SweepValue::Integer(8)],
    );
    config
        .sweep
        .insert("spacing".into(), vec![SweepValue::Real(1.0), SweepValue::Real(2.0)]);
    let points = config.grid_points().unwrap();
    assert_eq!(points.len(), 4);
    // clock_dim is the outer axis (sorted first), spacing the inner
    let dims: Vec<usize> = points.iter().map(|p| p.universe.clock_dim).collect();
    assert_eq!(dims, vec![4, 4, 8, 8]);
    let spacings: Vec<f64> = points.iter().map(|p| p.universe.spacing).collect();
    assert_eq!(spacings, vec![1.0, 2.0, 1.0, 2.0]);
}

#[test]
fn empty_sweep_is_rejected() {
    let config = config_for(Preset::EmergentBasic); // no sweep axes by default
    assert!(config.grid_points().is_err());
    let mut with_empty_axis = config;
    with_empty_axis.sweep.insert("coupling".into(), vec![]);
    assert!(with_empty_axis.grid_points().is_err());
}

#[test]
fn unknown_sweep_field_is_rejected() {
    let mut config = config_for(Preset::EmergentBasic);
    config.sweep.insert("warp_factor".into(), vec![SweepValue::Real(9.0)]);
    let err = config.grid_points().unwrap_err();
    assert!(err.to_string().contains("warp_factor"));
}

#[test]
fn over_cap_point_is_recorded_as_failure() {
    let mut config = config_for(Preset::EmergentBasic);
    config.universe.clock_dim = 4096;
    let result = run_single(&config);
    assert!(result.all_failed());
    match &result.points[0].status {
        PointStatus::Failed { reason } => assert!(reason.contains("space too large"), "{reason}"),
        PointStatus::Ok => panic!("expected failure"),
    }
}

#[test]
fn identical_configs_produce_bit_identical_results() {
    for preset in [Preset::EmergentBasic, Preset::CosmoToy, Preset::ClockAmbiguity] {
        let config = config_for(preset);
        let a = match preset {
            Preset::EmergentBasic => run_single(&config),
            _ => run_sweep(&config).unwrap(),
        };
        let b = match preset {
            Preset::EmergentBasic => run_single(&config),
            _ => run_sweep(&config).unwrap(),
        };
        let ja = serde_json::to_string(&a).unwrap();
        let jb = serde_json::to_string(&b).unwrap();
        assert_eq!(ja, jb, "{} runs differ", preset.name());
    }
}

// ------------------------------------------------------------- emergent

#[test]
fn emergent_basic_baseline_run() {
    let config = config_for(Preset::EmergentBasic);
    let result = run_single(&config);
    assert_eq!(result.points.len(), 1);
    let summary = ok_summary(&result.points[0]);
    assert!(summary["residual_relative"] < 1e-10);
    assert_eq!(summary["kernel_dim"], 4.0);
    assert!(summary["kernel_projection_weight"] >= 1.0 - 1e-9);
    assert!(summary["complementarity_mean"].abs() < 1e-10);
    assert!(summary["complementarity_variance"].abs() < 1e-10);
    assert!((summary["clock_rest_entropy"] - 4.0_f64.ln()).abs() < 1e-10);
    let series = result.points[0].series.as_ref().unwrap();
    assert_eq!(series.rows.len(), 8);
    let fid_col = series.columns.iter().position(|c| c == "emergent_fidelity").unwrap();
    for row in &series.rows {
        let f = row.values[fid_col].expect("all readings supported");
        assert!((f - 1.0).abs() < 1e-9, "reading {}: {f}", row.reading_index);
    }
}

#[test]
fn emergent_basic_rejects_coupling() {
    let mut config = config_for(Preset::EmergentBasic);
    config.universe.coupling = 0.2;
    let result = run_single(&config);
    assert!(result.all_failed());
}

// ----------------------------------------------------------- readability

/// Measured once from this implementation and frozen as the regression
/// baseline for the default readability sweep (couplings 0 .. 0.6).
#[allow(clippy::excessive_precision)]
const READABILITY_BASELINE: [f64; 6] = [
    5.89805981832114412e-17,
    5.42763208056960891e-2,
    1.08333305699039817e-1,
    2.13001535957431404e-1,
    3.88126879983172912e-1,
    4.84127800011998621e-1,
];

#[test]
fn readability_null_and_response() {
    let config = config_for(Preset::ReadabilityScan);
    let result = run_sweep(&config).unwrap();
    assert_eq!(result.points.len(), 6);
    let scores: Vec<f64> =
        result.points.iter().map(|p| ok_summary(p)["readability"]).collect();
    // zero-coupling null
    assert!(scores[0] < 1e-8, "null readability {}", scores[0]);
    // shipped coupling responds
    assert!(scores[5] > 0.1, "readability at g* {}", scores[5]);
    // monotone response over the weak-coupling grid
    for pair in scores.windows(2) {
        assert!(pair[1] >= pair[0] - 1e-12, "readability not monotone: {scores:?}");
    }
    // regression baseline
    for (got, want) in scores.iter().zip(READABILITY_BASELINE) {
        assert!((got - want).abs() <= 1e-9, "baseline drift: {got} vs {want}");
    }
}

#[test]
fn readability_weak_coupling_fidelity_decreases_with_reading() {
    let mut config = config_for(Preset::ReadabilityScan);
    config.universe.coupling = 0.05;
    config.sweep.clear();
    let result = run_single(&config);
    let series = result.points[0].series.as_ref().unwrap();
    let fid_col = series.columns.iter().position(|c| c == "emergent_fidelity").unwrap();
    let fids: Vec<f64> = series.rows.iter().map(|r| r.values[fid_col].unwrap()).collect();
    for (k, pair) in fids.windows(2).enumerate() {
        assert!(pair[1] <= pair[0] + 1e-12, "fidelity rose at reading {k}: {fids:?}");
    }
    assert!(fids[15] < 1.0 - 1e-6);
    let summary = ok_summary(&result.points[0]);
    assert!(summary["min_emergent_fidelity"] < 1.0);
    assert!(summary["mutual_information"] > 0.0);
}

// ---------------------------------------------------------------- record

#[test]
fn record_counts_are_monotone_and_complete() {
    let config = config_for(Preset::RecordArrow);
    let result = run_sweep(&config).unwrap(); // m in {2, 4}
    for (point, m) in result.points.iter().zip([2.0, 4.0]) {
        let summary = ok_summary(point);
        assert!(summary["monotonicity_defect"] <= 1e-9);
        assert!(
            (summary["records_final"] - m).abs() <= 1e-9,
            "final count {} for m={m}",
            summary["records_final"]
        );
        let series = point.series.as_ref().unwrap();
        let col = series.columns.iter().position(|c| c == "records_set").unwrap();
        let first = series.rows[0].values[col].unwrap();
        assert!(first.abs() <= 1e-12, "records set at the first reading: {first}");
        // every reported entropy stays inside [0, ln(local dimension)]
        let register_cap = (1u64 << m as u64) as f64;
        assert!(summary["max_register_shannon_entropy"] >= -1e-10);
        assert!(summary["max_register_shannon_entropy"] <= register_cap.ln() + 1e-10);
        let tail_dim = point
            .params
            .get("record_qubits")
            .map(|_| 4.0_f64) // preset remainder factor
            .unwrap();
        assert!(summary["clock_rest_entropy"] >= -1e-10);
        assert!(summary["clock_rest_entropy"] <= (register_cap * tail_dim).ln() + 1e-10);
    }
}

#[test]
fn record_windows_too_small_is_rejected() {
    let mut config = config_for(Preset::RecordArrow);
    config.universe.clock_dim = 6;
    config.universe.record_qubits = 4;
    config.sweep.clear();
    let result = run_single(&config);
    assert!(result.all_failed());
}

// ------------------------------------------------------------- ambiguity

#[test]
fn repartition_invariants_hold() {
    let config = config_for(Preset::ClockAmbiguity);
    let result = run_sweep(&config).unwrap(); // identity, swap, random
    assert_eq!(result.points.len(), 3);

    let identity = ok_summary(&result.points[0]);
    assert_eq!(identity["divergence"], 0.0, "identity divergence must be exactly zero");
    assert_eq!(identity["support_mismatch"], 0.0);

    for point in &result.points {
        let summary = ok_summary(point);
        assert!(summary["spectrum_drift"] <= 1e-10, "drift {}", summary["spectrum_drift"]);
        assert_eq!(summary["kernel_dim_base"], summary["kernel_dim_repartitioned"]);
        assert!(summary["norm_deviation"] <= 1e-12);
        assert!(summary["unitarity_defect"] <= 1e-10);
    }

    let swap = ok_summary(&result.points[1]);
    assert!(
        swap["weight_reversal_defect"] <= 1e-10,
        "swap weights must be reading-reversed: {}",
        swap["weight_reversal_defect"]
    );
    assert!(swap["divergence"] > 0.0);

    let random = ok_summary(&result.points[2]);
    assert!(random["divergence"] > 0.0);
}

#[test]
fn unknown_repartition_is_a_recorded_failure() {
    let mut config = config_for(Preset::ClockAmbiguity);
    config.sweep.insert(
        "repartition".into(),
        vec![SweepValue::Text("mystery".into())],
    );
    let result = run_sweep(&config).unwrap();
    assert!(result.all_failed());
}

// ------------------------------------------------------------- size scan

#[test]
fn size_scan_flags_aliasing() {
    let config = config_for(Preset::SizeScan);
    let result = run_sweep(&config).unwrap();
    assert_eq!(result.points.len(), 8); // {2,8} x {2,4,8,16}
    for point in &result.points {
        let n = point.params["clock_dim"].as_integer().unwrap() as usize;
        let dim_r = point.params["rest_dim"].as_integer().unwrap() as usize;
        let summary = ok_summary(point);
        let expected_multiplicity = dim_r.div_ceil(n);
        assert_eq!(
            summary["aliasing_multiplicity"], expected_multiplicity as f64,
            "N={n} dim_r={dim_r}"
        );
        assert_eq!(summary["kernel_dim"], n.min(dim_r) as f64);
        if dim_r <= n {
            assert!(
                summary["min_emergent_fidelity"] >= 1.0 - 1e-9,
                "matched case N={n} dim_r={dim_r}: {}",
                summary["min_emergent_fidelity"]
            );
            assert!(summary["residual_intended"] < 1e-10);
        } else {
            assert!(
                summary["min_emergent_fidelity"] < 1.0 - 1e-6,
                "aliased case N={n} dim_r={dim_r}: {}",
                summary["min_emergent_fidelity"]
            );
            // kept kernel weight is the in-band fraction
            assert!((summary["projection_weight"] - n as f64 / dim_r as f64).abs() < 1e-9);
            assert!(summary["residual_intended"] > 1e-3);
        }
    }
}

// ----------------------------------------------------------------- cosmo

#[test]
fn cosmo_null_and_regimes() {
    let config = config_for(Preset::CosmoToy);
    let result = run_sweep(&config).unwrap(); // couplings 0, 0.2, 0.4
    let null = ok_summary(&result.points[0]);
    assert!(null["mode_readability"] < 1e-8);
    assert!(null["entanglement_max"] < 1e-10);

    let driven = ok_summary(&result.points[2]);
    assert!(driven["mode_readability"] > 0.0);
    assert!(driven["entanglement_max"] > 0.01);
    // qubit-mode entropies live in [0, ln 2]
    assert!(driven["entanglement_max"] <= 2.0_f64.ln() + 1e-10);

    // attraction regime: same coupling, growth arrives late
    let mut attraction_config = config_for(Preset::CosmoToy);
    attraction_config.universe.regime = Regime::Attraction;
    attraction_config.sweep.clear();
    let attraction = run_single(&attraction_config);
    let att = ok_summary(&attraction.points[0]);
    assert!(att["mode_readability"] > 0.0);
    // separation entangles early, attraction late
    let sep_early = driven["entanglement_early_mean"];
    let att_early = att["entanglement_early_mean"];
    assert!(
        att_early < sep_early,
        "attraction early mean {att_early} should undercut separation {sep_early}"
    );
    assert!(att["entanglement_late_mean"] > att["entanglement_early_mean"]);
}

#[test]
fn cap_override_is_honored() {
    // raising the cap admits a universe the default would reject
    let original = hilbert::max_total_dim();
    assert_eq!(original, 4096);
    let mut config = config_for(Preset::EmergentBasic);
    config.universe.clock_dim = 16;
    config.universe.rest_dims = vec![8];
    let result = run_single(&config);
    assert!(!result.all_failed());
    assert_eq!(hilbert::max_total_dim(), original);
}
