//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Run with `cargo test -p timeless-cli --test acceptance -- --nocapture`
//! to see the lines as they print.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use num_complex::Complex;

use timeless::clock::{build_clock, commutator_defect, gaussian_clock_state};
use timeless::constraint::{
    build_history_state, matched_rest_hamiltonian, physical_states, projection_onto_span,
    total_hamiltonian, UniverseSpec,
};
use timeless::experiments::{run_sweep, PointStatus, Preset};
use timeless::hilbert::{
    fidelity, spectrum, C64, CompositeSpace, Propagator, PureState, KERNEL_TOL,
};
use timeless::paw::{condition, emergent_fidelity, pairwise_fidelity_range, separability_demo};
use timeless::random::{random_state, rng};

/// Prints the criterion verdict even when an assertion unwinds.
struct Criterion {
    number: u8,
    name: &'static str,
    passed: bool,
}

impl Criterion {
    fn new(number: u8, name: &'static str) -> Self {
        Self { number, name, passed: false }
    }

    fn pass(mut self) {
        self.passed = true;
        println!("ACCEPTANCE {:02} {}: PASS", self.number, self.name);
    }
}

impl Drop for Criterion {
    fn drop(&mut self) {
        if !self.passed {
            println!("ACCEPTANCE {:02} {}: FAIL", self.number, self.name);
        }
    }
}

fn matched_universe(n: usize, dim_r: usize) -> UniverseSpec {
    let clock = build_clock(n, 1.0).unwrap();
    let rest = CompositeSpace::single(dim_r).unwrap();
    let levels: Vec<usize> = (0..dim_r).collect();
    let h_r = matched_rest_hamiltonian(&clock, &rest, &levels).unwrap();
    UniverseSpec::non_interacting(clock, rest, h_r).unwrap()
}

fn uniform_weights(n: usize) -> Vec<C64> {
    vec![Complex::new(1.0, 0.0); n]
}

fn summary_of(result: &timeless::experiments::ExperimentResult, index: usize) -> &BTreeMap<String, f64> {
    let point = &result.points[index];
    assert!(
        matches!(point.status, PointStatus::Ok),
        "point {index} failed: {:?}",
        point.status
    );
    &point.summary
}

#[test]
fn criterion_01_constraint_satisfaction() {
    let check = Criterion::new(1, "constraint satisfaction");
    let started = Instant::now();
    let u = matched_universe(16, 8);
    let seed = PureState::uniform(u.rest_space().clone());
    let history = build_history_state(&u, &seed, &uniform_weights(16)).unwrap();
    let radius = spectrum(&total_hamiltonian(&u).unwrap()).unwrap().spectral_radius();
    assert!(
        history.residual() <= 1e-10 * radius,
        "residual {} exceeds 1e-10 x spectral radius {radius}",
        history.residual()
    );
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:.2?}, budget 5 s");
    check.pass();
}

#[test]
fn criterion_02_oracle_equivalence() {
    let check = Criterion::new(2, "oracle equivalence (history span = kernel)");
    for (n, dim_r) in [(2usize, 2usize), (4, 2), (8, 4), (8, 8), (16, 8), (16, 16), (32, 16)] {
        assert!(n * dim_r <= 512);
        let u = matched_universe(n, dim_r);
        let kernel = physical_states(&u, KERNEL_TOL).unwrap();
        assert_eq!(kernel.len(), dim_r, "kernel dimension at N={n} dim_r={dim_r}");
        let mut histories = Vec::with_capacity(dim_r);
        for j in 0..dim_r {
            let seed = PureState::basis_state(u.rest_space().clone(), j).unwrap();
            let history = build_history_state(&u, &seed, &uniform_weights(n)).unwrap();
            let (weight, _) = projection_onto_span(history.state(), &kernel).unwrap();
            assert!(
                weight >= 1.0 - 1e-9,
                "history -> kernel projection {weight} at N={n} dim_r={dim_r} seed {j}"
            );
            histories.push(history.state().clone());
        }
        for (i, k) in kernel.iter().enumerate() {
            let (weight, _) = projection_onto_span(k, &histories).unwrap();
            assert!(
                weight >= 1.0 - 1e-9,
                "kernel -> history projection {weight} at N={n} dim_r={dim_r} vector {i}"
            );
        }
    }
    check.pass();
}

#[test]
fn criterion_03_emergent_schrodinger_dynamics() {
    let check = Criterion::new(3, "emergent Schrodinger dynamics");
    for n in [8usize, 16, 32] {
        let u = matched_universe(n, n / 2);
        let mut r = rng(2026, n as u64);
        let seed = random_state(u.rest_space().clone(), &mut r).unwrap();
        let history = build_history_state(&u, &seed, &uniform_weights(n)).unwrap();
        let trajectory = condition(history.state(), u.clock()).unwrap();
        let entries = emergent_fidelity(&trajectory, u.rest_hamiltonian()).unwrap();
        for (k, entry) in entries.iter().enumerate() {
            let f = entry.expect("matched history supports every reading");
            assert!((f - 1.0).abs() <= 1e-9, "N={n} reading {k}: fidelity {f}");
        }
    }
    check.pass();
}

#[test]
fn criterion_04_separability_failure() {
    let check = Criterion::new(4, "separability failure (no time without entanglement)");
    let clock = build_clock(8, 1.0).unwrap();
    let rest = CompositeSpace::single(4).unwrap();
    let h_r = matched_rest_hamiltonian(&clock, &rest, &[0, 1, 2, 3]).unwrap();
    let mut r = rng(404, 0);
    for trial in 0..100 {
        let chi = random_state(clock.space().clone(), &mut r).unwrap();
        let phi = random_state(rest.clone(), &mut r).unwrap();
        let trajectory = condition(&chi.tensor(&phi).unwrap(), &clock).unwrap();
        if let Some((lo, hi)) = pairwise_fidelity_range(&trajectory) {
            assert!((lo - 1.0).abs() <= 1e-12, "trial {trial}: min pairwise {lo}");
            assert!((hi - 1.0).abs() <= 1e-12, "trial {trial}: max pairwise {hi}");
        }
    }
    // entangled contrast: the same machinery applied to a uniform history
    let chi = random_state(clock.space().clone(), &mut r).unwrap();
    let phi = PureState::uniform(rest);
    let report = separability_demo(&clock, &chi, &phi, &h_r).unwrap();
    assert!(
        report.contrast_min_pairwise < 0.99,
        "entangled contrast min pairwise {}",
        report.contrast_min_pairwise
    );
    check.pass();
}

#[test]
fn criterion_05_static_physical_states() {
    let check = Criterion::new(5, "static physical states");
    let u = matched_universe(8, 4);
    let h = total_hamiltonian(&u).unwrap();
    let propagator = Propagator::new(&h).unwrap();
    let kernel = physical_states(&u, KERNEL_TOL).unwrap();
    assert!(!kernel.is_empty());
    for (i, state) in kernel.iter().enumerate() {
        for t in [0.1, 1.0, 10.0] {
            let evolved = propagator.apply(t, state).unwrap();
            let f = fidelity(&evolved, state).unwrap();
            assert!((f - 1.0).abs() <= 1e-10, "kernel state {i} at t={t}: fidelity {f}");
        }
    }
    check.pass();
}

#[test]
fn criterion_06_commutator_defect() {
    let check = Criterion::new(6, "commutator defect of the finite clock");
    let clock32 = build_clock(32, 1.0).unwrap();
    let state32 = gaussian_clock_state(&clock32, 15.5, 32.0_f64.sqrt()).unwrap();
    let defect32 = commutator_defect(&clock32, &state32).unwrap();
    assert!(defect32 < 0.05, "defect {defect32} at N=32");
    let mut last = f64::INFINITY;
    for n in [16usize, 32, 64] {
        let clock = build_clock(n, 1.0).unwrap();
        let center = (n as f64 - 1.0) / 2.0;
        let state = gaussian_clock_state(&clock, center, (n as f64).sqrt()).unwrap();
        let defect = commutator_defect(&clock, &state).unwrap();
        assert!(defect < last, "defect {defect} did not strictly decrease at N={n}");
        last = defect;
    }
    check.pass();
}

/// Shipped regression baseline for the default readability sweep
/// (couplings 0, 0.05, 0.1, 0.2, 0.4, 0.6), measured from this
/// implementation.
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
fn criterion_07_readability_null_and_response() {
    let check = Criterion::new(7, "readability null and response");
    let config = Preset::ReadabilityScan.default_config();
    let result = run_sweep(&config).unwrap();
    let scores: Vec<f64> =
        (0..result.points.len()).map(|i| summary_of(&result, i)["readability"]).collect();
    assert!(scores[0] < 1e-8, "zero-coupling readability {}", scores[0]);
    assert!(scores[5] > 0.1, "shipped-coupling readability {}", scores[5]);
    for (i, (got, want)) in scores.iter().zip(READABILITY_BASELINE).enumerate() {
        assert!(
            (got - want).abs() <= 1e-9,
            "baseline drift at point {i}: measured {got}, baseline {want}"
        );
    }
    // and the curve must reproduce on re-run, bit for bit
    let rerun = run_sweep(&config).unwrap();
    for i in 0..result.points.len() {
        let a = summary_of(&result, i)["readability"];
        let b = summary_of(&rerun, i)["readability"];
        assert_eq!(a.to_bits(), b.to_bits(), "re-run drift at point {i}");
    }
    check.pass();
}

#[test]
fn criterion_08_record_arrow() {
    let check = Criterion::new(8, "record arrow (monotone record counts)");
    let config = Preset::RecordArrow.default_config();
    let result = run_sweep(&config).unwrap(); // record_qubits in {2, 4}
    for (index, m) in [(0usize, 2.0), (1, 4.0)] {
        let summary = summary_of(&result, index);
        assert!(
            summary["monotonicity_defect"] <= 1e-9,
            "m={m}: records decreased by {}",
            summary["monotonicity_defect"]
        );
        assert!(
            (summary["records_final"] - m).abs() <= 1e-9,
            "m={m}: final count {}",
            summary["records_final"]
        );
    }
    check.pass();
}

#[test]
fn criterion_09_clock_ambiguity_conservation() {
    let check = Criterion::new(9, "clock ambiguity conservation laws");
    let config = Preset::ClockAmbiguity.default_config();
    let result = run_sweep(&config).unwrap(); // identity, swap, random
    for index in 0..3 {
        let summary = summary_of(&result, index);
        assert!(
            summary["spectrum_drift"] <= 1e-10,
            "repartition {index}: spectrum drift {}",
            summary["spectrum_drift"]
        );
        assert_eq!(
            summary["kernel_dim_base"], summary["kernel_dim_repartitioned"],
            "repartition {index}: kernel dimension changed"
        );
    }
    let identity = summary_of(&result, 0);
    assert_eq!(identity["divergence"], 0.0, "identity divergence must be exactly zero");
    check.pass();
}

#[test]
fn criterion_10_size_discrepancy_pathology() {
    let check = Criterion::new(10, "size-discrepancy pathology");
    let config = Preset::SizeScan.default_config();
    let result = run_sweep(&config).unwrap();
    let mut aliased_checked = false;
    let mut matched_checked = false;
    for index in 0..result.points.len() {
        let point = &result.points[index];
        let n = point.params["clock_dim"].as_integer().unwrap();
        let dim_r = point.params["rest_dim"].as_integer().unwrap();
        let summary = summary_of(&result, index);
        if n == 8 && dim_r == 16 {
            assert!(
                summary["aliasing_multiplicity"] >= 2.0,
                "aliased preset multiplicity {}",
                summary["aliasing_multiplicity"]
            );
            assert!(
                summary["min_emergent_fidelity"] < 1.0,
                "aliased preset fidelity {}",
                summary["min_emergent_fidelity"]
            );
            aliased_checked = true;
        }
        if n == 8 && dim_r == 8 {
            assert_eq!(summary["aliasing_multiplicity"], 1.0);
            assert!(
                summary["min_emergent_fidelity"] >= 1.0 - 1e-9,
                "matched preset fidelity {}",
                summary["min_emergent_fidelity"]
            );
            matched_checked = true;
        }
    }
    assert!(aliased_checked && matched_checked, "grid must cover both presets");
    check.pass();
}

#[test]
fn criterion_11_byte_identical_outputs() {
    let check = Criterion::new(11, "byte-identical outputs across reruns");
    let binary = env!("CARGO_BIN_EXE_timeless");
    let work = tempfile::tempdir().unwrap();

    let run_config = work.path().join("run.json");
    std::fs::write(&run_config, "{\"schema_version\": 1, \"preset\": \"emergent_basic\"}\n")
        .unwrap();
    let sweep_config = work.path().join("sweep.json");
    std::fs::write(
        &sweep_config,
        "{\"schema_version\": 1, \"preset\": \"cosmo_toy\", \"seed\": 5}\n",
    )
    .unwrap();

    let invoke = |subcommand: &str, config: &Path, out: &Path| {
        let output = Command::new(binary)
            .arg(subcommand)
            .arg(config)
            .arg("--out")
            .arg(out)
            .output()
            .expect("binary runs");
        assert!(
            output.status.success(),
            "{subcommand} failed: {}",
            String::from_utf8_lossy(&output.stderr)
        );
    };

    for (subcommand, config) in [("run", &run_config), ("sweep", &sweep_config)] {
        let out_a = work.path().join(format!("{subcommand}_a"));
        let out_b = work.path().join(format!("{subcommand}_b"));
        invoke(subcommand, config, &out_a);
        invoke(subcommand, config, &out_b);

        let mut names: Vec<String> = std::fs::read_dir(&out_a)
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .collect();
        names.sort();
        let mut names_b: Vec<String> = std::fs::read_dir(&out_b)
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .collect();
        names_b.sort();
        assert_eq!(names, names_b, "{subcommand}: artifact sets differ");
        assert!(names.contains(&"summary.json".to_string()));
        assert!(names.contains(&"manifest.json".to_string()));
        for name in &names {
            let a = std::fs::read(out_a.join(name)).unwrap();
            let b = std::fs::read(out_b.join(name)).unwrap();
            assert_eq!(a, b, "{subcommand}: artifact {name} differs between reruns");
        }
    }
    check.pass();
}

#[test]
fn criterion_cli_exit_codes() {
    // supporting contract behind several criteria: the stable exit codes
    let binary = env!("CARGO_BIN_EXE_timeless");
    let work = tempfile::tempdir().unwrap();

    let missing_field = work.path().join("missing.json");
    std::fs::write(&missing_field, "{\"schema_version\": 1}").unwrap();
    let status = Command::new(binary).arg("run").arg(&missing_field).output().unwrap();
    assert_eq!(status.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&status.stderr);
    assert!(stderr.contains("preset"), "error names the field: {stderr}");

    let over_cap = work.path().join("cap.json");
    std::fs::write(
        &over_cap,
        "{\"schema_version\": 1, \"preset\": \"emergent_basic\", \"universe\": {\"clock_dim\": 4096}}",
    )
    .unwrap();
    let status = Command::new(binary).arg("run").arg(&over_cap).output().unwrap();
    assert_eq!(status.status.code(), Some(3));

    let empty_sweep = work.path().join("empty.json");
    std::fs::write(
        &empty_sweep,
        "{\"schema_version\": 1, \"preset\": \"emergent_basic\", \"sweep\": {}}",
    )
    .unwrap();
    let status = Command::new(binary).arg("sweep").arg(&empty_sweep).output().unwrap();
    assert_eq!(status.status.code(), Some(2));

    let all_fail = work.path().join("allfail.json");
    std::fs::write(
        &all_fail,
        "{\"schema_version\": 1, \"preset\": \"clock_ambiguity\", \"sweep\": {\"repartition\": [\"bogus\"]}}",
    )
    .unwrap();
    let status = Command::new(binary).arg("sweep").arg(&all_fail).output().unwrap();
    assert_eq!(status.status.code(), Some(4));

    let listing = Command::new(binary).arg("list-presets").output().unwrap();
    assert_eq!(listing.status.code(), Some(0));
    let stdout = String::from_utf8(listing.stdout.clone()).unwrap();
    for name in ["emergent_basic", "readability_scan", "record_arrow", "clock_ambiguity", "size_scan", "cosmo_toy"] {
        assert!(stdout.contains(name), "listing misses {name}");
    }
    let again = Command::new(binary).arg("list-presets").output().unwrap();
    assert_eq!(again.stdout, listing.stdout, "listing must be stable");
}
