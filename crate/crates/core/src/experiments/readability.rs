//! Coupling a small subsystem to the clock and measuring what it learns.
//!
//! The rest splits into a small probe (first factor, a qubit) and a larger
//! remainder carrying the matched ladder. The interaction drives the probe
//! through a reading-modulated field, diagonal in the clock time basis with
//! profile `sin^2(pi k / N)`. At zero coupling the probe's conditional state
//! is reading-independent by construction; turning the coupling up makes the
//! probe's reduced state track the reading, which is what the readability
//! score measures.

use std::collections::BTreeMap;

use crate::clock::build_clock;
use crate::constraint::{build_interacting_history_state, UniverseSpec};
use crate::error::{Error, Result};
use crate::hilbert::{CompositeSpace, HermitianOperator, PureState};
use crate::paw::{condition, emergent_fidelity};

use super::metrics::{
    clock_trace_shift, embed_on_factor, ladder_on_last_factor, mutual_information, pauli_x,
    readability, resolve_seed, supported_min,
};
use super::{PointOutcome, PointParams, SeriesRow, SeriesTable};

pub(super) fn run(params: &PointParams, seed: u64) -> Result<PointOutcome> {
    let uni = &params.universe;
    if uni.rest_dims.len() < 2 {
        return Err(Error::IncompatibleSpec(
            "field \"rest_dims\" must list a probe factor and a remainder".into(),
        ));
    }
    if uni.rest_dims[0] != 2 {
        return Err(Error::IncompatibleSpec(
            "field \"rest_dims\" must start with a qubit probe".into(),
        ));
    }
    let clock = build_clock(uni.clock_dim, uni.spacing)?;
    let rest_space = CompositeSpace::new(&uni.rest_dims)?;
    let h_r = ladder_on_last_factor(&clock, &rest_space)?;

    let n = clock.dim();
    let drive = embed_on_factor(&rest_space, 0, &pauli_x())?;
    let terms: Vec<HermitianOperator> = (0..n)
        .map(|k| {
            let phase = std::f64::consts::PI * k as f64 / n as f64;
            drive.scale(phase.sin().powi(2))
        })
        .collect();
    let universe = UniverseSpec::with_clock_diagonal_interaction(
        clock,
        rest_space.clone(),
        h_r,
        terms,
        uni.coupling,
    )?;

    // canonical seed: probe at |0>, remainder uniform
    let probe = PureState::basis_state(CompositeSpace::single(uni.rest_dims[0])?, 0)?;
    let tail_space = rest_space.sub_space(&(1..uni.rest_dims.len()).collect::<Vec<_>>())?;
    let canonical = probe.tensor(&PureState::uniform(tail_space))?;
    let rest_seed = resolve_seed(params.seed_state, canonical, &rest_space, seed)?;
    let weights = params.weights.weights(n);

    let history = build_interacting_history_state(&universe, &rest_seed, &weights)?;
    let trajectory = condition(history.state(), universe.clock())?;
    let (score, distances) = readability(&trajectory, Some(&[0]))?;
    let emergent = emergent_fidelity(&trajectory, universe.rest_hamiltonian())?;
    // global factor 0 is the clock, factor 1 the probe
    let mi = mutual_information(history.state(), &[0], &[1])?;

    let mut summary = BTreeMap::new();
    summary.insert("readability".into(), score);
    summary.insert("mutual_information".into(), mi);
    summary.insert("residual".into(), history.residual());
    summary.insert("clock_trace_shift".into(), clock_trace_shift(&universe)?);
    if let Some(min_fid) = supported_min(&emergent) {
        summary.insert("min_emergent_fidelity".into(), min_fid);
    }

    let rows = trajectory
        .branches()
        .iter()
        .enumerate()
        .map(|(k, branch)| SeriesRow {
            reading_index: k,
            reading_value: branch.reading,
            values: vec![Some(branch.weight), emergent[k], distances[k]],
        })
        .collect();
    let series = SeriesTable {
        columns: vec![
            "branch_weight".into(),
            "emergent_fidelity".into(),
            "probe_distance_from_average".into(),
        ],
        rows,
    };

    Ok(PointOutcome { summary, series: Some(series) })
}
