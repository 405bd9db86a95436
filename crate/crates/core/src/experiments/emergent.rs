//! Baseline preset: matched uncoupled universe, zero-energy history state,
//! conditioning and the emergent-dynamics fidelity series.

use std::collections::BTreeMap;

use crate::clock::build_clock;
use crate::constraint::{
    build_history_state, complementarity_check, matched_rest_hamiltonian, physical_states,
    projection_onto_span, total_hamiltonian, UniverseSpec,
};
use crate::error::{Error, Result};
use crate::hilbert::{spectrum, CompositeSpace, PureState, KERNEL_TOL};
use crate::paw::{condition, emergent_fidelity, entanglement_series, Cut, EntanglementSeries};

use super::metrics::resolve_seed;
use super::{PointOutcome, PointParams, SeriesRow, SeriesTable};

pub(super) fn run(params: &PointParams, seed: u64) -> Result<PointOutcome> {
    let uni = &params.universe;
    if uni.coupling != 0.0 {
        return Err(Error::IncompatibleSpec(
            "field \"coupling\" must be 0 for emergent_basic (interaction-free preset)".into(),
        ));
    }
    let clock = build_clock(uni.clock_dim, uni.spacing)?;
    let rest_space = CompositeSpace::new(&uni.rest_dims)?;
    let levels: Vec<usize> = (0..rest_space.total_dim()).collect();
    let h_r = matched_rest_hamiltonian(&clock, &rest_space, &levels)?;
    let universe = UniverseSpec::non_interacting(clock, rest_space.clone(), h_r)?;

    let canonical = PureState::uniform(rest_space.clone());
    let rest_seed = resolve_seed(params.seed_state, canonical, &rest_space, seed)?;
    let weights = params.weights.weights(uni.clock_dim);

    let history = build_history_state(&universe, &rest_seed, &weights)?;
    let trajectory = condition(history.state(), universe.clock())?;
    let emergent = emergent_fidelity(&trajectory, universe.rest_hamiltonian())?;

    let kernel = physical_states(&universe, KERNEL_TOL)?;
    let (projection_weight, _) = projection_onto_span(history.state(), &kernel)?;
    let (mean, variance) = complementarity_check(&universe, history.state())?;
    let radius = spectrum(&total_hamiltonian(&universe)?)?.spectral_radius();
    let global_entropy =
        match entanglement_series(history.state(), universe.clock(), &Cut::ClockVsRest)? {
            EntanglementSeries::Global(s) => s,
            EntanglementSeries::PerReading(_) => unreachable!("clock/rest cut is global"),
        };

    let mut summary = BTreeMap::new();
    summary.insert("residual".into(), history.residual());
    summary.insert("residual_relative".into(), history.residual() / radius);
    summary.insert("spectral_radius".into(), radius);
    summary.insert("kernel_dim".into(), kernel.len() as f64);
    summary.insert("kernel_projection_weight".into(), projection_weight);
    summary.insert("complementarity_mean".into(), mean);
    summary.insert("complementarity_variance".into(), variance);
    summary.insert("clock_rest_entropy".into(), global_entropy);

    let rows = trajectory
        .branches()
        .iter()
        .zip(&emergent)
        .enumerate()
        .map(|(k, (branch, fid))| SeriesRow {
            reading_index: k,
            reading_value: branch.reading,
            values: vec![Some(branch.weight), *fid],
        })
        .collect();
    let series = SeriesTable {
        columns: vec!["branch_weight".into(), "emergent_fidelity".into()],
        rows,
    };

    Ok(PointOutcome { summary, series: Some(series) })
}
