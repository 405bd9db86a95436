//! Expansion-as-clock toy.
//!
//! Two small modes play the galaxies; the clock plays the expansion. Their
//! mutual coupling is modulated by the clock reading: fading with the
//! reading in the separation regime, growing in the attraction regime. In
//! both regimes each mode's conditional state varies with the reading — the
//! coupling hands the modes a record of the expansion — while the modes'
//! mutual entanglement develops a regime-dependent profile.

use std::collections::BTreeMap;

use crate::clock::build_clock;
use crate::constraint::{build_interacting_history_state, UniverseSpec};
use crate::error::{Error, Result};
use crate::hilbert::{CompositeSpace, HermitianOperator, PureState};
use crate::paw::{condition, entanglement_series, Cut, EntanglementSeries};

use super::metrics::{
    clock_trace_shift, embed_on_factor, ladder_on_last_factor, pauli_x, readability,
    resolve_seed,
};
use super::{PointOutcome, PointParams, Regime, SeriesRow, SeriesTable};

pub(super) fn run(params: &PointParams, seed: u64) -> Result<PointOutcome> {
    let uni = &params.universe;
    if uni.rest_dims != [2, 2] {
        return Err(Error::IncompatibleSpec(
            "field \"rest_dims\" must be [2, 2]: two qubit modes".into(),
        ));
    }
    let clock = build_clock(uni.clock_dim, uni.spacing)?;
    let rest_space = CompositeSpace::new(&uni.rest_dims)?;
    let h_r = ladder_on_last_factor(&clock, &rest_space)?;

    let n = clock.dim();
    let x0 = embed_on_factor(&rest_space, 0, &pauli_x())?;
    let x1 = embed_on_factor(&rest_space, 1, &pauli_x())?;
    // sigma_x (x) sigma_x between the two modes
    let coupling_op = HermitianOperator::hermitized(
        rest_space.clone(),
        x0.matrix() * x1.matrix(),
    )?;
    let terms: Vec<HermitianOperator> = (0..n)
        .map(|k| {
            let fraction = k as f64 / (n as f64 - 1.0);
            let modulation = match uni.regime {
                Regime::Separation => 1.0 - fraction,
                Regime::Attraction => fraction,
            };
            coupling_op.scale(modulation)
        })
        .collect();
    let universe = UniverseSpec::with_clock_diagonal_interaction(
        clock,
        rest_space.clone(),
        h_r,
        terms,
        uni.coupling,
    )?;

    // canonical seed: both modes at |0>, so the coupling entangles them
    // from the first windows onward
    let canonical = PureState::basis_state(rest_space.clone(), 0)?;
    let rest_seed = resolve_seed(params.seed_state, canonical, &rest_space, seed)?;
    let weights = params.weights.weights(n);

    let history = build_interacting_history_state(&universe, &rest_seed, &weights)?;
    let trajectory = condition(history.state(), universe.clock())?;

    let mode_entanglement =
        match entanglement_series(history.state(), universe.clock(), &Cut::WithinRest(vec![0]))? {
            EntanglementSeries::PerReading(entries) => entries,
            EntanglementSeries::Global(_) => unreachable!("in-rest cut is per reading"),
        };
    let global_entropy =
        match entanglement_series(history.state(), universe.clock(), &Cut::ClockVsRest)? {
            EntanglementSeries::Global(s) => s,
            EntanglementSeries::PerReading(_) => unreachable!("clock/rest cut is global"),
        };
    let (mode_readability, distances) = readability(&trajectory, Some(&[0]))?;

    let supported_entanglement: Vec<f64> =
        mode_entanglement.iter().flatten().copied().collect();
    let half = supported_entanglement.len() / 2;
    let mean = |xs: &[f64]| {
        if xs.is_empty() {
            0.0
        } else {
            xs.iter().sum::<f64>() / xs.len() as f64
        }
    };

    let mut summary = BTreeMap::new();
    summary.insert("mode_readability".into(), mode_readability);
    summary.insert("residual".into(), history.residual());
    summary.insert("clock_trace_shift".into(), clock_trace_shift(&universe)?);
    summary.insert("clock_rest_entropy".into(), global_entropy);
    summary.insert(
        "entanglement_max".into(),
        supported_entanglement.iter().copied().fold(0.0, f64::max),
    );
    summary.insert("entanglement_early_mean".into(), mean(&supported_entanglement[..half]));
    summary.insert("entanglement_late_mean".into(), mean(&supported_entanglement[half..]));

    let rows = trajectory
        .branches()
        .iter()
        .enumerate()
        .map(|(k, branch)| SeriesRow {
            reading_index: k,
            reading_value: branch.reading,
            values: vec![Some(branch.weight), mode_entanglement[k], distances[k]],
        })
        .collect();
    let series = SeriesTable {
        columns: vec![
            "branch_weight".into(),
            "mode_entanglement".into(),
            "mode_distance_from_average".into(),
        ],
        rows,
    };

    Ok(PointOutcome { summary, series: Some(series) })
}
