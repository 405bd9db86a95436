//! Clock/rest size mismatch.
//!
//! The rest carries the full ladder `{0, -w, -2w, ..}` over its entire
//! dimension. When the rest outgrows the clock, the upper levels leave the
//! clock band: the intended history state is no longer annihilated by the
//! constraint, the kernel holds only the in-band part, and the best physical
//! state reproduces the intended trajectory with fidelity strictly below
//! one. The aliasing multiplicity counts how many rest levels the clock maps
//! onto the same reading class.

use std::collections::BTreeMap;

use crate::clock::build_clock;
use crate::constraint::{
    aliasing_multiplicity, build_history_state, physical_states, projection_onto_span,
    UniverseSpec,
};
use crate::error::{Error, Result};
use crate::hilbert::{
    fidelity, CompositeSpace, HermitianOperator, Propagator, PureState, KERNEL_TOL,
};
use crate::paw::{condition, emergent_fidelity};

use super::metrics::{readability, resolve_seed, supported_min};
use super::{PointOutcome, PointParams, SeriesRow, SeriesTable};

pub(super) fn run(params: &PointParams, seed: u64) -> Result<PointOutcome> {
    let uni = &params.universe;
    let clock = build_clock(uni.clock_dim, uni.spacing)?;
    let rest_space = CompositeSpace::new(&uni.rest_dims)?;
    let dim_r = rest_space.total_dim();

    // full ladder over the flattened rest basis, deliberately ignoring the
    // clock band: out-of-band levels are the pathology under study
    let energies: Vec<f64> = (0..dim_r).map(|j| -(j as f64) * uni.spacing).collect();
    let h_r = HermitianOperator::diagonal(rest_space.clone(), &energies)?;
    let universe = UniverseSpec::non_interacting(clock, rest_space.clone(), h_r.clone())?;

    let canonical = PureState::uniform(rest_space.clone());
    let rest_seed = resolve_seed(params.seed_state, canonical, &rest_space, seed)?;
    let weights = params.weights.weights(uni.clock_dim);

    let intended = build_history_state(&universe, &rest_seed, &weights)?;
    let kernel = physical_states(&universe, KERNEL_TOL)?;
    if kernel.is_empty() {
        return Err(Error::InvalidState("constraint kernel is empty".into()));
    }
    let (projection_weight, projected) = projection_onto_span(intended.state(), &kernel)?;
    let Some(physical) = projected else {
        return Err(Error::InvalidState(
            "intended history has no overlap with the constraint kernel".into(),
        ));
    };
    let residual_physical =
        crate::constraint::total_hamiltonian(&universe)?.apply(&physical)?.norm();

    let trajectory = condition(&physical, universe.clock())?;

    // fidelity against the trajectory the oversized rest was meant to have
    let propagator = Propagator::new(&h_r)?;
    let intended_fidelity: Vec<Option<f64>> = trajectory
        .branches()
        .iter()
        .map(|branch| {
            branch.state.as_ref().map(|state| {
                let reference = propagator
                    .apply(branch.reading, &rest_seed)
                    .expect("propagator on the rest space");
                fidelity(state, &reference).expect("same rest space")
            })
        })
        .collect();
    let anchored = emergent_fidelity(&trajectory, &h_r)?;

    let levels: Vec<usize> = (0..dim_r).collect();
    let multiplicity = aliasing_multiplicity(universe.clock(), &levels);

    let probe_factors: Vec<usize> = if rest_space.n_factors() > 1 { vec![0] } else { vec![] };
    let (probe_readability, _) = readability(
        &trajectory,
        if probe_factors.is_empty() { None } else { Some(&probe_factors) },
    )?;

    let mut summary = BTreeMap::new();
    summary.insert("aliasing_multiplicity".into(), multiplicity as f64);
    summary.insert("kernel_dim".into(), kernel.len() as f64);
    summary.insert("projection_weight".into(), projection_weight);
    summary.insert("residual_intended".into(), intended.residual());
    summary.insert("residual_physical".into(), residual_physical);
    summary.insert("probe_readability".into(), probe_readability);
    if let Some(min_fid) = supported_min(&intended_fidelity) {
        summary.insert("min_emergent_fidelity".into(), min_fid);
    }
    if let Some(min_fid) = supported_min(&anchored) {
        summary.insert("min_anchored_fidelity".into(), min_fid);
    }

    let rows = trajectory
        .branches()
        .iter()
        .enumerate()
        .map(|(k, branch)| SeriesRow {
            reading_index: k,
            reading_value: branch.reading,
            values: vec![Some(branch.weight), intended_fidelity[k], anchored[k]],
        })
        .collect();
    let series = SeriesTable {
        columns: vec![
            "branch_weight".into(),
            "intended_fidelity".into(),
            "anchored_fidelity".into(),
        ],
        rows,
    };

    Ok(PointOutcome { summary, series: Some(series) })
}
