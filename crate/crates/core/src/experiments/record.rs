//! Record register written window by window: the arrow of time as data.
//!
//! The rest consists of `m` record qubits followed by a remainder factor
//! carrying the matched ladder. The readings are partitioned into `m`
//! windows (even split, remainder attached to the last window); while the
//! clock traverses window `j`, the interaction rotates record `j` from clear
//! to set, calibrated so the flip completes exactly on the window's last
//! reading. Flips are never undone within the period, so the expected number
//! of set records is monotone in the reading: the register realizes a
//! direction of time without any non-unitary ingredient.
//!
//! The calibrated rotation rates live inside the interaction terms, so the
//! nominal coupling 1 means "flips complete within their windows".

use std::collections::BTreeMap;

use crate::clock::build_clock;
use crate::constraint::{build_interacting_history_state, UniverseSpec};
use crate::error::{Error, Result};
use crate::hilbert::{
    entanglement_entropy, CompositeSpace, HermitianOperator, PureState,
};
use crate::paw::{condition, entanglement_series, Cut, EntanglementSeries, Trajectory};

use super::metrics::{
    clock_trace_shift, embed_on_factor, ladder_on_last_factor, pauli_x, resolve_seed,
};
use super::{PointOutcome, PointParams, SeriesRow, SeriesTable};

/// Reading window of record `j` for `n` readings split into `m` windows.
fn window_of(k: usize, n: usize, m: usize) -> usize {
    let len = n / m;
    (k / len).min(m - 1)
}

pub(super) fn run(params: &PointParams, seed: u64) -> Result<PointOutcome> {
    let uni = &params.universe;
    let m = uni.record_qubits;
    if m == 0 {
        return Err(Error::IncompatibleSpec("field \"record_qubits\" must be positive".into()));
    }
    let n = uni.clock_dim;
    if n < 2 * m {
        return Err(Error::IncompatibleSpec(format!(
            "clock of dimension {n} cannot host {m} record windows of length >= 2"
        )));
    }
    let clock = build_clock(n, uni.spacing)?;
    // rest = m record qubits, then the configured remainder factors
    let mut rest_dims = vec![2usize; m];
    rest_dims.extend_from_slice(&uni.rest_dims);
    let rest_space = CompositeSpace::new(&rest_dims)?;
    let h_r = ladder_on_last_factor(&clock, &rest_space)?;

    // steps whose departing reading lies in window j
    let mut steps_per_window = vec![0usize; m];
    for k in 0..n - 1 {
        steps_per_window[window_of(k, n, m)] += 1;
    }
    let step = clock.reading_step();
    let flips: Vec<HermitianOperator> = (0..m)
        .map(|j| embed_on_factor(&rest_space, j, &pauli_x()))
        .collect::<Result<_>>()?;
    let terms: Vec<HermitianOperator> = (0..n)
        .map(|k| {
            let j = window_of(k, n, m);
            let angle_per_step = std::f64::consts::FRAC_PI_2 / steps_per_window[j] as f64;
            flips[j].scale(angle_per_step / step)
        })
        .collect();
    let universe = UniverseSpec::with_clock_diagonal_interaction(
        clock,
        rest_space.clone(),
        h_r,
        terms,
        uni.coupling,
    )?;

    // canonical seed: all records clear, remainder uniform
    let records_clear =
        PureState::basis_state(rest_space.sub_space(&(0..m).collect::<Vec<_>>())?, 0)?;
    let tail_space = rest_space.sub_space(&(m..rest_dims.len()).collect::<Vec<_>>())?;
    let canonical = records_clear.tensor(&PureState::uniform(tail_space))?;
    let rest_seed = resolve_seed(params.seed_state, canonical, &rest_space, seed)?;
    let weights = params.weights.weights(n);

    let history = build_interacting_history_state(&universe, &rest_seed, &weights)?;
    let trajectory = condition(history.state(), universe.clock())?;

    let tail_dim: usize = uni.rest_dims.iter().product();
    let stats = register_statistics(&trajectory, m, tail_dim);

    let record_factors: Vec<usize> = (0..m).collect();
    let register_entropy: Vec<Option<f64>> = trajectory
        .branches()
        .iter()
        .map(|b| {
            b.state
                .as_ref()
                .map(|s| entanglement_entropy(s, &record_factors).expect("valid record cut"))
        })
        .collect();

    let global_entropy =
        match entanglement_series(history.state(), universe.clock(), &Cut::ClockVsRest)? {
            EntanglementSeries::Global(s) => s,
            EntanglementSeries::PerReading(_) => unreachable!("clock/rest cut is global"),
        };

    let counts: Vec<f64> = stats.iter().map(|s| s.expected_set).collect();
    let monotonicity_defect = counts
        .windows(2)
        .map(|w| (w[0] - w[1]).max(0.0))
        .fold(0.0_f64, f64::max);

    let mut summary = BTreeMap::new();
    summary.insert("records_final".into(), *counts.last().unwrap());
    summary.insert("monotonicity_defect".into(), monotonicity_defect);
    summary.insert("residual".into(), history.residual());
    summary.insert("clock_trace_shift".into(), clock_trace_shift(&universe)?);
    summary.insert("clock_rest_entropy".into(), global_entropy);
    summary.insert(
        "max_register_shannon_entropy".into(),
        stats.iter().map(|s| s.shannon).fold(0.0, f64::max),
    );

    let rows = trajectory
        .branches()
        .iter()
        .enumerate()
        .map(|(k, branch)| SeriesRow {
            reading_index: k,
            reading_value: branch.reading,
            values: vec![
                Some(branch.weight),
                Some(stats[k].expected_set),
                Some(stats[k].shannon),
                register_entropy[k],
            ],
        })
        .collect();
    let series = SeriesTable {
        columns: vec![
            "branch_weight".into(),
            "records_set".into(),
            "register_shannon_entropy".into(),
            "register_tail_entanglement".into(),
        ],
        rows,
    };

    Ok(PointOutcome { summary, series: Some(series) })
}

struct RegisterStats {
    /// Expected number of set records.
    expected_set: f64,
    /// Shannon entropy of the register bit-string distribution.
    shannon: f64,
}

fn register_statistics(trajectory: &Trajectory, m: usize, tail_dim: usize) -> Vec<RegisterStats> {
    trajectory
        .branches()
        .iter()
        .map(|branch| match &branch.state {
            None => RegisterStats { expected_set: 0.0, shannon: 0.0 },
            Some(state) => {
                let mut distribution = vec![0.0_f64; 1 << m];
                for (flat, amp) in state.amplitudes().iter().enumerate() {
                    distribution[flat / tail_dim] += amp.norm_sqr();
                }
                let expected_set = distribution
                    .iter()
                    .enumerate()
                    .map(|(bits, p)| p * bits.count_ones() as f64)
                    .sum();
                let shannon =
                    distribution.iter().filter(|&&p| p > 0.0).map(|p| -p * p.ln()).sum();
                RegisterStats { expected_set, shannon }
            }
        })
        .collect()
}
