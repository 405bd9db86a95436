//! Diagnostics and small builders shared across presets.

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::clock::ClockModel;
use crate::constraint::matched_rest_hamiltonian;
use crate::error::{Error, Result};
use crate::hilbert::{
    reduced_density, trace_distance, von_neumann_entropy, C64, CompositeSpace, DensityOperator,
    HermitianOperator, PureState,
};
use crate::paw::Trajectory;
use crate::random::{random_state, rng};

use super::SeedSpec;

/// RNG stream for randomized seed states.
pub(super) const STREAM_SEED_STATE: u64 = 1;
/// RNG stream for repartition unitaries.
pub(super) const STREAM_REPARTITION: u64 = 2;

/// How strongly a subsystem's conditional state varies with the clock
/// reading: the branch-weight-weighted mean trace distance of the
/// subsystem's reduced state from its time average. Returns the score and
/// the per-reading distances (`None` at unsupported readings). `keep` names
/// rest-space factors; `None` measures the whole rest.
pub fn readability(
    trajectory: &Trajectory,
    keep: Option<&[usize]>,
) -> Result<(f64, Vec<Option<f64>>)> {
    let supported = trajectory.supported();
    if supported.is_empty() {
        return Err(Error::InvalidState("no supported reading".into()));
    }
    let total_weight: f64 = supported.iter().map(|&k| trajectory.branches()[k].weight).sum();
    let mut reduced: Vec<(usize, f64, DensityOperator)> = Vec::with_capacity(supported.len());
    for &k in &supported {
        let branch = &trajectory.branches()[k];
        let state = branch.state.as_ref().unwrap();
        let rho = match keep {
            Some(factors) if factors.len() < trajectory.rest_space().n_factors() => {
                reduced_density(state, factors)?
            }
            _ => DensityOperator::from_pure(state),
        };
        reduced.push((k, branch.weight / total_weight, rho));
    }

    let dim = reduced[0].2.space().total_dim();
    let mut average = DMatrix::<C64>::zeros(dim, dim);
    for (_, w, rho) in &reduced {
        average += rho.matrix() * Complex::new(*w, 0.0);
    }
    let average = DensityOperator::new(reduced[0].2.space().clone(), average)?;

    let mut per_reading = vec![None; trajectory.len()];
    let mut score = 0.0;
    for (k, w, rho) in &reduced {
        let d = trace_distance(rho, &average)?;
        per_reading[*k] = Some(d);
        score += w * d;
    }
    Ok((score, per_reading))
}

/// Mutual information `S(A) + S(B) - S(AB)` between two disjoint factor
/// sets of the global state (natural log).
pub fn mutual_information(state: &PureState, left: &[usize], right: &[usize]) -> Result<f64> {
    if left.iter().any(|f| right.contains(f)) {
        return Err(Error::InvalidArgument("overlapping factor sets".into()));
    }
    let mut joint: Vec<usize> = left.iter().chain(right).copied().collect();
    joint.sort_unstable();
    let s_left = von_neumann_entropy(&reduced_density(state, left)?)?;
    let s_right = von_neumann_entropy(&reduced_density(state, right)?)?;
    let s_joint = von_neumann_entropy(&reduced_density(state, &joint)?)?;
    Ok(s_left + s_right - s_joint)
}

/// Pauli X on a qubit factor.
pub(super) fn pauli_x() -> HermitianOperator {
    let space = CompositeSpace::single(2).expect("qubit space");
    let m = DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex::new(0.0, 0.0),
            Complex::new(1.0, 0.0),
            Complex::new(1.0, 0.0),
            Complex::new(0.0, 0.0),
        ],
    );
    HermitianOperator::new(space, m).expect("pauli x is Hermitian")
}

/// Embeds a single-factor operator at position `factor` of a composite
/// space, identity elsewhere.
pub(super) fn embed_on_factor(
    space: &CompositeSpace,
    factor: usize,
    op: &HermitianOperator,
) -> Result<HermitianOperator> {
    let dims = space.factor_dims();
    if factor >= dims.len() {
        return Err(Error::InvalidArgument(format!("factor {factor} out of range")));
    }
    if op.space().total_dim() != dims[factor] {
        return Err(Error::ShapeMismatch(format!(
            "operator of dimension {} on factor of dimension {}",
            op.space().total_dim(),
            dims[factor]
        )));
    }
    let mut result: Option<HermitianOperator> = None;
    for (i, &d) in dims.iter().enumerate() {
        let piece = if i == factor {
            op.clone()
        } else {
            HermitianOperator::identity(CompositeSpace::single(d)?)
        };
        result = Some(match result {
            None => piece,
            Some(acc) => acc.tensor(&piece)?,
        });
    }
    Ok(result.expect("space has at least one factor"))
}

/// Matched rest ladder that repeats over the last factor: the flattened
/// basis state `(.., j)` carries level `j`. Leaves every other factor free
/// of rest dynamics.
pub(super) fn ladder_on_last_factor(
    clock: &ClockModel,
    rest_space: &CompositeSpace,
) -> Result<HermitianOperator> {
    let last = *rest_space.factor_dims().last().expect("rest space has a factor");
    let levels: Vec<usize> = (0..rest_space.total_dim()).map(|flat| flat % last).collect();
    matched_rest_hamiltonian(clock, rest_space, &levels)
}

/// Resolves the configured seed state, given the preset's canonical choice.
pub(super) fn resolve_seed(
    spec: SeedSpec,
    canonical: PureState,
    rest_space: &CompositeSpace,
    seed: u64,
) -> Result<PureState> {
    match spec {
        SeedSpec::Preset => Ok(canonical),
        SeedSpec::Uniform => Ok(PureState::uniform(rest_space.clone())),
        SeedSpec::Random => {
            random_state(rest_space.clone(), &mut rng(seed, STREAM_SEED_STATE))
        }
    }
}

/// Smallest value among present entries.
pub(super) fn supported_min(entries: &[Option<f64>]) -> Option<f64> {
    entries.iter().flatten().copied().fold(None, |acc, x| {
        Some(match acc {
            None => x,
            Some(a) => a.min(x),
        })
    })
}

/// Largest entry of `g Tr_rest(H_I) / dim_rest`: how far the partial-trace
/// reading of the clock Hamiltonian drifts from the constructed one once the
/// interaction is on. Zero whenever the rest side of every interaction term
/// is traceless.
pub(super) fn clock_trace_shift(universe: &crate::constraint::UniverseSpec) -> Result<f64> {
    let g = universe.coupling();
    if g == 0.0 {
        return Ok(0.0);
    }
    let h_i = universe.interaction_operator()?;
    let n = universe.clock().dim();
    let dim_r = universe.rest_space().total_dim();
    let m = h_i.matrix();
    let mut shift = 0.0_f64;
    for a in 0..n {
        for b in 0..n {
            let mut acc = Complex::new(0.0, 0.0);
            for r in 0..dim_r {
                acc += m[(a * dim_r + r, b * dim_r + r)];
            }
            shift = shift.max((acc * g / dim_r as f64).norm());
        }
    }
    Ok(shift)
}
