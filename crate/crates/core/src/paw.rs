//! Conditioning on clock readings and the dynamics it recovers.
//!
//! Projecting a global state onto each clock time state (plain von Neumann
//! conditioning, no smearing) yields one rest-space branch per reading. For
//! entangled zero-energy states the branches trace out a Schrodinger
//! trajectory; for separable states every branch is the same state and no
//! evolution is recovered, which is the point of [`separability_demo`].
//!
//! Readings whose branch weight falls below [`SUPPORT_FLOOR`] are marked
//! unsupported and carried through every diagnostic as explicit gaps, never
//! interpolated: interpolation would fabricate time where the state provides
//! none.

use nalgebra::DVector;
use num_complex::Complex;

use crate::clock::ClockModel;
use crate::error::{Error, Result};
use crate::hilbert::{
    entanglement_entropy, fidelity, C64, CompositeSpace, HermitianOperator, Propagator,
    PureState,
};
use crate::par;

/// Squared branch norm below which a reading counts as unsupported.
pub const SUPPORT_FLOOR: f64 = 1e-14;

/// Conditional state at one clock reading.
#[derive(Clone, Debug)]
pub struct Branch {
    /// Clock reading `p_k`.
    pub reading: f64,
    /// Squared norm of the projection before renormalization.
    pub weight: f64,
    /// Normalized conditional state; `None` marks an unsupported reading.
    pub state: Option<PureState>,
}

/// Ordered conditional states of the rest, indexed by clock reading.
#[derive(Clone, Debug)]
pub struct Trajectory {
    rest_space: CompositeSpace,
    branches: Vec<Branch>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn rest_space(&self) -> &CompositeSpace {
        &self.rest_space
    }

    pub fn readings(&self) -> Vec<f64> {
        self.branches.iter().map(|b| b.reading).collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.branches.iter().map(|b| b.weight).collect()
    }

    /// Indices of supported readings, in reading order.
    pub fn supported(&self) -> Vec<usize> {
        (0..self.branches.len()).filter(|&k| self.branches[k].state.is_some()).collect()
    }

    /// Fewer than two supported readings: no trajectory to speak of.
    pub fn is_degenerate(&self) -> bool {
        self.supported().len() < 2
    }
}

/// Projects the global state onto every clock time state. Branch `k` is
/// `(<t_k| (x) 1)|state>` renormalized; its squared norm is the branch
/// weight. Weights sum to one by completeness of the time basis.
pub fn condition(state: &PureState, clock: &ClockModel) -> Result<Trajectory> {
    let dims = state.space().factor_dims();
    if dims.len() < 2 || dims[0] != clock.dim() {
        return Err(Error::ShapeMismatch(format!(
            "state factors {dims:?} do not start with a clock factor of dimension {}",
            clock.dim()
        )));
    }
    let rest_space = state.space().sub_space(&(1..dims.len()).collect::<Vec<_>>())?;
    let dim_r = rest_space.total_dim();
    let n = clock.dim();
    let amps = state.amplitudes();
    let basis = clock.time_basis();
    let readings = clock.readings();

    let branches: Vec<Branch> = par::map_range(n, |k| {
        let mut projected = DVector::<C64>::zeros(dim_r);
        for row in 0..n {
            let coeff = basis[(row, k)].conj();
            for r in 0..dim_r {
                projected[r] += coeff * amps[row * dim_r + r];
            }
        }
        let weight = projected.norm_squared();
        let state = if weight >= SUPPORT_FLOOR {
            PureState::normalized(rest_space.clone(), projected).ok()
        } else {
            None
        };
        Branch { reading: readings[k], weight, state }
    });

    Ok(Trajectory { rest_space, branches })
}

/// Fidelity of each branch against the first supported branch evolved
/// forward under `h_r`: entry `k` is
/// `fidelity(branch_k, exp(-i h_r (p_k - p_a)) branch_a)` for anchor `a`.
/// Unsupported readings yield `None`. Values near one mean conditioning
/// reproduces Schrodinger dynamics.
pub fn emergent_fidelity(
    trajectory: &Trajectory,
    h_r: &HermitianOperator,
) -> Result<Vec<Option<f64>>> {
    if h_r.space() != trajectory.rest_space() {
        return Err(Error::ShapeMismatch("reference Hamiltonian not on the rest space".into()));
    }
    let supported = trajectory.supported();
    let Some(&anchor) = supported.first() else {
        return Err(Error::InvalidState("no supported reading to anchor on".into()));
    };
    let anchor_branch = trajectory.branches[anchor].state.as_ref().unwrap();
    let anchor_reading = trajectory.branches[anchor].reading;
    let propagator = Propagator::new(h_r)?;

    let entries: Vec<Option<f64>> = par::map_slice(trajectory.branches(), |branch| {
        branch.state.as_ref().map(|state| {
            let reference = propagator
                .apply(branch.reading - anchor_reading, anchor_branch)
                .expect("propagator and branch share the rest space");
            fidelity(state, &reference).expect("branches share the rest space")
        })
    });
    Ok(entries)
}

/// Smallest and largest fidelity over all supported branch pairs.
pub fn pairwise_fidelity_range(trajectory: &Trajectory) -> Option<(f64, f64)> {
    let supported = trajectory.supported();
    if supported.len() < 2 {
        return None;
    }
    let range = par::map_range(supported.len(), |a| {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let state_a = trajectory.branches[supported[a]].state.as_ref().unwrap();
        for &b in &supported[a + 1..] {
            let f = fidelity(state_a, trajectory.branches[b].state.as_ref().unwrap())
                .expect("branches share the rest space");
            lo = lo.min(f);
            hi = hi.max(f);
        }
        (lo, hi)
    })
    .into_iter()
    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (a, b)| (lo.min(a), hi.max(b)));
    Some(range)
}

/// Outcome of conditioning a separable state, with an entangled
/// contrast trajectory built from the same rest seed.
#[derive(Clone, Debug)]
pub struct SeparabilityReport {
    /// Smallest pairwise branch fidelity of the product trajectory; one
    /// means the branches never change, i.e. no evolution is recovered.
    pub min_pairwise_fidelity: f64,
    pub max_pairwise_fidelity: f64,
    /// Emergent-dynamics fidelities of the product trajectory against
    /// `h_r`; near-constant branches fail to track the reference.
    pub emergent: Vec<Option<f64>>,
    pub supported_count: usize,
    /// Fewer than two supported readings.
    pub degenerate: bool,
    /// Smallest pairwise branch fidelity of the uniform entangled history
    /// built from the same seed under the same `h_r`.
    pub contrast_min_pairwise: f64,
}

/// Conditions the product `chi (x) phi` and contrasts it with the uniform
/// entangled history of the same seed: separable states recover no time.
pub fn separability_demo(
    clock: &ClockModel,
    chi: &PureState,
    phi: &PureState,
    h_r: &HermitianOperator,
) -> Result<SeparabilityReport> {
    if chi.space() != clock.space() {
        return Err(Error::ShapeMismatch("chi is not clock-local".into()));
    }
    if h_r.space() != phi.space() {
        return Err(Error::ShapeMismatch("h_r does not act on phi's space".into()));
    }
    let product = chi.tensor(phi)?;
    let trajectory = condition(&product, clock)?;
    let supported_count = trajectory.supported().len();
    let degenerate = trajectory.is_degenerate();
    let (min_pairwise, max_pairwise) =
        pairwise_fidelity_range(&trajectory).unwrap_or((1.0, 1.0));
    let emergent = if supported_count > 0 {
        emergent_fidelity(&trajectory, h_r)?
    } else {
        vec![None; clock.dim()]
    };

    // contrast: maximally entangled uniform history of the same seed
    let n = clock.dim();
    let dim_r = phi.space().total_dim();
    let propagator = Propagator::new(h_r)?;
    let basis = clock.time_basis();
    let mut amplitudes = DVector::<C64>::zeros(n * dim_r);
    let alpha = Complex::new(1.0 / (n as f64).sqrt(), 0.0);
    for k in 0..n {
        let branch = propagator.apply(clock.readings()[k], phi)?;
        for row in 0..n {
            let factor: C64 = alpha * basis[(row, k)];
            for r in 0..dim_r {
                amplitudes[row * dim_r + r] += factor * branch.amplitudes()[r];
            }
        }
    }
    let history = PureState::normalized(clock.space().tensor(phi.space())?, amplitudes)?;
    let contrast = condition(&history, clock)?;
    let (contrast_min, _) = pairwise_fidelity_range(&contrast).unwrap_or((1.0, 1.0));

    Ok(SeparabilityReport {
        min_pairwise_fidelity: min_pairwise,
        max_pairwise_fidelity: max_pairwise,
        emergent,
        supported_count,
        degenerate,
        contrast_min_pairwise: contrast_min,
    })
}

/// Where to cut for an entanglement series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cut {
    /// Clock against everything else: one global number.
    ClockVsRest,
    /// A bipartition inside the rest; indices are rest-space factors
    /// (0 is the first factor after the clock).
    WithinRest(Vec<usize>),
}

/// Entanglement entropies across the requested cut.
#[derive(Clone, Debug)]
pub enum EntanglementSeries {
    /// Entropy of the global state across clock/rest.
    Global(f64),
    /// Entropy of each conditional branch across the in-rest cut,
    /// `None` at unsupported readings.
    PerReading(Vec<Option<f64>>),
}

/// For the clock/rest cut: the entropy of the state itself. For a cut inside
/// the rest: the entropy of every conditional branch, indexed by reading.
pub fn entanglement_series(
    state: &PureState,
    clock: &ClockModel,
    cut: &Cut,
) -> Result<EntanglementSeries> {
    match cut {
        Cut::ClockVsRest => Ok(EntanglementSeries::Global(entanglement_entropy(state, &[0])?)),
        Cut::WithinRest(left) => {
            let trajectory = condition(state, clock)?;
            let n_rest_factors = trajectory.rest_space().n_factors();
            if left.is_empty() || left.len() >= n_rest_factors {
                return Err(Error::DegeneratePartition(format!(
                    "cut of {} factors over {} rest factors",
                    left.len(),
                    n_rest_factors
                )));
            }
            let entries = par::map_slice(trajectory.branches(), |branch| {
                branch.state.as_ref().map(|s| {
                    entanglement_entropy(s, left).expect("cut validated against the rest space")
                })
            });
            Ok(EntanglementSeries::PerReading(entries))
        }
    }
}
