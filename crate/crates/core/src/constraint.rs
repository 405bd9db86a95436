//! Total Hamiltonians and their zero-energy sector.
//!
//! A universe is a clock factor tensored with a rest space, governed by
//! `H = H_C (x) 1 + 1 (x) H_R + g H_I`. Physical states are built two
//! independent ways: analytically, as history states whose branches are the
//! seed evolved to each clock reading, and numerically, as the kernel of the
//! assembled total Hamiltonian. The two constructions cross-validate each
//! other; neither is trusted alone.
//!
//! Energy matching is a choice, not an accident: [`matched_rest_hamiltonian`]
//! mirrors clock levels into the rest spectrum so that exact zero-energy
//! combinations exist. Unmatched rest Hamiltonians are permitted and simply
//! produce nonzero reported residuals.

use nalgebra::{DMatrix, DVector};

use crate::clock::ClockModel;
use crate::error::{Error, Result};
use crate::hilbert::{kernel, C64, CompositeSpace, HermitianOperator, Propagator, PureState};

/// Interaction content of a universe.
#[derive(Clone, Debug)]
enum Interaction {
    None,
    /// Arbitrary Hermitian operator on the full space.
    Full(HermitianOperator),
    /// `sum_k |t_k><t_k| (x) V_k`: one rest-side term per clock reading.
    /// Keeps the per-reading decomposition available for conditional
    /// branch evolution.
    ClockDiagonal(Vec<HermitianOperator>),
}

/// Clock model plus rest Hamiltonian plus interaction; the builder of the
/// total constraint operator. The full space is always clock factor first,
/// then the rest factors.
#[derive(Clone, Debug)]
pub struct UniverseSpec {
    clock: ClockModel,
    rest_space: CompositeSpace,
    full_space: CompositeSpace,
    h_r: HermitianOperator,
    interaction: Interaction,
    g: f64,
}

impl UniverseSpec {
    /// Universe in the ideal-clock limit: no interaction term at all.
    pub fn non_interacting(
        clock: ClockModel,
        rest_space: CompositeSpace,
        h_r: HermitianOperator,
    ) -> Result<Self> {
        Self::build(clock, rest_space, h_r, Interaction::None, 0.0)
    }

    /// Universe with an arbitrary interaction operator on the full space.
    pub fn with_interaction(
        clock: ClockModel,
        rest_space: CompositeSpace,
        h_r: HermitianOperator,
        h_i: HermitianOperator,
        g: f64,
    ) -> Result<Self> {
        Self::build(clock, rest_space, h_r, Interaction::Full(h_i), g)
    }

    /// Universe whose interaction is diagonal in the clock time basis:
    /// `H_I = sum_k |t_k><t_k| (x) terms[k]`. This is the form every shipped
    /// experiment uses; it admits an exact conditional branch evolution.
    pub fn with_clock_diagonal_interaction(
        clock: ClockModel,
        rest_space: CompositeSpace,
        h_r: HermitianOperator,
        terms: Vec<HermitianOperator>,
        g: f64,
    ) -> Result<Self> {
        if terms.len() != clock.dim() {
            return Err(Error::IncompatibleSpec(format!(
                "{} interaction terms for a clock of dimension {}",
                terms.len(),
                clock.dim()
            )));
        }
        for term in &terms {
            if term.space() != &rest_space {
                return Err(Error::IncompatibleSpec(
                    "interaction term not on the rest space".into(),
                ));
            }
        }
        Self::build(clock, rest_space, h_r, Interaction::ClockDiagonal(terms), g)
    }

    fn build(
        clock: ClockModel,
        rest_space: CompositeSpace,
        h_r: HermitianOperator,
        interaction: Interaction,
        g: f64,
    ) -> Result<Self> {
        if h_r.space() != &rest_space {
            return Err(Error::IncompatibleSpec(
                "rest Hamiltonian not on the rest space".into(),
            ));
        }
        if !g.is_finite() || g < 0.0 {
            return Err(Error::IncompatibleSpec(format!("coupling {g} must be finite and >= 0")));
        }
        let full_space = clock.space().tensor(&rest_space)?;
        if let Interaction::Full(h_i) = &interaction {
            if h_i.space() != &full_space {
                return Err(Error::IncompatibleSpec(
                    "interaction operator not on the full space".into(),
                ));
            }
        }
        let spec = Self { clock, rest_space, full_space, h_r, interaction, g };
        if spec.g > 0.0 && !spec.interaction_couples_clock_and_rest()? {
            return Err(Error::IncompatibleSpec(
                "coupled universe whose interaction does not link clock and rest".into(),
            ));
        }
        Ok(spec)
    }

    pub fn clock(&self) -> &ClockModel {
        &self.clock
    }

    pub fn rest_space(&self) -> &CompositeSpace {
        &self.rest_space
    }

    pub fn full_space(&self) -> &CompositeSpace {
        &self.full_space
    }

    pub fn rest_hamiltonian(&self) -> &HermitianOperator {
        &self.h_r
    }

    pub fn coupling(&self) -> f64 {
        self.g
    }

    /// Interaction operator assembled on the full space; zero when absent.
    pub fn interaction_operator(&self) -> Result<HermitianOperator> {
        match &self.interaction {
            Interaction::None => Ok(HermitianOperator::zero(self.full_space.clone())),
            Interaction::Full(h_i) => Ok(h_i.clone()),
            Interaction::ClockDiagonal(terms) => {
                let n = self.clock.dim();
                let dim_r = self.rest_space.total_dim();
                let mut matrix = DMatrix::<C64>::zeros(n * dim_r, n * dim_r);
                let basis = self.clock.time_basis();
                for (k, term) in terms.iter().enumerate() {
                    let t_k = basis.column(k);
                    for n_row in 0..n {
                        for n_col in 0..n {
                            let weight = t_k[n_row] * t_k[n_col].conj();
                            if weight.norm_sqr() == 0.0 {
                                continue;
                            }
                            for r_row in 0..dim_r {
                                for r_col in 0..dim_r {
                                    matrix[(n_row * dim_r + r_row, n_col * dim_r + r_col)] +=
                                        weight * term.matrix()[(r_row, r_col)];
                                }
                            }
                        }
                    }
                }
                HermitianOperator::hermitized(self.full_space.clone(), matrix)
            }
        }
    }

    /// Rest-side interaction at reading `k`: `(<t_k| (x) 1) H_I (|t_k> (x) 1)`.
    /// Exact for clock-diagonal interactions; the compression of a general
    /// operator otherwise.
    pub fn conditional_interaction(&self, k: usize) -> Result<HermitianOperator> {
        let dim_r = self.rest_space.total_dim();
        match &self.interaction {
            Interaction::None => Ok(HermitianOperator::zero(self.rest_space.clone())),
            Interaction::ClockDiagonal(terms) => Ok(terms[k].clone()),
            Interaction::Full(h_i) => {
                let n = self.clock.dim();
                let t_k = self.clock.time_basis().column(k);
                let mut matrix = DMatrix::<C64>::zeros(dim_r, dim_r);
                for n_row in 0..n {
                    for n_col in 0..n {
                        let weight = t_k[n_row].conj() * t_k[n_col];
                        for r_row in 0..dim_r {
                            for r_col in 0..dim_r {
                                matrix[(r_row, r_col)] += weight
                                    * h_i.matrix()[(n_row * dim_r + r_row, n_col * dim_r + r_col)];
                            }
                        }
                    }
                }
                HermitianOperator::hermitized(self.rest_space.clone(), matrix)
            }
        }
    }

    /// Clock Hamiltonian embedded on the full space plus rest Hamiltonian
    /// embedded on the full space: the interaction-free part of the total.
    pub fn bare_hamiltonian(&self) -> Result<HermitianOperator> {
        let id_r = HermitianOperator::identity(self.rest_space.clone());
        let id_c = HermitianOperator::identity(self.clock.space().clone());
        self.clock.hamiltonian().tensor(&id_r)?.add(&id_c.tensor(&self.h_r)?)
    }

    /// Whether the interaction has a genuinely bilocal component: nonzero
    /// remainder after subtracting the best clock-local + rest-local
    /// approximation. A term of the form `A (x) 1 + 1 (x) B` has none.
    fn interaction_couples_clock_and_rest(&self) -> Result<bool> {
        let h_i = self.interaction_operator()?;
        let n = self.clock.dim();
        let dim_r = self.rest_space.total_dim();
        let m = h_i.matrix();
        // partial traces over each side
        let mut clock_part = DMatrix::<C64>::zeros(n, n);
        let mut rest_part = DMatrix::<C64>::zeros(dim_r, dim_r);
        for a in 0..n {
            for b in 0..n {
                for r in 0..dim_r {
                    clock_part[(a, b)] += m[(a * dim_r + r, b * dim_r + r)];
                }
            }
        }
        for r in 0..dim_r {
            for s in 0..dim_r {
                for a in 0..n {
                    rest_part[(r, s)] += m[(a * dim_r + r, a * dim_r + s)];
                }
            }
        }
        let trace = m.trace();
        let mut bilocal_sq = 0.0_f64;
        for a in 0..n {
            for b in 0..n {
                for r in 0..dim_r {
                    for s in 0..dim_r {
                        let local = clock_part[(a, b)] * if r == s { 1.0 } else { 0.0 }
                            / dim_r as f64
                            + rest_part[(r, s)] * if a == b { 1.0 } else { 0.0 } / n as f64
                            - trace * if a == b && r == s { 1.0 } else { 0.0 }
                                / (n * dim_r) as f64;
                        bilocal_sq += (m[(a * dim_r + r, b * dim_r + s)] - local).norm_sqr();
                    }
                }
            }
        }
        let scale = h_i.max_abs_entry();
        Ok(bilocal_sq.sqrt() > 1e-12 * scale.max(f64::MIN_POSITIVE))
    }
}

/// Assembles `H = H_C (x) 1 + 1 (x) H_R + g H_I` on the full space.
pub fn total_hamiltonian(u: &UniverseSpec) -> Result<HermitianOperator> {
    let bare = u.bare_hamiltonian()?;
    if u.g == 0.0 {
        return Ok(bare);
    }
    bare.add(&u.interaction_operator()?.scale(u.g))
}

/// Diagonal rest Hamiltonian with eigenvalues `{-levels[j] * spacing}`,
/// guaranteeing zero-energy combinations with the clock ladder. Levels must
/// sit inside the clock band `0..dim_c`; outside it, period aliasing would
/// corrupt the readings. Repeated levels are allowed; they make the branch
/// decomposition of conditioned states non-unique.
pub fn matched_rest_hamiltonian(
    clock: &ClockModel,
    rest_space: &CompositeSpace,
    levels: &[usize],
) -> Result<HermitianOperator> {
    if levels.len() != rest_space.total_dim() {
        return Err(Error::IncompatibleSpec(format!(
            "{} levels for a rest space of dimension {}",
            levels.len(),
            rest_space.total_dim()
        )));
    }
    for &level in levels {
        if level >= clock.dim() {
            return Err(Error::UnresolvableEnergy {
                level: level as i64,
                band: clock.dim() - 1,
            });
        }
    }
    let entries: Vec<f64> = levels.iter().map(|&l| -(l as f64) * clock.spacing()).collect();
    HermitianOperator::diagonal(rest_space.clone(), &entries)
}

/// Largest number of rest levels sharing one clock reading class. Levels are
/// compared modulo the clock dimension, which is how the clock sees them.
pub fn aliasing_multiplicity(clock: &ClockModel, levels: &[usize]) -> usize {
    let mut counts = vec![0usize; clock.dim()];
    for &l in levels {
        counts[l % clock.dim()] += 1;
    }
    counts.into_iter().max().unwrap_or(0)
}

/// Analytic zero-energy candidate: `sum_k alpha_k |t_k> (x) U_R(p_k)|seed>`,
/// with the recorded residual measuring how far it actually is from the
/// kernel of the assembled total Hamiltonian.
#[derive(Clone, Debug)]
pub struct HistoryState {
    state: PureState,
    weights: Vec<C64>,
    seed: PureState,
    residual: f64,
}

impl HistoryState {
    pub fn state(&self) -> &PureState {
        &self.state
    }

    /// Weights normalized to unit square-sum.
    pub fn weights(&self) -> &[C64] {
        &self.weights
    }

    pub fn seed(&self) -> &PureState {
        &self.seed
    }

    /// `|| H |Psi> ||` against the total Hamiltonian, recorded at
    /// construction.
    pub fn residual(&self) -> f64 {
        self.residual
    }
}

fn assemble_history(
    u: &UniverseSpec,
    weights: &[C64],
    branches: &[DVector<C64>],
) -> Result<(PureState, Vec<C64>)> {
    let n = u.clock.dim();
    let dim_r = u.rest_space.total_dim();
    let weight_norm = weights.iter().map(|w| w.norm_sqr()).sum::<f64>().sqrt();
    if weight_norm <= 0.0 || !weight_norm.is_finite() {
        return Err(Error::EmptyHistory);
    }
    let normalized: Vec<C64> = weights.iter().map(|w| w / weight_norm).collect();
    let basis = u.clock.time_basis();
    let mut amplitudes = DVector::<C64>::zeros(n * dim_r);
    for (k, branch) in branches.iter().enumerate() {
        let alpha = normalized[k];
        if alpha.norm_sqr() == 0.0 {
            continue;
        }
        for row in 0..n {
            let factor = alpha * basis[(row, k)];
            for r in 0..dim_r {
                amplitudes[row * dim_r + r] += factor * branch[r];
            }
        }
    }
    let state = PureState::normalized(u.full_space.clone(), amplitudes)
        .map_err(|_| Error::EmptyHistory)?;
    Ok((state, normalized))
}

fn residual_of(u: &UniverseSpec, state: &PureState) -> Result<f64> {
    Ok(total_hamiltonian(u)?.apply(state)?.norm())
}

/// History state whose branches evolve freely under the rest Hamiltonian,
/// `|phi_k> = exp(-i H_R p_k)|seed>`. With matched spectra, uniform weights
/// and no coupling this lands exactly in the kernel; in every other case the
/// deviation is reported through the residual, never hidden.
pub fn build_history_state(
    u: &UniverseSpec,
    seed: &PureState,
    weights: &[C64],
) -> Result<HistoryState> {
    if seed.space() != &u.rest_space {
        return Err(Error::ShapeMismatch("seed is not a rest-space state".into()));
    }
    if weights.len() != u.clock.dim() {
        return Err(Error::IncompatibleSpec(format!(
            "{} weights for {} readings",
            weights.len(),
            u.clock.dim()
        )));
    }
    let propagator = Propagator::new(&u.h_r)?;
    let mut branches = Vec::with_capacity(u.clock.dim());
    for &p in u.clock.readings() {
        branches.push(propagator.apply(p, seed)?.amplitudes().clone());
    }
    let (state, normalized) = assemble_history(u, weights, &branches)?;
    let residual = residual_of(u, &state)?;
    Ok(HistoryState { state, weights: normalized, seed: seed.clone(), residual })
}

/// History state whose branches evolve under the piecewise-constant
/// conditional generator `H_R + g V_k` between consecutive readings, where
/// `V_k` is the rest-side interaction at the departing reading. For a
/// clock-diagonal interaction this realizes the reading-dependent dynamics
/// the interaction encodes; at zero coupling it reduces to
/// [`build_history_state`].
pub fn build_interacting_history_state(
    u: &UniverseSpec,
    seed: &PureState,
    weights: &[C64],
) -> Result<HistoryState> {
    if u.g == 0.0 {
        return build_history_state(u, seed, weights);
    }
    if seed.space() != &u.rest_space {
        return Err(Error::ShapeMismatch("seed is not a rest-space state".into()));
    }
    if weights.len() != u.clock.dim() {
        return Err(Error::IncompatibleSpec(format!(
            "{} weights for {} readings",
            weights.len(),
            u.clock.dim()
        )));
    }
    let step = u.clock.reading_step();
    let mut branch = seed.clone();
    let mut branches = vec![seed.amplitudes().clone()];
    for k in 0..u.clock.dim() - 1 {
        let generator = u.h_r.add(&u.conditional_interaction(k)?.scale(u.g))?;
        branch = Propagator::new(&generator)?.apply(step, &branch)?;
        branches.push(branch.amplitudes().clone());
    }
    let (state, normalized) = assemble_history(u, weights, &branches)?;
    let residual = residual_of(u, &state)?;
    Ok(HistoryState { state, weights: normalized, seed: seed.clone(), residual })
}

/// Numerical route to the zero-energy sector: the kernel of the assembled
/// total Hamiltonian. Independent oracle for [`build_history_state`]. An
/// empty kernel is a valid return.
pub fn physical_states(u: &UniverseSpec, tol: f64) -> Result<Vec<PureState>> {
    kernel(&total_hamiltonian(u)?, tol)
}

/// Mean and variance of the interaction-free energy `H_C (x) 1 + 1 (x) H_R`
/// in the given state. Both vanish on exact physical states of an uncoupled
/// universe; with coupling, the mean is bounded by `g ||H_I||`.
pub fn complementarity_check(u: &UniverseSpec, s: &PureState) -> Result<(f64, f64)> {
    let bare = u.bare_hamiltonian()?;
    let mean = bare.expectation(s)?;
    let second = bare.expectation_sq(s)?;
    Ok((mean, second - mean * mean))
}

/// Squared norm of the projection of `state` onto the span of an orthonormal
/// family, together with the normalized projection when it is nonzero.
pub fn projection_onto_span(
    state: &PureState,
    basis: &[PureState],
) -> Result<(f64, Option<PureState>)> {
    let mut projected = DVector::<C64>::zeros(state.amplitudes().len());
    for b in basis {
        if b.space() != state.space() {
            return Err(Error::ShapeMismatch("projection basis on a different space".into()));
        }
        let overlap = b.inner(state);
        projected += b.amplitudes() * overlap;
    }
    let norm_sq = projected.norm_squared();
    if norm_sq <= 1e-14 {
        return Ok((norm_sq, None));
    }
    let normalized = PureState::normalized(state.space().clone(), projected)?;
    Ok((norm_sq, Some(normalized)))
}
