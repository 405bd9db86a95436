//! Finite cyclic clock models.
//!
//! An exact conjugate pair `[H_C, P_C] = i` cannot exist in finite dimension
//! (the trace of a commutator vanishes), so the clock realizes the pair
//! approximately: an equally spaced energy ladder together with its discrete
//! Fourier transform as the time basis. How close a given state comes to the
//! ideal pair is quantified by [`commutator_defect`] rather than assumed.
//!
//! Readings span one full period `2*pi/spacing`; advancing by one reading
//! step cycles the time basis, which is the operational meaning of a tick.
//!
//! One labeling subtlety is forced by Ehrenfest's theorem: under
//! `exp(-i H_C t)` the expectation of any operator `P` with `[H_C, P] = +i`
//! *decreases* at unit rate. The basis labels are chosen so states advance
//! `|t_k> -> |t_{k+1}>`, and the time operator therefore carries the
//! mirrored eigenvalue assignment (`|t_k>` has reading `p_{(N-k) mod N}`);
//! that is the unique choice realizing `<[H_C, P_C]> ~ +i` on well-centered
//! wavepackets while keeping the tick direction forward. The eigenvalue set
//! of `P_C` is exactly the reading set either way.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::hilbert::{C64, CompositeSpace, HermitianOperator, PureState};

/// Clock with `dim` equally spaced energy levels `{0, w, .., (dim-1) w}` and
/// the Fourier-conjugate time basis `|t_k>`, eigenstates of the time operator
/// with readings `p_k = 2 pi k / (dim * w)`.
#[derive(Clone, Debug)]
pub struct ClockModel {
    dim: usize,
    spacing: f64,
    space: CompositeSpace,
    h_c: HermitianOperator,
    p_c: HermitianOperator,
    /// Columns are the time states `|t_k>` in the energy basis.
    time_basis: DMatrix<C64>,
    readings: Vec<f64>,
}

impl ClockModel {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Single-factor space of the clock alone.
    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn hamiltonian(&self) -> &HermitianOperator {
        &self.h_c
    }

    pub fn time_operator(&self) -> &HermitianOperator {
        &self.p_c
    }

    pub fn time_basis(&self) -> &DMatrix<C64> {
        &self.time_basis
    }

    /// Ordered readings `p_0 < .. < p_{dim-1}`, spanning `[0, 2 pi / w)`.
    pub fn readings(&self) -> &[f64] {
        &self.readings
    }

    /// Full period `2 pi / w`: evolution by this time is the identity up to
    /// global phase.
    pub fn period(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.spacing
    }

    /// Gap between consecutive readings.
    pub fn reading_step(&self) -> f64 {
        self.period() / self.dim as f64
    }

    /// Clock with the time-basis labels cyclically shifted by `shift`;
    /// readings are untouched. Test support for relabeling covariance.
    #[cfg(test)]
    pub(crate) fn relabeled(&self, shift: usize) -> ClockModel {
        let n = self.dim;
        let mut basis = self.time_basis.clone();
        for k in 0..n {
            basis.set_column(k, &self.time_basis.column((k + shift) % n));
        }
        ClockModel { time_basis: basis, ..self.clone() }
    }

    /// Time state `|t_k>` as a standalone clock-local state.
    pub fn time_state(&self, k: usize) -> Result<PureState> {
        if k >= self.dim {
            return Err(Error::InvalidArgument(format!(
                "time index {k} out of range {}",
                self.dim
            )));
        }
        let column = DVector::from_column_slice(self.time_basis.column(k).as_slice());
        PureState::new(self.space.clone(), column)
    }
}

/// Builds the clock model for `dim_c` levels with energy spacing `spacing`.
pub fn build_clock(dim_c: usize, spacing: f64) -> Result<ClockModel> {
    if dim_c < 2 {
        return Err(Error::ClockTooSmall(dim_c));
    }
    if !spacing.is_finite() || spacing <= 0.0 {
        return Err(Error::InvalidArgument(format!("spacing {spacing} must be positive")));
    }
    let space = CompositeSpace::single(dim_c)?;
    let n = dim_c as f64;

    let energies: Vec<f64> = (0..dim_c).map(|k| k as f64 * spacing).collect();
    let h_c = HermitianOperator::diagonal(space.clone(), &energies)?;

    let readings: Vec<f64> =
        (0..dim_c).map(|k| 2.0 * std::f64::consts::PI * k as f64 / (n * spacing)).collect();

    // |t_k> = (1/sqrt N) sum_n exp(-2 pi i n k / N) |n>, so that
    // exp(-i H_C p_1) |t_k> = |t_{k+1 mod N}>
    let norm = 1.0 / n.sqrt();
    let time_basis = DMatrix::from_fn(dim_c, dim_c, |row, col| {
        let phase = -2.0 * std::f64::consts::PI * (row as f64) * (col as f64) / n;
        Complex::from_polar(norm, phase)
    });

    // mirrored assignment: |t_k> carries reading p_{(N-k) mod N}
    let p_diag = DMatrix::from_diagonal(&DVector::from_iterator(
        dim_c,
        (0..dim_c).map(|k| C64::new(readings[(dim_c - k) % dim_c], 0.0)),
    ));
    let p_matrix = &time_basis * p_diag * time_basis.adjoint();
    let p_c = HermitianOperator::hermitized(space.clone(), p_matrix)?;

    Ok(ClockModel { dim: dim_c, spacing, space, h_c, p_c, time_basis, readings })
}

/// Deviation `|<s|[H_C, P_C]|s> - i|` of the measured commutator from the
/// ideal conjugate-pair value on a normalized clock-local state.
pub fn commutator_defect(clock: &ClockModel, s: &PureState) -> Result<f64> {
    if s.space() != clock.space() {
        return Err(Error::ShapeMismatch("state is not clock-local".into()));
    }
    let hs = clock.h_c.apply(s)?;
    let ps = clock.p_c.apply(s)?;
    // <s|HP|s> = (H|s>)† (P|s>) and <s|PH|s> = (P|s>)† (H|s>)
    let hp = hs.dotc(&ps);
    let ph = ps.dotc(&hs);
    let commutator = hp - ph;
    Ok((commutator - C64::new(0.0, 1.0)).norm())
}

/// Normalized state with a Gaussian amplitude envelope over the energy basis:
/// `|a_n|` proportional to `exp(-(n - center)^2 / (4 width^2))`, so the level
/// populations have standard deviation `width`. Signs alternate as `(-1)^n`,
/// which parks the packet's reading at half period; with a real envelope the
/// reading would sit at the window edge, where the wrap-around swamps the
/// conjugate-pair relation.
pub fn gaussian_clock_state(clock: &ClockModel, center: f64, width: f64) -> Result<PureState> {
    if !width.is_finite() || width <= 0.0 {
        return Err(Error::InvalidArgument(format!("width {width} must be positive")));
    }
    let amps = DVector::from_iterator(
        clock.dim,
        (0..clock.dim).map(|n| {
            let d = n as f64 - center;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            C64::new(sign * (-d * d / (4.0 * width * width)).exp(), 0.0)
        }),
    );
    if amps.norm() <= 0.0 {
        return Err(Error::DegenerateEnvelope);
    }
    PureState::normalized(clock.space.clone(), amps)
}
