//! Overlap, distance and entanglement diagnostics.

use super::{reduced_density, DensityOperator, HermitianOperator, PureState};
use crate::error::{Error, Result};

/// `|<a|b>|^2`. Bitwise-identical inputs short-circuit to exactly 1, so
/// comparing a state against itself never picks up rounding noise.
pub fn fidelity(a: &PureState, b: &PureState) -> Result<f64> {
    if a.space() != b.space() {
        return Err(Error::ShapeMismatch("fidelity across different spaces".into()));
    }
    if a.amplitudes() == b.amplitudes() {
        return Ok(1.0);
    }
    Ok(a.inner(b).norm_sqr())
}

/// Von Neumann entropy `-tr(rho ln rho)` in natural log. Eigenvalues within
/// the density floor of zero contribute nothing.
pub fn von_neumann_entropy(rho: &DensityOperator) -> Result<f64> {
    let entropy = rho
        .eigenvalues()?
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.ln())
        .sum();
    Ok(entropy)
}

/// Entanglement entropy of a pure state across the bipartition whose left
/// side is the given factor set (natural log). Either side of the cut gives
/// the same value; the smaller side is reduced.
pub fn entanglement_entropy(s: &PureState, left: &[usize]) -> Result<f64> {
    let space = s.space();
    let dims = space.factor_dims();
    let left_dim: usize = left.iter().map(|&f| dims[f]).product();
    let right: Vec<usize> = (0..space.n_factors()).filter(|f| !left.contains(f)).collect();
    let right_dim: usize = right.iter().map(|&f| dims[f]).product();
    let keep = if left_dim <= right_dim { left } else { &right[..] };
    let rho = reduced_density(s, keep)?;
    von_neumann_entropy(&rho)
}

/// Trace distance: half the sum of absolute eigenvalues of `a - b`.
pub fn trace_distance(a: &DensityOperator, b: &DensityOperator) -> Result<f64> {
    if a.space() != b.space() {
        return Err(Error::ShapeMismatch("trace distance across different spaces".into()));
    }
    let diff = a.matrix() - b.matrix();
    let herm = HermitianOperator::hermitized(a.space().clone(), diff)?;
    let spec = super::spectrum(&herm)?;
    Ok(0.5 * spec.eigenvalues.iter().map(|x| x.abs()).sum::<f64>())
}
