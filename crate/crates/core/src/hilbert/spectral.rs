//! Spectral decomposition, kernel extraction and unitary evolution.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex;

use super::{C64, CompositeSpace, HermitianOperator, PureState};
use crate::error::{Error, Result};

const EIGEN_MAX_ITER: usize = 4096;

/// Eigendecomposition of a Hermitian operator: ascending real eigenvalues and
/// the matching orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<C64>,
}

impl Spectrum {
    /// Largest eigenvalue magnitude.
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }
}

/// Diagonalizes `h`, sorting eigenvalues ascending. Surfaces eigensolver
/// non-convergence as a spectral failure.
pub fn spectrum(h: &HermitianOperator) -> Result<Spectrum> {
    let dim = h.space().total_dim();
    let eig = SymmetricEigen::try_new(h.matrix().clone(), f64::EPSILON, EIGEN_MAX_ITER)
        .ok_or(Error::SpectralFailure { dim })?;
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut eigenvectors = DMatrix::<C64>::zeros(dim, dim);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok(Spectrum { eigenvalues, eigenvectors })
}

/// Orthonormal basis of the eigenspace with |eigenvalue| <= tol * spectral
/// radius. An empty return is a valid result, not an error.
pub fn kernel(h: &HermitianOperator, tol: f64) -> Result<Vec<PureState>> {
    if tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("kernel tolerance {tol} must be positive")));
    }
    let spec = spectrum(h)?;
    let threshold = tol * spec.spectral_radius();
    let mut states = Vec::new();
    for (i, &lambda) in spec.eigenvalues.iter().enumerate() {
        if lambda.abs() <= threshold {
            let column = DVector::from_column_slice(spec.eigenvectors.column(i).as_slice());
            states.push(PureState::normalized(h.space().clone(), column)?);
        }
    }
    Ok(states)
}

/// Evolution operator `exp(-iHt)` realized through the spectral decomposition
/// of `H` (hbar = 1). Build once, apply for many times `t`.
#[derive(Clone, Debug)]
pub struct Propagator {
    space: CompositeSpace,
    spectrum: Spectrum,
}

impl Propagator {
    pub fn new(h: &HermitianOperator) -> Result<Self> {
        Ok(Self { space: h.space().clone(), spectrum: spectrum(h)? })
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    /// `exp(-iHt)|s>`; norm is preserved to machine precision.
    pub fn apply(&self, t: f64, s: &PureState) -> Result<PureState> {
        if self.space != *s.space() {
            return Err(Error::ShapeMismatch("propagator applied across different spaces".into()));
        }
        let v = &self.spectrum.eigenvectors;
        // coefficients in the eigenbasis, phase each, transform back
        let mut coeffs = v.adjoint() * s.amplitudes();
        for (c, &lambda) in coeffs.iter_mut().zip(&self.spectrum.eigenvalues) {
            *c *= Complex::from_polar(1.0, -lambda * t);
        }
        let amplitudes = v * coeffs;
        PureState::new(self.space.clone(), amplitudes)
    }
}

/// One-shot `exp(-iHt)|s>`. Use [`Propagator`] directly when evolving many
/// times under the same Hamiltonian.
pub fn evolve(h: &HermitianOperator, t: f64, s: &PureState) -> Result<PureState> {
    Propagator::new(h)?.apply(t, s)
}
