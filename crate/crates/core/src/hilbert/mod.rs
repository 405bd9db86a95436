//! Dense complex linear algebra over small composite Hilbert spaces.
//!
//! Storage is dense throughout: at desk scale (total dimension capped at
//! [`max_total_dim`], default 4096) exact dense kernels beat sparse
//! bookkeeping. All values are immutable after construction and safe to
//! share across threads.

mod measures;
mod spectral;

pub use measures::{entanglement_entropy, fidelity, trace_distance, von_neumann_entropy};
pub use spectral::{evolve, kernel, spectrum, Propagator, Spectrum};

use std::sync::atomic::{AtomicUsize, Ordering};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// Norm deviation accepted for a unit vector.
pub const NORM_TOL: f64 = 1e-12;
/// Relative entry deviation accepted between an operator and its adjoint.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Most negative eigenvalue accepted for a density operator.
pub const DENSITY_EIGEN_FLOOR: f64 = -1e-10;
/// Default relative tolerance for kernel extraction.
pub const KERNEL_TOL: f64 = 1e-10;

static MAX_TOTAL_DIM: AtomicUsize = AtomicUsize::new(4096);

/// Current cap on the total dimension of any constructed space.
pub fn max_total_dim() -> usize {
    MAX_TOTAL_DIM.load(Ordering::Relaxed)
}

/// Reconfigure the total-dimension cap for this process.
pub fn set_max_total_dim(cap: usize) {
    MAX_TOTAL_DIM.store(cap, Ordering::Relaxed);
}

/// Ordered list of tensor-factor dimensions; the shape of a composite
/// Hilbert space. Factor indices are zero-based and positional.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositeSpace {
    factor_dims: Vec<usize>,
}

impl CompositeSpace {
    pub fn new(factor_dims: &[usize]) -> Result<Self> {
        if factor_dims.is_empty() {
            return Err(Error::InvalidArgument("space needs at least one factor".into()));
        }
        let mut total: usize = 1;
        for &d in factor_dims {
            if d < 2 {
                return Err(Error::InvalidFactorDim(d));
            }
            total = total.checked_mul(d).ok_or(Error::SpaceTooLarge {
                requested: usize::MAX,
                max: max_total_dim(),
            })?;
        }
        let cap = max_total_dim();
        if total > cap {
            return Err(Error::SpaceTooLarge { requested: total, max: cap });
        }
        Ok(Self { factor_dims: factor_dims.to_vec() })
    }

    /// Space with a single factor.
    pub fn single(dim: usize) -> Result<Self> {
        Self::new(&[dim])
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn n_factors(&self) -> usize {
        self.factor_dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.factor_dims.iter().product()
    }

    /// Concatenation in factor order; errors with "space too large" past the cap.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let mut dims = self.factor_dims.clone();
        dims.extend_from_slice(&other.factor_dims);
        Self::new(&dims)
    }

    /// Sub-space spanned by the kept factors, in their original order.
    pub fn sub_space(&self, keep: &[usize]) -> Result<Self> {
        let dims: Vec<usize> = keep.iter().map(|&f| self.factor_dims[f]).collect();
        Self::new(&dims)
    }

    /// Row-major strides: the linear index of a multi-index `(i_0, .., i_{F-1})`
    /// is `sum_f i_f * stride_f`.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1usize; self.factor_dims.len()];
        for f in (0..self.factor_dims.len().saturating_sub(1)).rev() {
            strides[f] = strides[f + 1] * self.factor_dims[f + 1];
        }
        strides
    }

    /// Validates a partition given as the set of kept factor indices: indices
    /// must be in range, strictly increasing, nonempty and proper.
    fn check_partition(&self, keep: &[usize]) -> Result<()> {
        if keep.is_empty() || keep.len() >= self.n_factors() {
            return Err(Error::DegeneratePartition(format!(
                "kept set of size {} over {} factors",
                keep.len(),
                self.n_factors()
            )));
        }
        for w in keep.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::InvalidArgument(
                    "factor indices must be strictly increasing".into(),
                ));
            }
        }
        if *keep.last().unwrap() >= self.n_factors() {
            return Err(Error::InvalidArgument(format!(
                "factor index {} out of range ({} factors)",
                keep.last().unwrap(),
                self.n_factors()
            )));
        }
        Ok(())
    }

    /// Linear offsets of every multi-index over `keep` (all other factors at 0)
    /// and of every multi-index over the complement. Together they enumerate
    /// the full space: `index = keep_offset + complement_offset`.
    fn partition_offsets(&self, keep: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let strides = self.strides();
        let complement: Vec<usize> =
            (0..self.n_factors()).filter(|f| !keep.contains(f)).collect();
        (self.offsets_for(keep, &strides), self.offsets_for(&complement, &strides))
    }

    fn offsets_for(&self, factors: &[usize], strides: &[usize]) -> Vec<usize> {
        let dim: usize = factors.iter().map(|&f| self.factor_dims[f]).product();
        let mut offsets = Vec::with_capacity(dim);
        let mut idx = vec![0usize; factors.len()];
        loop {
            let off: usize =
                factors.iter().zip(&idx).map(|(&f, &i)| i * strides[f]).sum();
            offsets.push(off);
            // odometer increment, last factor fastest
            let mut pos = factors.len();
            loop {
                if pos == 0 {
                    return offsets;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < self.factor_dims[factors[pos]] {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }
}

/// Normalized complex amplitude vector over a [`CompositeSpace`].
#[derive(Clone, Debug)]
pub struct PureState {
    space: CompositeSpace,
    amplitudes: DVector<C64>,
}

impl PureState {
    /// Wraps an amplitude vector that is already normalized within 1e-12.
    pub fn new(space: CompositeSpace, amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.len() != space.total_dim() {
            return Err(Error::ShapeMismatch(format!(
                "state of length {} over space of dimension {}",
                amplitudes.len(),
                space.total_dim()
            )));
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("norm {norm} deviates from 1")));
        }
        Ok(Self { space, amplitudes })
    }

    /// Rescales to unit norm; errors on a numerically zero vector.
    pub fn normalized(space: CompositeSpace, amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.len() != space.total_dim() {
            return Err(Error::ShapeMismatch(format!(
                "state of length {} over space of dimension {}",
                amplitudes.len(),
                space.total_dim()
            )));
        }
        let norm = amplitudes.norm();
        if norm <= 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("zero or non-finite amplitude vector".into()));
        }
        Ok(Self { space, amplitudes: amplitudes / C64::new(norm, 0.0) })
    }

    /// Computational basis state `|index>`.
    pub fn basis_state(space: CompositeSpace, index: usize) -> Result<Self> {
        if index >= space.total_dim() {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range {}",
                space.total_dim()
            )));
        }
        let mut amplitudes = DVector::zeros(space.total_dim());
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(Self { space, amplitudes })
    }

    /// Uniform superposition of all basis states.
    pub fn uniform(space: CompositeSpace) -> Self {
        let dim = space.total_dim();
        let amp = C64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Self { space, amplitudes: DVector::from_element(dim, amp) }
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// Kronecker composition in factor order.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let space = self.space.tensor(&other.space)?;
        let amplitudes = self.amplitudes.kronecker(&other.amplitudes);
        Ok(Self { space, amplitudes: DVector::from_column_slice(amplitudes.as_slice()) })
    }
}

/// Hermitian matrix over a [`CompositeSpace`].
#[derive(Clone, Debug)]
pub struct HermitianOperator {
    space: CompositeSpace,
    matrix: DMatrix<C64>,
}

impl HermitianOperator {
    /// Wraps a matrix already Hermitian within the relative tolerance.
    pub fn new(space: CompositeSpace, matrix: DMatrix<C64>) -> Result<Self> {
        let dim = space.total_dim();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} matrix over space of dimension {dim}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let scale = matrix.iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
        let dev = hermiticity_deviation(&matrix);
        if dev > HERMITICITY_TOL * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::InvalidOperator(format!(
                "deviation from adjoint {dev:.3e} exceeds tolerance at scale {scale:.3e}"
            )));
        }
        Ok(Self { space, matrix })
    }

    /// Projects onto the Hermitian part `(M + M†)/2` before wrapping. For
    /// matrices assembled from products that drift at machine precision.
    pub fn hermitized(space: CompositeSpace, matrix: DMatrix<C64>) -> Result<Self> {
        let sym = (&matrix + matrix.adjoint()) * C64::new(0.5, 0.0);
        Self::new(space, sym)
    }

    pub fn identity(space: CompositeSpace) -> Self {
        let dim = space.total_dim();
        Self { space, matrix: DMatrix::identity(dim, dim) }
    }

    pub fn zero(space: CompositeSpace) -> Self {
        let dim = space.total_dim();
        Self { space, matrix: DMatrix::zeros(dim, dim) }
    }

    /// Diagonal operator with the given real entries.
    pub fn diagonal(space: CompositeSpace, entries: &[f64]) -> Result<Self> {
        if entries.len() != space.total_dim() {
            return Err(Error::ShapeMismatch(format!(
                "{} diagonal entries over space of dimension {}",
                entries.len(),
                space.total_dim()
            )));
        }
        let diag =
            DVector::from_iterator(entries.len(), entries.iter().map(|&x| C64::new(x, 0.0)));
        Ok(Self { space, matrix: DMatrix::from_diagonal(&diag) })
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    /// Kronecker composition in factor order.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let space = self.space.tensor(&other.space)?;
        Ok(Self { space, matrix: self.matrix.kronecker(&other.matrix) })
    }

    /// `self + other` on the same space.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::ShapeMismatch("operator sum across different spaces".into()));
        }
        Ok(Self { space: self.space.clone(), matrix: &self.matrix + &other.matrix })
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self { space: self.space.clone(), matrix: &self.matrix * C64::new(factor, 0.0) }
    }

    /// `H|s>`, unnormalized.
    pub fn apply(&self, s: &PureState) -> Result<DVector<C64>> {
        if self.space != *s.space() {
            return Err(Error::ShapeMismatch("operator applied across different spaces".into()));
        }
        Ok(&self.matrix * s.amplitudes())
    }

    /// `<s|H|s>`; the imaginary part is discarded (it vanishes for Hermitian H).
    pub fn expectation(&self, s: &PureState) -> Result<f64> {
        let hs = self.apply(s)?;
        Ok(s.amplitudes().dotc(&hs).re)
    }

    /// `<s|H^2|s>`.
    pub fn expectation_sq(&self, s: &PureState) -> Result<f64> {
        let hs = self.apply(s)?;
        Ok(hs.dotc(&hs).re)
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm()).fold(0.0_f64, f64::max)
    }
}

fn hermiticity_deviation(matrix: &DMatrix<C64>) -> f64 {
    let mut dev = 0.0_f64;
    for i in 0..matrix.nrows() {
        for j in i..matrix.ncols() {
            dev = dev.max((matrix[(i, j)] - matrix[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Hermitian, unit-trace, positive-semidefinite matrix: a mixed state.
#[derive(Clone, Debug)]
pub struct DensityOperator {
    space: CompositeSpace,
    matrix: DMatrix<C64>,
}

impl DensityOperator {
    /// Full validation: Hermitian within 1e-12, trace 1 within 1e-12, smallest
    /// eigenvalue no lower than -1e-10.
    pub fn new(space: CompositeSpace, matrix: DMatrix<C64>) -> Result<Self> {
        let dim = space.total_dim();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} matrix over space of dimension {dim}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let dev = hermiticity_deviation(&matrix);
        if dev > HERMITICITY_TOL {
            return Err(Error::InvalidOperator(format!(
                "density matrix deviates from its adjoint by {dev:.3e}"
            )));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > 1e-12 || trace.im.abs() > 1e-12 {
            return Err(Error::InvalidOperator(format!("density matrix trace {trace} is not 1")));
        }
        let herm = HermitianOperator::hermitized(space.clone(), matrix.clone())?;
        let spec = spectrum(&herm)?;
        let min_eig = spec.eigenvalues.first().copied().unwrap_or(0.0);
        if min_eig < DENSITY_EIGEN_FLOOR {
            return Err(Error::InvalidOperator(format!(
                "density matrix has negative eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(Self { space, matrix })
    }

    /// `|s><s|`.
    pub fn from_pure(s: &PureState) -> Self {
        let amps = s.amplitudes();
        let matrix = amps * amps.adjoint();
        Self { space: s.space().clone(), matrix }
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    /// Trace over all factors not in `keep`; trace is preserved.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityOperator> {
        self.space.check_partition(keep)?;
        let (keep_offsets, traced_offsets) = self.space.partition_offsets(keep);
        let sub = self.space.sub_space(keep)?;
        let kd = keep_offsets.len();
        let mut out = DMatrix::<C64>::zeros(kd, kd);
        for (i, &oi) in keep_offsets.iter().enumerate() {
            for (j, &oj) in keep_offsets.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for &ot in &traced_offsets {
                    acc += self.matrix[(oi + ot, oj + ot)];
                }
                out[(i, j)] = acc;
            }
        }
        Ok(DensityOperator { space: sub, matrix: out })
    }

    /// Ascending eigenvalues (real, since the matrix is Hermitian).
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let herm = HermitianOperator::hermitized(self.space.clone(), self.matrix.clone())?;
        Ok(spectrum(&herm)?.eigenvalues)
    }
}

/// Reduced state of a pure state on the kept factors, computed without
/// forming the global density matrix.
pub fn reduced_density(s: &PureState, keep: &[usize]) -> Result<DensityOperator> {
    s.space().check_partition(keep)?;
    let (keep_offsets, traced_offsets) = s.space().partition_offsets(keep);
    let sub = s.space().sub_space(keep)?;
    let kd = keep_offsets.len();
    let td = traced_offsets.len();
    let amps = s.amplitudes();
    // gather |psi> as a (keep x traced) matrix, then rho = M M†
    let mut gathered = DMatrix::<C64>::zeros(kd, td);
    for (i, &oi) in keep_offsets.iter().enumerate() {
        for (t, &ot) in traced_offsets.iter().enumerate() {
            gathered[(i, t)] = amps[oi + ot];
        }
    }
    let rho = &gathered * gathered.adjoint();
    Ok(DensityOperator { space: sub, matrix: rho })
}
