//! Seeded random states and operators.
//!
//! Experiments derive every pseudo-random object from a config seed plus a
//! fixed stream index, so a run is reproducible bit for bit. Streams keep
//! independent draws independent of each other's draw counts.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::hilbert::{C64, CompositeSpace, HermitianOperator, PureState};

/// RNG for (seed, stream). Distinct streams never collide.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn complex_gaussian<R: Rng>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(re, im)
}

/// Haar-like random pure state: normalized complex Gaussian vector.
pub fn random_state<R: Rng>(space: CompositeSpace, rng: &mut R) -> Result<PureState> {
    let dim = space.total_dim();
    let amps = DVector::from_fn(dim, |_, _| complex_gaussian(rng));
    PureState::normalized(space, amps)
}

/// Random Hermitian operator `(A + A†)/2` with Gaussian entries times `scale`.
pub fn random_hermitian<R: Rng>(
    space: CompositeSpace,
    scale: f64,
    rng: &mut R,
) -> Result<HermitianOperator> {
    let dim = space.total_dim();
    let a = DMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng) * scale);
    let herm = (&a + a.adjoint()) * Complex::new(0.5, 0.0);
    HermitianOperator::new(space, herm)
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phase
/// convention that makes the R diagonal real positive.
pub fn random_unitary<R: Rng>(dim: usize, rng: &mut R) -> DMatrix<C64> {
    let a = DMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng));
    let qr = a.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}
