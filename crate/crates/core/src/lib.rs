//! # timeless
//!
//! A finite-dimensional quantum simulator for universes with no external
//! time. A composite Hilbert space is split into a cyclic clock `C` and the
//! rest `R`; globally stationary states (zero-energy eigenstates of the total
//! Hamiltonian) are constructed both analytically and numerically, and an
//! internal time variable is recovered by conditioning on clock readings.
//! Experiments quantify when the recovered dynamics looks like Schrodinger
//! evolution, how interacting subsystems gain access to the clock, how
//! windowed record-writing orients a direction of time, and how robust the
//! whole construction is to repartitioning and to clock/rest size mismatch.
//!
//! Modules follow that pipeline:
//!
//! - [`hilbert`]: dense complex linear algebra on composite spaces (tensor
//!   structure, partial trace, spectra, kernels, evolution, entropies).
//! - [`clock`]: finite cyclic clock models with a Fourier-conjugate time
//!   basis and a measured commutator defect.
//! - [`constraint`]: total Hamiltonians, zero-energy history states and
//!   numerical kernel extraction, with cross-validation between the two.
//! - [`paw`]: conditioning on clock readings, emergent-dynamics fidelity and
//!   the separability counterexample.
//! - [`experiments`]: named, reproducible experiment presets with sweep
//!   support.
//!
//! Per-point sweep execution and per-reading diagnostics are data-parallel
//! (rayon) when the default `parallel` feature is enabled; results are
//! independent of the execution mode.

pub mod clock;
pub mod constraint;
pub mod error;
pub mod experiments;
pub mod hilbert;
pub mod par;
pub mod paw;
pub mod random;

pub use error::{Error, Result};
