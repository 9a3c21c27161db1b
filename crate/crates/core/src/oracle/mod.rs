//! Brute-force cross-checks that share no code path with the spectral engine.
//!
//! * [`rk4_evolve`] steps the Schrödinger equation with matrix-vector products.
//! * [`expm_evolve`] exponentiates the full truncated Hamiltonian with a
//!   hand-written Jacobi eigensolver.
//! * [`discretize_continuum`] replaces the cavity continuum by a large finite
//!   mode set; [`windowed_spectrum`] extracts its amplitude near the dressed line.
//! * [`numerics`] holds the quadrature, contour-derivative and winding-count
//!   helpers used to check the Laplace-domain formulas.

mod continuum;
mod evolve;
pub mod numerics;

pub use continuum::{discretize_continuum, fit_decay_rate, windowed_spectrum, ContinuumModes, WindowedSpectrum};
pub use evolve::{expm_amplitude, expm_evolve, full_hamiltonian, jacobi_eigen, rk4_evolve, EvolutionResult};
