//! Propagation of a probe optical pulse through a dispersionless Raman medium
//! whose susceptibility varies in time as a superposition of sinusoidal modes
//! (coherently excited Raman transitions).
//!
//! In the reduced local time `η` the medium acts as a pure time remapping plus
//! amplitude scaling: `E_out(η) = E_in(s(η)) · G(η)`, where the input time
//! `s(η)` solves an implicit integral equation and `G = ds/dη` is the
//! compression factor. This crate computes the map, the output field for
//! mixture media and cell cascades, conserved diagnostics (pulse area, photon
//! number, oscillation count, mean-frequency product), spectra, and the
//! small-depth Bessel sideband prediction.
//!
//! The crate is `no_std` (alloc only); all operations are pure and
//! deterministic. IO, file formats, and the command-line driver live in the
//! companion `ramanfm-cli` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod grid;
pub mod observables;
pub mod propagation;
pub mod spectrum;
pub mod susceptibility;
pub mod timemap;

mod error;
mod ode;
mod quad;

pub use error::{Error, Result};
pub use grid::{UniformGrid, Window};
pub use propagation::{CascadeStage, FieldTrace, ProbePulse};
pub use susceptibility::{FrameConvention, RamanMode, SusceptibilityProfile};
pub use timemap::{MapSolverConfig, TimeMapResult};
