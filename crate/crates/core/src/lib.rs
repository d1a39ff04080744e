//! Models for light interacting with a single trapped ion in free space.
//!
//! The crate is organised by physical subsystem:
//!
//! - [`lineshape`]: closed-form forward-scattering responses of a weakly
//!   driven atom (extinction, phase shift, polarimetry, Λ-system EIT).
//! - [`bloch`]: a steady-state Lindblad solver for arbitrary level schemes,
//!   with two-level, Λ and Ba⁺ presets and the probe input-output spectrum.
//! - [`mirror`]: the atom-mirror Fabry-Pérot system and its QED form.
//! - [`entangle`]: the single-photon heralded entanglement protocol, from
//!   the analytic rate/fidelity trade-off to a seeded Monte-Carlo engine.
//!
//! All rates and detunings are ordinary frequencies in MHz. Every formula
//! only involves ratios of rates, so no factors of 2π appear.

pub mod bloch;
pub mod density;
pub mod entangle;
pub mod lineshape;
pub mod mirror;

pub use density::{DensityError, DensityMatrix};
pub use num_complex::Complex64;

/// Complex field response at one detuning, as a ratio to the input field.
pub type ComplexResponse = Complex64;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
