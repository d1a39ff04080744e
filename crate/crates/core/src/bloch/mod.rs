//! Steady-state optical Bloch equations for multi-level schemes.
//!
//! A [`LevelScheme`] lists levels, spontaneous decays, laser couplings and
//! extra dephasing. [`build_liouvillian`] turns it into a Lindblad
//! superoperator in the rotating frame, [`steady_state`] extracts its unique
//! fixed point and [`probe_spectrum`] converts the probe coherences into the
//! transmitted field.

pub mod angular;
pub mod fit;
mod liouvillian;
pub mod presets;
mod scheme;
mod spectrum;
mod steady;

use thiserror::Error;

use crate::DensityError;

pub use liouvillian::{build_liouvillian, Liouvillian};
pub use scheme::{Coupling, Decay, Dephasing, Level, LevelScheme, Polarization, Pumping};
pub use spectrum::{probe_response, probe_spectrum, Detection, ProbeResponse, ProbeSpec, SpectrumPoint, MAX_SATURATION};
pub use steady::{steady_state, STEADY_STATE_RESIDUAL_TOL};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BlochError {
    #[error("level scheme has no levels")]
    EmptyScheme,
    #[error("duplicate level label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown level {0:?}")]
    UnknownLevel(String),
    #[error("level index {index} out of range for {dim} levels")]
    LevelIndex { index: usize, dim: usize },
    #[error("transition from level {0} to itself")]
    SelfTransition(usize),
    #[error("{what} must be finite and non-negative, got {value}")]
    InvalidRate { what: &'static str, value: f64 },
    #[error("{0} must be finite")]
    NonFinite(&'static str),
    #[error("decay graph contains a cycle")]
    DecayCycle,
    #[error("coupling {0} has no rotating frame consistent with the other couplings")]
    InconsistentFrame(usize),
    #[error("steady state is not unique (null space of dimension {0})")]
    DegenerateSteadyState(usize),
    #[error("steady-state residual {0:.3e} exceeds tolerance")]
    Residual(f64),
    #[error("no coupling driven by laser {0:?}")]
    UnknownLaser(String),
    #[error("probe coupling {coupling} has saturation {saturation:.3e}, above the weak-probe limit")]
    ProbeNotWeak { coupling: usize, saturation: f64 },
    #[error("probe coupling {0} has zero strength")]
    ZeroProbe(usize),
    #[error("invalid probe epsilon {0}")]
    Epsilon(f64),
    #[error("{0}")]
    Density(#[from] DensityError),
    #[error("cannot parse level scheme: {0}")]
    Parse(String),
    #[error("{0}")]
    Io(String),
    #[error("fit failed: {0}")]
    Fit(String),
}
