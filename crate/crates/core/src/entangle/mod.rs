//! Heralded entanglement of two remote atoms by single-photon detection.
//!
//! Each atom is weakly excited, emits at most one photon, and a single
//! detector click after the beam splitter heralds `(|eg⟩ + e^{iφ}|ge⟩)/√2`.
//! The module covers the closed-form rate/fidelity trade-off, the exact
//! herald projection including double excitations, dark counts and
//! decoherence, the rotation/parity state analysis, and a seeded
//! Monte-Carlo realisation of the same protocol.

mod analytic;
mod herald;
mod montecarlo;
mod state;

use thiserror::Error;

use crate::DensityError;

pub use analytic::{
    analytic_single_photon, analytic_two_photon, detection_chain_efficiency, events_per_minute, experiment_detection_budget,
    success_ratio, DetectionStage, SinglePhoton, SuccessRatio, TwoPhoton,
};
pub use herald::{
    calibrate_gate, herald_project, joint_state, reconstruct_state, HeraldBranches, HeraldOutcome, JointState,
    LaserDetectorPhases, ProtocolParams, EXPERIMENT_DARK_POPULATION,
};
pub use montecarlo::{expected_readout, monte_carlo, MonteCarloConfig, MonteCarloStats, ParityPoint};
pub use state::{parity_scan, PulseSequence, RotationPulse, ScanFit, TwoQubitState, EE, EG, GE, GG};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EntangleError {
    #[error("{name} = {value} is outside its allowed range")]
    Parameter { name: &'static str, value: f64 },
    #[error("dark counts need a positive herald gate")]
    IllDefinedGate,
    #[error("herald probability is zero for these parameters")]
    NeverHeralds,
    #[error("target fidelity {0} cannot be reached")]
    InfeasibleFidelity(f64),
    #[error("at least one trial is required")]
    NoTrials,
    #[error("parity scan needs at least one phase")]
    EmptyScan,
    #[error("dark-population target {0} cannot be reached by dark counts alone")]
    Calibration(f64),
    #[error("{0}")]
    Density(#[from] DensityError),
}

pub(crate) fn check_unit(name: &'static str, value: f64) -> Result<(), EntangleError> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(EntangleError::Parameter { name, value })
    }
}

pub(crate) fn check_non_negative(name: &'static str, value: f64) -> Result<(), EntangleError> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(EntangleError::Parameter { name, value })
    }
}
