//! Joint atom-photon state and the single-click herald projection.
//!
//! A herald is exactly one detector click inside the gate. The branches that
//! produce one click are
//!
//! - one atom excited, its photon detected: coherent `|Ψ^φ⟩`;
//! - one atom excited, photon lost, one dark count: `|eg⟩`/`|ge⟩` mixture;
//! - both excited, one of two photons detected (or both lost plus a dark
//!   count): `|ee⟩`;
//! - neither excited, one dark count: `|gg⟩`.
//!
//! Dark counts are Poisson with mean `dark_rate · gate`, and every branch
//! carries the probability `e^{−d}` of no further dark click.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::state::{TwoQubitState, EE, EG, GE, GG};
use super::{check_non_negative, check_unit, EntangleError};

/// Fraction of heralds attributed to dark counts in the measured state.
pub const EXPERIMENT_DARK_POPULATION: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolParams {
    pub p_e: f64,
    pub eta: f64,
    /// Detector dark counts per second.
    pub dark_rate: f64,
    /// Herald window in seconds.
    pub gate: f64,
    /// Trials per second.
    pub duty_cycle: f64,
    /// Standard deviation of the state phase in radians.
    pub phase_jitter_sigma: f64,
    pub recoil_coherence: f64,
    pub dephasing_coherence: f64,
}

impl ProtocolParams {
    /// Experimental values, with the gate calibrated to
    /// [`EXPERIMENT_DARK_POPULATION`].
    pub fn experiment() -> Self {
        let mut p = Self {
            p_e: 0.07,
            eta: 8e-4,
            dark_rate: 10.0,
            gate: 0.0,
            duty_cycle: 2300.0,
            phase_jitter_sigma: 0.0,
            recoil_coherence: 0.45,
            dephasing_coherence: 0.96,
        };
        p.gate = calibrate_gate(p.p_e, p.eta, p.dark_rate, EXPERIMENT_DARK_POPULATION).expect("experimental values calibrate");
        p
    }

    /// No dark counts and no decoherence.
    pub fn ideal(p_e: f64, eta: f64) -> Self {
        Self {
            p_e,
            eta,
            dark_rate: 0.0,
            gate: 0.0,
            duty_cycle: 1.0,
            phase_jitter_sigma: 0.0,
            recoil_coherence: 1.0,
            dephasing_coherence: 1.0,
        }
    }

    pub fn validate(&self) -> Result<(), EntangleError> {
        check_unit("p_e", self.p_e)?;
        check_unit("eta", self.eta)?;
        check_unit("recoil_coherence", self.recoil_coherence)?;
        check_unit("dephasing_coherence", self.dephasing_coherence)?;
        check_non_negative("dark_rate", self.dark_rate)?;
        check_non_negative("gate", self.gate)?;
        check_non_negative("duty_cycle", self.duty_cycle)?;
        check_non_negative("phase_jitter_sigma", self.phase_jitter_sigma)?;
        if self.dark_rate > 0.0 && self.gate <= 0.0 {
            return Err(EntangleError::IllDefinedGate);
        }
        Ok(())
    }

    /// Mean number of dark counts per gate.
    pub fn dark_mean(&self) -> f64 {
        self.dark_rate * self.gate
    }

    /// Multiplier on `ρ_eg,ge` from recoil, dephasing and phase jitter.
    pub fn coherence_factor(&self) -> f64 {
        self.recoil_coherence * self.dephasing_coherence * (-0.5 * self.phase_jitter_sigma.powi(2)).exp()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct LaserDetectorPhases {
    pub laser_a: f64,
    pub laser_b: f64,
    pub detector_a: f64,
    pub detector_b: f64,
}

impl LaserDetectorPhases {
    /// `φ = (φ_L,B − φ_L,A) + (φ_D,A − φ_D,B)`.
    pub fn state_phase(&self) -> f64 {
        (self.laser_b - self.laser_a) + (self.detector_a - self.detector_b)
    }
}

/// Pure state over `{g,e}² ⊗ {0,1}²`, indexed `s_A·8 + s_B·4 + n_A·2 + n_B`
/// with `g = 0`, `e = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    amplitudes: [Complex64; 16],
}

impl JointState {
    pub fn index(s_a: usize, s_b: usize, n_a: usize, n_b: usize) -> usize {
        s_a * 8 + s_b * 4 + n_a * 2 + n_b
    }

    pub fn amplitudes(&self) -> &[Complex64; 16] {
        &self.amplitudes
    }

    pub fn amplitude(&self, s_a: usize, s_b: usize, n_a: usize, n_b: usize) -> Complex64 {
        self.amplitudes[Self::index(s_a, s_b, n_a, n_b)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    fn weight(&self, s_a: usize, s_b: usize, n_a: usize, n_b: usize) -> f64 {
        self.amplitude(s_a, s_b, n_a, n_b).norm_sqr()
    }
}

/// Product of the two single-atom Raman states.
pub fn joint_state(p_e: f64, phases: &LaserDetectorPhases) -> Result<JointState, EntangleError> {
    check_unit("p_e", p_e)?;
    let (g, e) = ((1.0 - p_e).sqrt(), p_e.sqrt());
    let mut amplitudes = [Complex64::new(0.0, 0.0); 16];
    amplitudes[JointState::index(0, 0, 0, 0)] = Complex64::from_polar(g * g, phases.laser_a + phases.laser_b);
    amplitudes[JointState::index(1, 0, 1, 0)] = Complex64::from_polar(g * e, phases.laser_a + phases.detector_b);
    amplitudes[JointState::index(0, 1, 0, 1)] = Complex64::from_polar(g * e, phases.laser_b + phases.detector_a);
    amplitudes[JointState::index(1, 1, 1, 1)] = Complex64::from_polar(e * e, phases.detector_a + phases.detector_b);
    Ok(JointState { amplitudes })
}

/// Unnormalised single-click weights of each branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeraldBranches {
    /// Neither atom excited, one dark count.
    pub ground_dark: f64,
    /// One atom excited and its photon detected.
    pub single_detected: f64,
    /// One atom excited, photon lost, one dark count.
    pub single_dark: f64,
    pub double: f64,
}

impl HeraldBranches {
    pub fn total(&self) -> f64 {
        self.ground_dark + self.single_detected + self.single_dark + self.double
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeraldOutcome {
    pub state: TwoQubitState,
    pub probability: f64,
    pub branches: HeraldBranches,
}

/// Conditional two-atom state after exactly one click, and the probability
/// of that click.
///
/// The joint state's own `p_e` and phases are used; `params.p_e` is ignored
/// here.
pub fn herald_project(joint: &JointState, params: &ProtocolParams) -> Result<HeraldOutcome, EntangleError> {
    params.validate()?;
    let eta = params.eta;
    let d = params.dark_mean();
    let none = (-d).exp();

    let a = joint.weight(0, 0, 0, 0);
    let c_eg = joint.amplitude(1, 0, 1, 0);
    let c_ge = joint.amplitude(0, 1, 0, 1);
    let s = c_eg.norm_sqr() + c_ge.norm_sqr();
    let dd = joint.weight(1, 1, 1, 1);

    let branches = HeraldBranches {
        ground_dark: a * d * none,
        single_detected: s * eta * none,
        single_dark: s * (1.0 - eta) * d * none,
        double: dd * (2.0 * eta * (1.0 - eta) + (1.0 - eta).powi(2) * d) * none,
    };
    let p = branches.total();
    if !(p > 0.0) {
        return Err(EntangleError::NeverHeralds);
    }

    let mut rho = DMatrix::<Complex64>::zeros(4, 4);
    rho[(GG, GG)] += branches.ground_dark / p;
    rho[(EE, EE)] += branches.double / p;
    if s > 0.0 {
        // the detected branch keeps the relative phase of the joint amplitudes
        let coh = branches.single_detected / (p * s);
        rho[(EG, EG)] += c_eg.norm_sqr() * (coh + branches.single_dark / (p * s));
        rho[(GE, GE)] += c_ge.norm_sqr() * (coh + branches.single_dark / (p * s));
        let off = c_eg * c_ge.conj() * coh * params.coherence_factor();
        rho[(EG, GE)] = off;
        rho[(GE, EG)] = off.conj();
    }
    Ok(HeraldOutcome {
        state: TwoQubitState::from_matrix(rho)?,
        probability: p,
        branches,
    })
}

/// Herald gate (s) at which dark counts make up `target` of the heralded
/// population in `|gg⟩`.
pub fn calibrate_gate(p_e: f64, eta: f64, dark_rate: f64, target: f64) -> Result<f64, EntangleError> {
    check_unit("p_e", p_e)?;
    check_unit("eta", eta)?;
    if !(dark_rate > 0.0 && dark_rate.is_finite()) {
        return Err(EntangleError::IllDefinedGate);
    }
    if !(target > 0.0 && target < 1.0) {
        return Err(EntangleError::Calibration(target));
    }
    let a = (1.0 - p_e).powi(2);
    let s = 2.0 * p_e * (1.0 - p_e);
    let dd = p_e * p_e;
    // ρ_gg = A d / (A d + a0 + a1 d), linear in the dark mean d
    let a0 = s * eta + 2.0 * dd * eta * (1.0 - eta);
    let a1 = s * (1.0 - eta) + dd * (1.0 - eta).powi(2);
    let denom = a * (1.0 - target) - target * a1;
    if denom <= 0.0 || a0 <= 0.0 {
        return Err(EntangleError::Calibration(target));
    }
    Ok(target * a0 / denom / dark_rate)
}

/// State built from measured populations and the coherence loss factors,
/// assuming the whole single-excitation population starts coherent at `φ = 0`.
pub fn reconstruct_state(
    single: f64,
    double: f64,
    recoil_coherence: f64,
    dephasing_coherence: f64,
    phase_jitter_sigma: f64,
) -> Result<TwoQubitState, EntangleError> {
    check_unit("single", single)?;
    check_unit("double", double)?;
    check_unit("recoil_coherence", recoil_coherence)?;
    check_unit("dephasing_coherence", dephasing_coherence)?;
    check_non_negative("phase_jitter_sigma", phase_jitter_sigma)?;
    let ground = 1.0 - single - double;
    if ground < -1e-15 {
        return Err(EntangleError::Parameter {
            name: "single + double",
            value: single + double,
        });
    }
    let kappa = recoil_coherence * dephasing_coherence * (-0.5 * phase_jitter_sigma.powi(2)).exp();
    let mut rho = DMatrix::<Complex64>::zeros(4, 4);
    rho[(GG, GG)] = Complex64::new(ground.max(0.0), 0.0);
    rho[(EE, EE)] = Complex64::new(double, 0.0);
    rho[(EG, EG)] = Complex64::new(0.5 * single, 0.0);
    rho[(GE, GE)] = Complex64::new(0.5 * single, 0.0);
    rho[(EG, GE)] = Complex64::new(0.5 * single * kappa, 0.0);
    rho[(GE, EG)] = rho[(EG, GE)];
    TwoQubitState::from_matrix(rho)
}
