//! Closed-form forward-scattering responses of a weakly driven atom.
//!
//! The transmitted field is the input plus the forward-emitted dipole field,
//! `E_out / E_in = 1 − 2ε·L(Δ)`, where `L` is the normalised atomic
//! coherence and `ε` the fraction of the full solid angle covered by the
//! focusing optics. Everything here is a pure function of its arguments.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use num_complex::Complex64;
use thiserror::Error;

use crate::ComplexResponse;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LineshapeError {
    #[error("linewidth gamma must be positive and finite, got {0}")]
    Gamma(f64),
    #[error("solid-angle fraction epsilon must lie in [0, 0.5], got {0}")]
    Epsilon(f64),
    #[error("ground-state populations must lie in [0, 1] and sum to 1, got {minus} + {plus}")]
    Populations { minus: f64, plus: f64 },
    #[error("{name} must be non-negative and finite, got {value}")]
    Negative { name: &'static str, value: f64 },
    #[error("{0} must be finite")]
    NonFinite(&'static str),
}

fn finite(name: &'static str, v: f64) -> Result<f64, LineshapeError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(LineshapeError::NonFinite(name))
    }
}

/// Two-level atom coupled to a focused probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelParams {
    /// Amplitude half-width γ (MHz). The extinction dip has FWHM 2γ.
    gamma: f64,
    /// Solid-angle fraction ε.
    epsilon: f64,
    /// Line-centre offset Δ₀ (MHz).
    detuning_offset: f64,
}

impl TwoLevelParams {
    pub fn new(gamma: f64, epsilon: f64, detuning_offset: f64) -> Result<Self, LineshapeError> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(LineshapeError::Gamma(gamma));
        }
        if !(0.0..=0.5).contains(&epsilon) {
            return Err(LineshapeError::Epsilon(epsilon));
        }
        finite("detuning_offset", detuning_offset)?;
        Ok(Self {
            gamma,
            epsilon,
            detuning_offset,
        })
    }

    /// Builds parameters from the FWHM of the intensity dip.
    pub fn from_fwhm(fwhm: f64, epsilon: f64, detuning_offset: f64) -> Result<Self, LineshapeError> {
        Self::new(fwhm / 2.0, epsilon, detuning_offset)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn detuning_offset(&self) -> f64 {
        self.detuning_offset
    }

    /// Coupling rate of the input mode, γ_in = εγ.
    pub fn gamma_in(&self) -> f64 {
        self.epsilon * self.gamma
    }
}

/// Zeeman-split spin-½ ground state probed by a linearly polarised beam.
///
/// The σ⁻ component is resonant at `Δ − Δ₀ = −Δ_B` and the σ⁺ component at
/// `Δ − Δ₀ = +Δ_B`, so a positive splitting puts σ⁻ on the red side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeemanDoubletParams {
    base: TwoLevelParams,
    delta_b: f64,
    rho_minus: f64,
    rho_plus: f64,
}

impl ZeemanDoubletParams {
    pub fn new(base: TwoLevelParams, delta_b: f64, rho_minus: f64, rho_plus: f64) -> Result<Self, LineshapeError> {
        finite("delta_b", delta_b)?;
        let ok = (0.0..=1.0).contains(&rho_minus)
            && (0.0..=1.0).contains(&rho_plus)
            && (rho_minus + rho_plus - 1.0).abs() <= 1e-12;
        if !ok {
            return Err(LineshapeError::Populations {
                minus: rho_minus,
                plus: rho_plus,
            });
        }
        Ok(Self {
            base,
            delta_b,
            rho_minus,
            rho_plus,
        })
    }

    pub fn base(&self) -> &TwoLevelParams {
        &self.base
    }

    pub fn delta_b(&self) -> f64 {
        self.delta_b
    }

    pub fn rho_minus(&self) -> f64 {
        self.rho_minus
    }

    pub fn rho_plus(&self) -> f64 {
        self.rho_plus
    }

    /// Normalised susceptibilities `(L⁺, L⁻)` at probe detuning `delta`.
    pub fn susceptibilities(&self, delta: f64) -> (ComplexResponse, ComplexResponse) {
        let g = self.base.gamma;
        let x = delta - self.base.detuning_offset;
        let plus = self.rho_plus * g / Complex64::new(g, x - self.delta_b);
        let minus = self.rho_minus * g / Complex64::new(g, x + self.delta_b);
        (plus, minus)
    }
}

/// Λ system probed on one arm while a control laser drives the other.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaParams {
    gamma: f64,
    gamma0: f64,
    omega_r: f64,
    delta_g: f64,
}

impl LambdaParams {
    /// `omega_r` is the control coupling as it enters the susceptibility
    /// (the off-diagonal Hamiltonian element, half the Rabi frequency).
    pub fn new(gamma: f64, gamma0: f64, omega_r: f64, delta_g: f64) -> Result<Self, LineshapeError> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(LineshapeError::Gamma(gamma));
        }
        for (name, value) in [("gamma0", gamma0), ("omega_r", omega_r)] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(LineshapeError::Negative { name, value });
            }
        }
        finite("delta_g", delta_g)?;
        Ok(Self {
            gamma,
            gamma0,
            omega_r,
            delta_g,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn gamma0(&self) -> f64 {
        self.gamma0
    }

    pub fn omega_r(&self) -> f64 {
        self.omega_r
    }

    pub fn delta_g(&self) -> f64 {
        self.delta_g
    }

    /// Width scale of the transparency window, Ω_r²/γ.
    pub fn window_width(&self) -> f64 {
        self.omega_r * self.omega_r / self.gamma
    }
}

/// Analyser intensities behind a polarimeter, normalised to the input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StokesSample {
    pub i0: f64,
    pub i45: f64,
    pub i90: f64,
    pub s0: f64,
    pub s1: f64,
    pub s2: f64,
}

impl StokesSample {
    pub fn from_intensities(i0: f64, i45: f64, i90: f64) -> Self {
        let s0 = i0 + i90;
        Self {
            i0,
            i45,
            i90,
            s0,
            s1: i0 - i90,
            s2: 2.0 * i45 - s0,
        }
    }

    /// Polarisation rotation recovered from the Stokes parameters.
    ///
    /// With the ±π/4 analyser phases of the 45° channel, `s1 + i·s2` is
    /// proportional to `conj(E⁺)·E⁻`, whose argument runs opposite to
    /// `arg[1 − 2ε(L⁺ − L⁻)]`. The sign is flipped so both angles share
    /// one convention.
    pub fn rotation(&self) -> f64 {
        -0.5 * self.s2.atan2(self.s1)
    }

    /// Small-extinction estimator using only `I₀` and `I₄₅`
    /// (`s1 ≈ s0 ≈ I₀`), in the same sign convention as [`Self::rotation`].
    pub fn rotation_from_i0_i45(&self) -> f64 {
        -0.5 * ((2.0 * self.i45 - self.i0) / self.i0).atan()
    }
}

/// Exact rotation angle and its polarimetric estimate at one detuning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaradayAngle {
    /// `½·arg[1 − 2ε(L⁺ − L⁻)]`.
    pub exact: f64,
    /// Angle recovered from the simulated Stokes parameters.
    pub stokes: f64,
}

/// Two-level response `γ / (γ + i(Δ − Δ₀))`.
pub fn lorentzian(delta: f64, p: &TwoLevelParams) -> ComplexResponse {
    p.gamma / Complex64::new(p.gamma, delta - p.detuning_offset)
}

/// Transmitted field relative to the input, `1 − 2εL`.
pub fn output_field(epsilon: f64, response: ComplexResponse) -> Complex64 {
    Complex64::new(1.0, 0.0) - 2.0 * epsilon * response
}

pub fn transmission(delta: f64, p: &TwoLevelParams) -> f64 {
    output_field(p.epsilon, lorentzian(delta, p)).norm_sqr()
}

/// Closed form `1 − 4ε(1−ε)γ²/(γ² + (Δ−Δ₀)²)`, algebraically equal to
/// [`transmission`].
pub fn transmission_closed_form(delta: f64, p: &TwoLevelParams) -> f64 {
    let x = delta - p.detuning_offset;
    let g2 = p.gamma * p.gamma;
    1.0 - 4.0 * p.epsilon * (1.0 - p.epsilon) * g2 / (g2 + x * x)
}

/// Phase of the transmitted field (radians).
pub fn phase_shift(delta: f64, p: &TwoLevelParams) -> f64 {
    output_field(p.epsilon, lorentzian(delta, p)).arg()
}

/// `(E⁺_out, E⁻_out)` relative to `E_in`, each carrying its 1/√2 share of
/// the linearly polarised input.
pub fn doublet_outputs(delta: f64, p: &ZeemanDoubletParams) -> (Complex64, Complex64) {
    let (lp, lm) = p.susceptibilities(delta);
    let eps = p.base.epsilon;
    (
        output_field(eps, lp) * FRAC_1_SQRT_2,
        output_field(eps, lm) * FRAC_1_SQRT_2,
    )
}

/// Analyser intensities for the doublet at one detuning.
pub fn polarimetry(delta: f64, p: &ZeemanDoubletParams) -> StokesSample {
    let (ep, em) = doublet_outputs(delta, p);
    stokes_from_fields(ep, em)
}

/// `I₀ = ½|E⁺+E⁻|²`, `I₉₀ = ½|E⁺−E⁻|²`, `I₄₅ = ½|E⁺e^{iπ/4} + E⁻e^{−iπ/4}|²`.
pub fn stokes_from_fields(ep: Complex64, em: Complex64) -> StokesSample {
    let i0 = 0.5 * (ep + em).norm_sqr();
    let i90 = 0.5 * (ep - em).norm_sqr();
    let q = Complex64::from_polar(1.0, FRAC_PI_4);
    let i45 = 0.5 * (ep * q + em * q.conj()).norm_sqr();
    StokesSample::from_intensities(i0, i45, i90)
}

/// Rotation angle from a pair of circular-component susceptibilities.
pub fn rotation_from_susceptibilities(epsilon: f64, plus: ComplexResponse, minus: ComplexResponse) -> f64 {
    0.5 * output_field(epsilon, plus - minus).arg()
}

pub fn faraday_angle(delta: f64, p: &ZeemanDoubletParams) -> FaradayAngle {
    let (lp, lm) = p.susceptibilities(delta);
    FaradayAngle {
        exact: rotation_from_susceptibilities(p.base.epsilon, lp, lm),
        stokes: polarimetry(delta, p).rotation(),
    }
}

/// Λ-system susceptibility `γ(γ₀−iδ) / ((γ₀−iδ)(γ+iΔ_g) + Ω_r²)`.
///
/// `delta_two_photon` is the control detuning minus the probe detuning, the
/// sign for which the Autler-Townes poles sit at real `Δ_g ≈ ±Ω_r`.
pub fn eit_susceptibility(delta_two_photon: f64, p: &LambdaParams) -> ComplexResponse {
    let ground = Complex64::new(p.gamma0, -delta_two_photon);
    let optical = Complex64::new(p.gamma, p.delta_g);
    p.gamma * ground / (ground * optical + p.omega_r * p.omega_r)
}

pub fn eit_transmission(delta_two_photon: f64, epsilon: f64, p: &LambdaParams) -> f64 {
    output_field(epsilon, eit_susceptibility(delta_two_photon, p)).norm_sqr()
}
