//! Probe transmission from steady-state coherences.

use num_complex::Complex64;
use rayon::prelude::*;

use super::{build_liouvillian, steady_state, BlochError, LevelScheme, Polarization};
use crate::lineshape::{output_field, rotation_from_susceptibilities, stokes_from_fields};
use crate::{ComplexResponse, DensityMatrix};

/// Largest accepted probe saturation `s = 2Ω²/γ²` per coupling.
pub const MAX_SATURATION: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Detection {
    /// Total transmitted intensity `|1 − 2εL|²` and its phase.
    Scalar,
    /// Polarimetric detection of a probe linearly polarised perpendicular
    /// to the quantisation axis: transmission is the parallel-analyser
    /// intensity `I₀` and the phase is the polarisation rotation angle.
    Polarimetric,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSpec {
    /// Laser whose couplings form the probe.
    pub laser: String,
    /// Laser whose detuning is swept over the grid; defaults to the probe.
    pub sweep: Option<String>,
    /// Fraction of the probe mode overlapping the atomic dipole mode.
    pub epsilon: f64,
    pub detection: Detection,
}

impl ProbeSpec {
    pub fn scalar(laser: &str, epsilon: f64) -> Self {
        Self {
            laser: laser.to_string(),
            sweep: None,
            epsilon,
            detection: Detection::Scalar,
        }
    }

    pub fn polarimetric(laser: &str, epsilon: f64) -> Self {
        Self {
            detection: Detection::Polarimetric,
            ..Self::scalar(laser, epsilon)
        }
    }

    pub fn sweeping(mut self, laser: &str) -> Self {
        self.sweep = Some(laser.to_string());
        self
    }

    fn sweep_laser(&self) -> &str {
        self.sweep.as_deref().unwrap_or(&self.laser)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProbeResponse {
    Scalar(ComplexResponse),
    Circular { plus: ComplexResponse, minus: ComplexResponse },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumPoint {
    pub detuning: f64,
    pub transmission: f64,
    /// Phase of the transmitted field (scalar) or rotation angle
    /// (polarimetric), in radians.
    pub phase: f64,
    pub response: ProbeResponse,
}

/// Effective two-level susceptibility of the probe in the current scheme,
/// with the steady state it was extracted from.
///
/// Each probe component contributes `ρ_lu·γ_lu·e^{iφ}/(i·rabi)`, weighted by
/// its strength squared relative to the strongest component, so a single
/// component reduces to the Lorentzian `γ/(γ + iΔ)` times the lower-level
/// population.
pub fn probe_response(scheme: &LevelScheme, spec: &ProbeSpec) -> Result<(ProbeResponse, DensityMatrix), BlochError> {
    let probes = scheme.couplings_of(&spec.laser);
    if probes.is_empty() {
        return Err(BlochError::UnknownLaser(spec.laser.clone()));
    }
    let l = build_liouvillian(scheme)?;
    let strongest = probes.iter().map(|&k| scheme.couplings[k].rabi).fold(0.0, f64::max);
    for &k in &probes {
        let c = &scheme.couplings[k];
        if c.rabi == 0.0 {
            return Err(BlochError::ZeroProbe(k));
        }
        let g = l.coherence_decay(c.lower, c.upper);
        let saturation = 2.0 * c.rabi * c.rabi / (g * g);
        if saturation > MAX_SATURATION {
            return Err(BlochError::ProbeNotWeak { coupling: k, saturation });
        }
    }
    let rho = steady_state(&l)?;
    let component = |k: usize| {
        let c = &scheme.couplings[k];
        let g = l.coherence_decay(c.lower, c.upper);
        let weight = (c.rabi / strongest).powi(2);
        rho.get(c.lower, c.upper) * g * Complex64::from_polar(1.0, c.phase) / Complex64::new(0.0, c.rabi) * weight
    };
    let response = match spec.detection {
        Detection::Scalar => ProbeResponse::Scalar(probes.iter().map(|&k| component(k)).sum()),
        Detection::Polarimetric => {
            let mut plus = Complex64::new(0.0, 0.0);
            let mut minus = Complex64::new(0.0, 0.0);
            for &k in &probes {
                match scheme.couplings[k].polarization {
                    Polarization::SigmaPlus => plus += component(k),
                    Polarization::SigmaMinus => minus += component(k),
                    // π light is not emitted along a probe perpendicular to the field
                    Polarization::Pi | Polarization::Unspecified => {}
                }
            }
            ProbeResponse::Circular { plus, minus }
        }
    };
    Ok((response, rho))
}

fn point(detuning: f64, epsilon: f64, response: ProbeResponse) -> SpectrumPoint {
    let (transmission, phase) = match response {
        ProbeResponse::Scalar(l) => {
            let e = output_field(epsilon, l);
            (e.norm_sqr(), e.arg())
        }
        ProbeResponse::Circular { plus, minus } => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let stokes = stokes_from_fields(output_field(epsilon, plus) * s, output_field(epsilon, minus) * s);
            (stokes.i0, rotation_from_susceptibilities(epsilon, plus, minus))
        }
    };
    SpectrumPoint {
        detuning,
        transmission,
        phase,
        response,
    }
}

/// Probe spectrum over `grid` (MHz), solving each point independently.
pub fn probe_spectrum(scheme: &LevelScheme, spec: &ProbeSpec, grid: &[f64]) -> Result<Vec<SpectrumPoint>, BlochError> {
    if !(0.0..=0.5).contains(&spec.epsilon) {
        return Err(BlochError::Epsilon(spec.epsilon));
    }
    let sweep = spec.sweep_laser();
    if scheme.couplings_of(sweep).is_empty() {
        return Err(BlochError::UnknownLaser(sweep.to_string()));
    }
    grid.par_iter()
        .map(|&d| {
            let mut s = scheme.clone();
            s.set_laser_detuning(sweep, d);
            let (response, _) = probe_response(&s, spec)?;
            Ok(point(d, spec.epsilon, response))
        })
        .collect()
}
