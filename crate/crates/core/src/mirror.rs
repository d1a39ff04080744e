//! Atom-mirror Fabry-Pérot system.
//!
//! A dielectric mirror placed a distance `R` in front of the atom forms a
//! cavity whose second "mirror" is the atom itself, with amplitude
//! reflectivity `2ε`. The probe is resonant with the atom throughout.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CavityError {
    #[error("solid-angle fraction epsilon must lie in [0, 0.5], got {0}")]
    Epsilon(f64),
    #[error("mirror amplitude reflectivity must lie in [0, 1), got {0}")]
    Reflectivity(f64),
    #[error("round-trip gain 2*epsilon*r = {0} must be below 1")]
    RoundTrip(f64),
    #[error("wavelength must be positive and finite, got {0}")]
    Wavelength(f64),
    #[error("atom-mirror distance must be finite, got {0}")]
    Distance(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityParams {
    epsilon: f64,
    r: f64,
    atom_mirror_distance: f64,
    wavelength: f64,
}

impl CavityParams {
    /// `r` is the mirror amplitude reflectivity; distances in metres.
    pub fn new(epsilon: f64, r: f64, atom_mirror_distance: f64, wavelength: f64) -> Result<Self, CavityError> {
        if !(0.0..=0.5).contains(&epsilon) {
            return Err(CavityError::Epsilon(epsilon));
        }
        if !(0.0..1.0).contains(&r) {
            return Err(CavityError::Reflectivity(r));
        }
        if 2.0 * epsilon * r >= 1.0 {
            return Err(CavityError::RoundTrip(2.0 * epsilon * r));
        }
        if !(wavelength.is_finite() && wavelength > 0.0) {
            return Err(CavityError::Wavelength(wavelength));
        }
        if !atom_mirror_distance.is_finite() {
            return Err(CavityError::Distance(atom_mirror_distance));
        }
        Ok(Self {
            epsilon,
            r,
            atom_mirror_distance,
            wavelength,
        })
    }

    /// Same as [`Self::new`] but takes the intensity reflectivity `|r|²`.
    pub fn with_intensity_reflectivity(
        epsilon: f64,
        r2: f64,
        atom_mirror_distance: f64,
        wavelength: f64,
    ) -> Result<Self, CavityError> {
        if !(0.0..1.0).contains(&r2) {
            return Err(CavityError::Reflectivity(r2.sqrt()));
        }
        Self::new(epsilon, r2.sqrt(), atom_mirror_distance, wavelength)
    }

    /// Parameters at a prescribed round-trip phase, with the mirror placed
    /// within the first half wavelength.
    pub fn at_phase(epsilon: f64, r: f64, phi_l: f64, wavelength: f64) -> Result<Self, CavityError> {
        let phi = phi_l.rem_euclid(TAU);
        Self::new(epsilon, r, phi / TAU * wavelength / 2.0, wavelength)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// Amplitude transmissivity `t = √(1 − r²)`.
    pub fn t(&self) -> f64 {
        (1.0 - self.r * self.r).sqrt()
    }

    pub fn atom_mirror_distance(&self) -> f64 {
        self.atom_mirror_distance
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn with_distance(&self, atom_mirror_distance: f64) -> Self {
        Self {
            atom_mirror_distance,
            ..*self
        }
    }

    /// Round-trip phase `φ_L = 2k_L R`, reduced to `[0, 2π)`.
    ///
    /// `R` is first reduced modulo `λ/2` so that metre-scale distances keep
    /// full precision in the phase.
    pub fn round_trip_phase(&self) -> f64 {
        let half = self.wavelength / 2.0;
        let frac = self.atom_mirror_distance.rem_euclid(half) / half;
        (TAU * frac).rem_euclid(TAU)
    }
}

/// The single complex ratio `g_ε ḡ* / (γ̃ + iΔ̃)` of the mirror-modified
/// atom, fixed entirely by `(ε, r, φ_L)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QedCouplings {
    ratio: Complex64,
}

impl QedCouplings {
    /// `ε(1 − r e^{iφ_L}) / (1 − 2rε e^{iφ_L})`.
    pub fn from_cavity(p: &CavityParams) -> Self {
        let e = Complex64::from_polar(1.0, p.round_trip_phase());
        let ratio = p.epsilon * (1.0 - p.r * e) / (1.0 - 2.0 * p.r * p.epsilon * e);
        Self { ratio }
    }

    pub fn ratio(&self) -> Complex64 {
        self.ratio
    }

    /// Effective coupling relative to free space, `ratio / ε`. Ranges from
    /// near-cancellation to doubling as `ε → ½`, `r → 1`.
    pub fn relative_coupling(&self, epsilon: f64) -> Option<Complex64> {
        (epsilon > 0.0).then(|| self.ratio / epsilon)
    }
}

/// Direct Fabry-Pérot transmission `|t(1−2ε) / (1 − 2rε e^{iφ_L})|²`.
pub fn fp_transmission(p: &CavityParams) -> f64 {
    let e = Complex64::from_polar(1.0, p.round_trip_phase());
    let amp = p.t() * (1.0 - 2.0 * p.epsilon) / (1.0 - 2.0 * p.r * p.epsilon * e);
    amp.norm_sqr()
}

/// Transmission from the mirror-modified atomic response,
/// `|t|² |1 − 2 g_ε ḡ*/(γ̃ + iΔ̃)|²`.
pub fn qed_transmission(p: &CavityParams) -> f64 {
    let ratio = QedCouplings::from_cavity(p).ratio();
    (1.0 - p.r * p.r) * (1.0 - 2.0 * ratio).norm_sqr()
}

/// `π·2εr / (1 − (2εr)²)`.
pub fn finesse(p: &CavityParams) -> f64 {
    let x = 2.0 * p.epsilon * p.r;
    PI * x / (1.0 - x * x)
}

/// Fringe extrema `(T_max, T_min)`, reached at `φ_L = 0` and `φ_L = π`.
pub fn fringe_extrema(p: &CavityParams) -> (f64, f64) {
    let base = (1.0 - p.r * p.r) * (1.0 - 2.0 * p.epsilon).powi(2);
    let x = 2.0 * p.r * p.epsilon;
    (base / (1.0 - x).powi(2), base / (1.0 + x).powi(2))
}

/// `(T_max − T_min) / (T_max + T_min)`.
pub fn fringe_visibility(p: &CavityParams) -> f64 {
    let (hi, lo) = fringe_extrema(p);
    if hi + lo == 0.0 {
        0.0
    } else {
        (hi - lo) / (hi + lo)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FringePoint {
    pub position: f64,
    pub phase: f64,
    pub transmission: f64,
    pub reflection: f64,
}

/// Transmission and an anti-phased reflection signal versus mirror position.
///
/// The reflection channel is phenomenological: `amplitude · (1 − T_norm)`
/// with `T_norm` the transmission rescaled to `[0, 1]` between its fringe
/// extrema. Only its phase relative to the transmission is physical. When
/// the fringe has no contrast `T_norm` is taken as ½.
pub fn fringe_scan(p: &CavityParams, positions: &[f64], reflection_amplitude: f64) -> Vec<FringePoint> {
    let (hi, lo) = fringe_extrema(p);
    positions
        .iter()
        .map(|&position| {
            let q = p.with_distance(position);
            let transmission = fp_transmission(&q);
            let norm = if hi > lo { (transmission - lo) / (hi - lo) } else { 0.5 };
            FringePoint {
                position,
                phase: q.round_trip_phase(),
                transmission,
                reflection: reflection_amplitude * (1.0 - norm),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const LAMBDA: f64 = 493.4e-9;

    fn cav(eps: f64, r2: f64, phi: f64) -> CavityParams {
        CavityParams::at_phase(eps, r2.sqrt(), phi, LAMBDA).unwrap()
    }

    #[test]
    fn transmission_oracle_values() {
        assert_abs_diff_eq!(fp_transmission(&cav(0.04, 0.0, 1.3)), 0.8464, epsilon = 1e-14);
        assert_abs_diff_eq!(fp_transmission(&cav(0.04, 0.25, 0.0)), 0.75 * 0.8464 / 0.9216, epsilon = 1e-14);
        assert_abs_diff_eq!(fp_transmission(&cav(0.04, 0.25, PI)), 0.75 * 0.8464 / 1.0816, epsilon = 1e-14);
        assert_abs_diff_eq!(fp_transmission(&cav(0.04, 0.25, 0.0)), 0.688_802_083, epsilon = 1e-9);
        assert_abs_diff_eq!(fp_transmission(&cav(0.04, 0.25, PI)), 0.586_908_284, epsilon = 1e-9);
    }

    #[test]
    fn qed_limits() {
        for phi in [0.0, 1.0, PI, 5.0] {
            let p = cav(0.0, 0.3, phi);
            assert_abs_diff_eq!(qed_transmission(&p), 0.7, epsilon = 1e-15);
            let p = cav(0.07, 0.0, phi);
            assert_abs_diff_eq!(QedCouplings::from_cavity(&p).ratio().re, 0.07, epsilon = 1e-16);
            assert_abs_diff_eq!(qed_transmission(&p), (1.0f64 - 0.14).powi(2), epsilon = 1e-15);
        }
        for (eps, r2, phi) in [(0.04, 0.25, 0.0), (0.04, 0.25, PI), (0.3, 0.9, 2.2)] {
            let p = cav(eps, r2, phi);
            assert_abs_diff_eq!(qed_transmission(&p), fp_transmission(&p), epsilon = 1e-12);
        }
    }

    #[test]
    fn finesse_values() {
        assert_abs_diff_eq!(finesse(&cav(0.04, 0.25, 0.0)), PI * 0.04 / (1.0 - 0.0016), epsilon = 1e-15);
        assert_abs_diff_eq!(finesse(&cav(0.04, 0.25, 0.0)), 0.125_865_090_288, epsilon = 1e-12);
        assert_eq!(finesse(&cav(0.0, 0.25, 0.0)), 0.0);
        assert_eq!(finesse(&cav(0.04, 0.0, 0.0)), 0.0);
        // 2εr = 0.97902
        let near = CavityParams::new(0.49, 0.999, 0.0, LAMBDA).unwrap();
        assert_abs_diff_eq!(finesse(&near), 74.0783, epsilon = 1e-3);
        let closer = CavityParams::new(0.4999, 0.9999, 0.0, LAMBDA).unwrap();
        assert!(finesse(&closer) > 100.0 * finesse(&cav(0.04, 0.25, 0.0)));
        assert!(finesse(&closer) > 1000.0);
    }

    #[test]
    fn phase_reduction_is_periodic() {
        let p = CavityParams::new(0.04, 0.5, 0.30, LAMBDA).unwrap();
        for k in [1.0, 3.0, 1000.0] {
            let q = p.with_distance(0.30 + k * LAMBDA / 2.0);
            // distance rounding grows with k
            assert_abs_diff_eq!(fp_transmission(&p), fp_transmission(&q), epsilon = 1e-9);
        }
        let phi = p.round_trip_phase();
        assert!((0.0..TAU).contains(&phi));
    }

    #[test]
    fn fringe_scan_is_antiphased() {
        let p = CavityParams::new(0.04, 0.5, 0.0, LAMBDA).unwrap();
        let n = 400;
        let positions: Vec<f64> = (0..n).map(|i| 0.3 + i as f64 * LAMBDA / n as f64).collect();
        let scan = fringe_scan(&p, &positions, 1.0);
        let argmax = |f: &dyn Fn(&FringePoint) -> f64| {
            scan.iter()
                .enumerate()
                .max_by(|a, b| f(a.1).total_cmp(&f(b.1)))
                .map(|(i, _)| i)
                .unwrap()
        };
        let t_max = argmax(&|q| q.transmission);
        let r_max = argmax(&|q| q.reflection);
        let gap = (positions[t_max] - positions[r_max]).abs() % (LAMBDA / 2.0);
        let res = LAMBDA / n as f64;
        assert!((gap - LAMBDA / 4.0).abs() <= res, "gap {gap} vs λ/4");

        let (hi, lo) = fringe_extrema(&p);
        let t_hi = scan.iter().map(|q| q.transmission).fold(f64::MIN, f64::max);
        let t_lo = scan.iter().map(|q| q.transmission).fold(f64::MAX, f64::min);
        assert_abs_diff_eq!(t_hi, hi, epsilon = 1e-4);
        assert_abs_diff_eq!(t_lo, lo, epsilon = 1e-4);
    }

    #[test]
    fn rejects_invalid() {
        assert!(CavityParams::new(0.6, 0.5, 0.0, LAMBDA).is_err());
        assert!(CavityParams::new(0.1, 1.0, 0.0, LAMBDA).is_err());
        assert!(CavityParams::new(0.1, 0.5, 0.0, 0.0).is_err());
        assert!(CavityParams::new(0.1, 0.5, f64::NAN, LAMBDA).is_err());
        assert!(CavityParams::with_intensity_reflectivity(0.1, 1.2, 0.0, LAMBDA).is_err());
    }
}
