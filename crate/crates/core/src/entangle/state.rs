//! Two-qubit states and the rotation/parity analysis.
//!
//! Basis order is `gg, ge, eg, ee` (first letter atom A). The excited state
//! `|e⟩` is spin-up, so in the single-atom basis `(g, e)`
//! `σ_x = [[0,1],[1,0]]` and `σ_y = [[0,i],[−i,0]]`.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{DMatrix, Matrix2, Matrix3, Vector3};
use num_complex::Complex64;

use super::EntangleError;
use crate::DensityMatrix;

pub const GG: usize = 0;
pub const GE: usize = 1;
pub const EG: usize = 2;
pub const EE: usize = 3;

const PARITY: [f64; 4] = [1.0, -1.0, -1.0, 1.0];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    rho: DensityMatrix,
}

impl TwoQubitState {
    pub fn new(rho: DensityMatrix) -> Result<Self, EntangleError> {
        if rho.dim() != 4 {
            return Err(EntangleError::Density(crate::DensityError::NotSquare {
                rows: rho.dim(),
                cols: 4,
            }));
        }
        Ok(Self { rho })
    }

    pub fn from_matrix(m: DMatrix<Complex64>) -> Result<Self, EntangleError> {
        Self::new(DensityMatrix::new(m)?)
    }

    pub fn from_pure(amplitudes: [Complex64; 4]) -> Result<Self, EntangleError> {
        Self::new(DensityMatrix::from_pure(&amplitudes)?)
    }

    pub fn basis(index: usize) -> Self {
        let mut a = [c(0.0, 0.0); 4];
        a[index] = c(1.0, 0.0);
        Self::from_pure(a).expect("basis state")
    }

    /// `(|eg⟩ + e^{iφ}|ge⟩)/√2`.
    pub fn psi(phi: f64) -> Self {
        let mut a = [c(0.0, 0.0); 4];
        a[EG] = c(FRAC_1_SQRT_2, 0.0);
        a[GE] = Complex64::from_polar(FRAC_1_SQRT_2, phi);
        Self::from_pure(a).expect("normalised")
    }

    pub fn psi_plus() -> Self {
        Self::psi(0.0)
    }

    /// `(|gg⟩ − |ee⟩)/√2`.
    pub fn phi_minus() -> Self {
        let mut a = [c(0.0, 0.0); 4];
        a[GG] = c(FRAC_1_SQRT_2, 0.0);
        a[EE] = c(-FRAC_1_SQRT_2, 0.0);
        Self::from_pure(a).expect("normalised")
    }

    pub fn maximally_mixed() -> Self {
        Self {
            rho: DensityMatrix::maximally_mixed(4),
        }
    }

    pub fn density(&self) -> &DensityMatrix {
        &self.rho
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        self.rho.matrix()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.rho.get(i, j)
    }

    pub fn populations(&self) -> [f64; 4] {
        let p = self.rho.populations();
        [p[0], p[1], p[2], p[3]]
    }

    /// `½[ρ_ge + ρ_eg + 2 Re ρ_eg,ge]`, the overlap with `|Ψ⁺⟩`.
    pub fn fidelity(&self) -> f64 {
        0.5 * (self.rho.population(GE) + self.rho.population(EG) + 2.0 * self.get(EG, GE).re)
    }

    /// Expectation of `p_gg + p_ee − p_eg − p_ge`.
    pub fn parity(&self) -> f64 {
        (0..4).map(|i| PARITY[i] * self.rho.population(i)).sum()
    }

    pub fn rotate(&self, pulse: &RotationPulse) -> Self {
        let u = pulse.unitary();
        let m = &u * self.matrix() * u.adjoint();
        Self {
            rho: DensityMatrix::from_numeric(m).expect("unitary conjugation preserves density matrices"),
        }
    }

    pub fn apply(&self, sequence: &[RotationPulse]) -> Self {
        sequence.iter().fold(self.clone(), |s, p| s.rotate(p))
    }
}

/// `R(θ, φ) = exp[−i(θ/2)(cos φ S_x + sin φ S_y)]` acting on both atoms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationPulse {
    theta: f64,
    phi: f64,
}

impl RotationPulse {
    pub fn new(theta: f64, phi: f64) -> Result<Self, EntangleError> {
        if !(theta.is_finite() && theta >= 0.0) {
            return Err(EntangleError::Parameter { name: "theta", value: theta });
        }
        if !phi.is_finite() {
            return Err(EntangleError::Parameter { name: "phi", value: phi });
        }
        Ok(Self { theta, phi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Single-atom rotation in the `(g, e)` basis.
    pub fn single_atom(&self) -> Matrix2<Complex64> {
        let (s, co) = (0.5 * self.theta).sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        // n·σ with σ_x = [[0,1],[1,0]], σ_y = [[0,i],[−i,0]]
        let off = c(cp, sp);
        let n_sigma = Matrix2::new(c(0.0, 0.0), off, off.conj(), c(0.0, 0.0));
        Matrix2::identity() * c(co, 0.0) - n_sigma * c(0.0, s)
    }

    /// `r ⊗ r`, since the collective generators commute between atoms.
    pub fn unitary(&self) -> DMatrix<Complex64> {
        let r = self.single_atom();
        DMatrix::from_fn(4, 4, |i, j| r[(i / 2, j / 2)] * r[(i % 2, j % 2)])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PulseSequence {
    /// `R(π/2, φ)`.
    Single,
    /// `R(π/2, π/2) R(π/2, φ)`.
    Double,
}

impl PulseSequence {
    pub fn pulses(&self, phi: f64) -> Vec<RotationPulse> {
        let half = std::f64::consts::FRAC_PI_2;
        let first = RotationPulse { theta: half, phi };
        match self {
            PulseSequence::Single => vec![first],
            PulseSequence::Double => vec![first, RotationPulse { theta: half, phi: half }],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PulseSequence::Single => "single",
            PulseSequence::Double => "double",
        }
    }
}

/// Parity curve and its fit to `offset + a cos 2φ + b sin 2φ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanFit {
    pub phases: Vec<f64>,
    pub parity: Vec<f64>,
    pub offset: f64,
    pub cos_amplitude: f64,
    pub sin_amplitude: f64,
    /// `√(a² + b²)`.
    pub contrast: f64,
}

pub fn parity_scan(state: &TwoQubitState, sequence: PulseSequence, phases: &[f64]) -> Result<ScanFit, EntangleError> {
    if phases.is_empty() {
        return Err(EntangleError::EmptyScan);
    }
    let parity: Vec<f64> = phases.iter().map(|&phi| state.apply(&sequence.pulses(phi)).parity()).collect();
    let (offset, a, b) = fit_harmonic(phases, &parity);
    Ok(ScanFit {
        phases: phases.to_vec(),
        parity,
        offset,
        cos_amplitude: a,
        sin_amplitude: b,
        contrast: a.hypot(b),
    })
}

/// Least squares for `offset + a cos 2φ + b sin 2φ`; degenerate grids fall
/// back to the mean with zero amplitudes.
fn fit_harmonic(phases: &[f64], values: &[f64]) -> (f64, f64, f64) {
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let mut ata = Matrix3::<f64>::zeros();
    let mut atb = Vector3::<f64>::zeros();
    for (&phi, &y) in phases.iter().zip(values) {
        let row = Vector3::new(1.0, (2.0 * phi).cos(), (2.0 * phi).sin());
        ata += row * row.transpose();
        atb += row * y;
    }
    let det = ata.determinant();
    if det.abs() < 1e-12 * (phases.len() as f64).powi(3) {
        return (mean, 0.0, 0.0);
    }
    match ata.lu().solve(&atb) {
        Some(x) => (x[0], x[1], x[2]),
        None => (mean, 0.0, 0.0),
    }
}
