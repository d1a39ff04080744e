//! Built-in level schemes.
//!
//! The Ba⁺ branching fractions and Zeeman-resolved Clebsch-Gordan weights
//! are preset data from standard angular-momentum algebra and published
//! atomic constants.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Serialize};

use super::angular::dipole_factor;
use super::{Coupling, Decay, Dephasing, Level, LevelScheme, Polarization, Pumping};

/// Bohr magneton in MHz per gauss.
pub const BOHR_MHZ_PER_GAUSS: f64 = 1.399_624_5;

/// Ba⁺ P₁/₂ total decay rate (MHz).
pub const BA_P_LINEWIDTH: f64 = 20.1;
/// Fraction of P₁/₂ decays ending in S₁/₂; the rest go to D₃/₂.
pub const BA_P_TO_S_BRANCHING: f64 = 0.732;

const G_S: f64 = 2.0;
const G_P: f64 = 2.0 / 3.0;
const G_D: f64 = 4.0 / 5.0;

fn level(label: &str, shift: f64) -> Level {
    Level {
        label: label.to_string(),
        zeeman_shift: shift,
    }
}

fn coupling(lower: usize, upper: usize, amplitude: f64, detuning: f64, pol: Polarization, laser: &str) -> Coupling {
    Coupling {
        lower,
        upper,
        rabi: amplitude.abs(),
        phase: if amplitude < 0.0 { PI } else { 0.0 },
        detuning,
        polarization: pol,
        laser: laser.to_string(),
    }
}

fn polarization_of(q2: i32) -> Polarization {
    match q2 {
        2 => Polarization::SigmaPlus,
        -2 => Polarization::SigmaMinus,
        _ => Polarization::Pi,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TwoLevelPreset {
    /// Coherence decay rate γ (HWHM of the amplitude response, MHz).
    pub gamma: f64,
    pub probe_rabi: f64,
    pub probe_detuning: f64,
}

impl Default for TwoLevelPreset {
    fn default() -> Self {
        Self {
            gamma: 5.5,
            probe_rabi: 1e-3,
            probe_detuning: 0.0,
        }
    }
}

/// Ground `g` and excited `e` with population decay `2γ`.
pub fn two_level(p: &TwoLevelPreset) -> LevelScheme {
    LevelScheme {
        levels: vec![level("g", 0.0), level("e", 0.0)],
        decays: vec![Decay {
            upper: 1,
            lower: 0,
            rate: 2.0 * p.gamma,
            polarization: Polarization::Unspecified,
        }],
        couplings: vec![coupling(0, 1, p.probe_rabi, p.probe_detuning, Polarization::Unspecified, "probe")],
        ..Default::default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LambdaPreset {
    /// Optical coherence decay rate γ (MHz).
    pub gamma: f64,
    /// Ground-state coherence decay rate γ₀ (MHz).
    pub gamma0: f64,
    /// Control coupling Ω_r (Hamiltonian element, MHz).
    pub control_rabi: f64,
    pub control_detuning: f64,
    pub probe_rabi: f64,
    /// Probe detuning Δ_g (MHz).
    pub probe_detuning: f64,
    /// Fraction of excited-state decays ending in the probe ground state.
    pub branching_probe: f64,
}

impl Default for LambdaPreset {
    fn default() -> Self {
        Self {
            gamma: 10.0,
            gamma0: 0.0,
            control_rabi: 5.0,
            control_detuning: 0.0,
            probe_rabi: 1e-3,
            probe_detuning: 0.0,
            branching_probe: 0.5,
        }
    }
}

/// Λ scheme: probe on `g ↔ e` (laser "probe"), control on `r ↔ e` (laser
/// "control"), ground coherence dephased at γ₀.
///
/// The two-photon detuning of the analytic Λ response is the control
/// detuning minus the probe detuning.
pub fn lambda(p: &LambdaPreset) -> LevelScheme {
    let total = 2.0 * p.gamma;
    LevelScheme {
        levels: vec![level("g", 0.0), level("r", 0.0), level("e", 0.0)],
        decays: vec![
            Decay {
                upper: 2,
                lower: 0,
                rate: total * p.branching_probe,
                polarization: Polarization::Unspecified,
            },
            Decay {
                upper: 2,
                lower: 1,
                rate: total * (1.0 - p.branching_probe),
                polarization: Polarization::Unspecified,
            },
        ],
        couplings: vec![
            coupling(0, 2, p.probe_rabi, p.probe_detuning, Polarization::Unspecified, "probe"),
            coupling(1, 2, p.control_rabi, p.control_detuning, Polarization::Unspecified, "control"),
        ],
        dephasings: vec![Dephasing {
            levels: (0, 1),
            rate: p.gamma0,
        }],
        ..Default::default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Ba4LevelPreset {
    /// Optical coherence decay rate γ (MHz).
    pub gamma: f64,
    /// Splitting Δ_B of the σ± resonances from line centre (MHz).
    pub delta_b: f64,
    /// Population of the σ⁻ ground state S₁/₂(+½).
    pub rho_minus: f64,
    /// Total incoherent pumping rate between the ground states (MHz).
    pub pumping_rate: f64,
    pub probe_rabi: f64,
    pub probe_detuning: f64,
}

impl Default for Ba4LevelPreset {
    fn default() -> Self {
        Self {
            gamma: 5.5,
            delta_b: 9.0,
            rho_minus: 0.9,
            pumping_rate: 0.01,
            probe_rabi: 1e-3,
            probe_detuning: 0.0,
        }
    }
}

/// S₁/₂ and P₁/₂ Zeeman sublevels probed by light polarised perpendicular
/// to the field. The ground-state populations are held at `ρ₋ : ρ₊` by
/// incoherent pumping standing in for the cooling and repumping beams.
///
/// Levels: `S-1/2, S+1/2, P-1/2, P+1/2`; the σ⁺ line sits at `+Δ_B`.
pub fn ba138_4level(p: &Ba4LevelPreset) -> LevelScheme {
    // σ⁺ line shift: Δ_B = (g_S + g_P)·u/2
    let u = p.delta_b / (0.5 * (G_S + G_P));
    let s = |m2: i32| 0.5 * m2 as f64 * G_S * u;
    let pz = |m2: i32| 0.5 * m2 as f64 * G_P * u;
    let levels = vec![
        level("S-1/2", s(-1)),
        level("S+1/2", s(1)),
        level("P-1/2", pz(-1)),
        level("P+1/2", pz(1)),
    ];
    let total = 2.0 * p.gamma;
    let mut decays = Vec::new();
    for (pi, pm) in [(2usize, -1i32), (3, 1)] {
        for (si, sm) in [(0usize, -1i32), (1, 1)] {
            let w = dipole_factor(1, sm, 1, pm).powi(2);
            if w > 0.0 {
                decays.push(Decay {
                    upper: pi,
                    lower: si,
                    rate: total * w,
                    polarization: polarization_of(pm - sm),
                });
            }
        }
    }
    let couplings = vec![
        coupling(0, 3, -FRAC_1_SQRT_2 * dipole_factor(1, -1, 1, 1) * p.probe_rabi, p.probe_detuning, Polarization::SigmaPlus, "probe"),
        coupling(1, 2, FRAC_1_SQRT_2 * dipole_factor(1, 1, 1, -1) * p.probe_rabi, p.probe_detuning, Polarization::SigmaMinus, "probe"),
    ];
    let rho_plus = 1.0 - p.rho_minus;
    LevelScheme {
        levels,
        decays,
        couplings,
        dephasings: Vec::new(),
        pumping: vec![
            Pumping {
                from: 0,
                to: 1,
                rate: p.pumping_rate * p.rho_minus,
            },
            Pumping {
                from: 1,
                to: 0,
                rate: p.pumping_rate * rho_plus,
            },
        ],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Ba8LevelPreset {
    /// P₁/₂ total decay rate (MHz).
    pub linewidth: f64,
    pub branching_s: f64,
    pub b_field_gauss: f64,
    /// 493 nm probe amplitude (Hamiltonian element before angular factors).
    pub probe_rabi: f64,
    pub probe_detuning: f64,
    /// 650 nm repumper amplitude.
    pub repump_rabi: f64,
    pub repump_detuning: f64,
    /// Angle between the repumper polarisation and the magnetic field (rad).
    pub repump_angle: f64,
    /// Relative linewidth of the two lasers, applied as S-D dephasing (MHz).
    pub laser_linewidth: f64,
}

impl Default for Ba8LevelPreset {
    fn default() -> Self {
        Self {
            linewidth: BA_P_LINEWIDTH,
            branching_s: BA_P_TO_S_BRANCHING,
            b_field_gauss: 4.8,
            probe_rabi: 0.5,
            probe_detuning: 0.0,
            repump_rabi: 5.0,
            repump_detuning: 0.0,
            repump_angle: PI / 2.0,
            laser_linewidth: 0.0,
        }
    }
}

/// Doubled `m` values of the 8-level manifold, in level order.
const BA8_LEVELS: [(&str, i32, i32); 8] = [
    ("S-1/2", 1, -1),
    ("S+1/2", 1, 1),
    ("P-1/2", 1, -1),
    ("P+1/2", 1, 1),
    ("D-3/2", 3, -3),
    ("D-1/2", 3, -1),
    ("D+1/2", 3, 1),
    ("D+3/2", 3, 3),
];

/// S₁/₂, P₁/₂ and D₃/₂ Zeeman sublevels of ¹³⁸Ba⁺ with the 493 nm probe
/// (laser "probe", polarised perpendicular to the field) and the 650 nm
/// repumper (laser "repump", polarisation at `repump_angle` to the field).
pub fn ba138_8level(p: &Ba8LevelPreset) -> LevelScheme {
    let u = BOHR_MHZ_PER_GAUSS * p.b_field_gauss;
    let g = |i: usize| match i {
        0 | 1 => G_S,
        2 | 3 => G_P,
        _ => G_D,
    };
    let levels = BA8_LEVELS
        .iter()
        .enumerate()
        .map(|(i, &(label, _, m2))| level(label, 0.5 * m2 as f64 * g(i) * u))
        .collect();
    let s_idx = [0usize, 1];
    let p_idx = [2usize, 3];
    let d_idx = [4usize, 5, 6, 7];

    let mut decays = Vec::new();
    for &pi in &p_idx {
        let (_, ju, mu) = BA8_LEVELS[pi];
        for (&li, branch) in s_idx.iter().map(|i| (i, p.branching_s)).chain(d_idx.iter().map(|i| (i, 1.0 - p.branching_s))) {
            let (_, jl, ml) = BA8_LEVELS[li];
            let w = dipole_factor(jl, ml, ju, mu).powi(2);
            if w > 0.0 {
                decays.push(Decay {
                    upper: pi,
                    lower: li,
                    rate: p.linewidth * branch * w,
                    polarization: polarization_of(mu - ml),
                });
            }
        }
    }

    // spherical components of the field polarisation vector
    let probe_amp = |q2: i32| match q2 {
        2 => -FRAC_1_SQRT_2,
        -2 => FRAC_1_SQRT_2,
        _ => 0.0,
    };
    let (sa, ca) = p.repump_angle.sin_cos();
    let repump_amp = |q2: i32| match q2 {
        2 => -sa * FRAC_1_SQRT_2,
        -2 => sa * FRAC_1_SQRT_2,
        _ => ca,
    };

    let mut couplings = Vec::new();
    let mut add = |lowers: &[usize], amp: &dyn Fn(i32) -> f64, strength: f64, detuning: f64, laser: &str| {
        for &li in lowers {
            let (_, jl, ml) = BA8_LEVELS[li];
            for &pi in &p_idx {
                let (_, ju, mu) = BA8_LEVELS[pi];
                let q2 = mu - ml;
                let a = amp(q2) * dipole_factor(jl, ml, ju, mu) * strength;
                if a.abs() > 1e-15 {
                    couplings.push(coupling(li, pi, a, detuning, polarization_of(q2), laser));
                }
            }
        }
    };
    add(&s_idx, &probe_amp, p.probe_rabi, p.probe_detuning, "probe");
    add(&d_idx, &repump_amp, p.repump_rabi, p.repump_detuning, "repump");

    let mut dephasings = Vec::new();
    if p.laser_linewidth > 0.0 {
        for &si in &s_idx {
            for &di in &d_idx {
                dephasings.push(Dephasing {
                    levels: (si, di),
                    rate: p.laser_linewidth,
                });
            }
        }
    }

    LevelScheme {
        levels,
        decays,
        couplings,
        dephasings,
        pumping: Vec::new(),
    }
}
