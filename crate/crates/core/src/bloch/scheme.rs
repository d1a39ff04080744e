//! Level schemes: states, spontaneous decays, laser couplings, dephasing.

use std::collections::{HashMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::BlochError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarization {
    Pi,
    SigmaPlus,
    SigmaMinus,
    #[default]
    Unspecified,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub label: String,
    /// Shift of the level in MHz (Zeeman or any other static shift).
    pub zeeman_shift: f64,
}

/// Spontaneous decay `upper → lower` with population rate `rate` (MHz).
#[derive(Debug, Clone, PartialEq)]
pub struct Decay {
    pub upper: usize,
    pub lower: usize,
    pub rate: f64,
    pub polarization: Polarization,
}

/// Laser coupling between two levels.
///
/// `rabi` is the off-diagonal Hamiltonian element (half the Rabi frequency)
/// and `detuning` is the laser detuning from the unshifted transition; the
/// level shifts are subtracted from it.
#[derive(Debug, Clone, PartialEq)]
pub struct Coupling {
    pub lower: usize,
    pub upper: usize,
    pub rabi: f64,
    /// Phase of the coupling (rad): `H_ul = rabi·e^{iφ}`. Carries the sign
    /// of Clebsch-Gordan and polarisation factors.
    pub phase: f64,
    pub detuning: f64,
    pub polarization: Polarization,
    /// Name of the laser driving this coupling, used to select probe
    /// components.
    pub laser: String,
}

/// Extra decay of the coherence between two levels at `rate` (MHz).
#[derive(Debug, Clone, PartialEq)]
pub struct Dephasing {
    pub levels: (usize, usize),
    pub rate: f64,
}

/// Incoherent population transfer `from → to`, e.g. optical pumping by
/// beams not otherwise modelled. Unlike [`Decay`] it may run in both
/// directions between two levels.
#[derive(Debug, Clone, PartialEq)]
pub struct Pumping {
    pub from: usize,
    pub to: usize,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LevelScheme {
    pub levels: Vec<Level>,
    pub decays: Vec<Decay>,
    pub couplings: Vec<Coupling>,
    pub dephasings: Vec<Dephasing>,
    pub pumping: Vec<Pumping>,
}

fn rate_ok(what: &'static str, value: f64) -> Result<(), BlochError> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(BlochError::InvalidRate { what, value })
    }
}

impl LevelScheme {
    pub fn dim(&self) -> usize {
        self.levels.len()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.levels.iter().position(|l| l.label == label)
    }

    /// Checks every structural invariant of the scheme.
    pub fn validate(&self) -> Result<(), BlochError> {
        let n = self.dim();
        if n == 0 {
            return Err(BlochError::EmptyScheme);
        }
        let mut seen = HashSet::new();
        for level in &self.levels {
            if !seen.insert(level.label.as_str()) {
                return Err(BlochError::DuplicateLabel(level.label.clone()));
            }
            if !level.zeeman_shift.is_finite() {
                return Err(BlochError::NonFinite("zeeman_shift"));
            }
        }
        let check = |i: usize| {
            if i < n {
                Ok(())
            } else {
                Err(BlochError::LevelIndex { index: i, dim: n })
            }
        };
        for d in &self.decays {
            check(d.upper)?;
            check(d.lower)?;
            if d.upper == d.lower {
                return Err(BlochError::SelfTransition(d.upper));
            }
            rate_ok("decay rate", d.rate)?;
        }
        for c in &self.couplings {
            check(c.lower)?;
            check(c.upper)?;
            if c.upper == c.lower {
                return Err(BlochError::SelfTransition(c.upper));
            }
            rate_ok("rabi frequency", c.rabi)?;
            if !c.detuning.is_finite() || !c.phase.is_finite() {
                return Err(BlochError::NonFinite("detuning"));
            }
        }
        for d in &self.dephasings {
            check(d.levels.0)?;
            check(d.levels.1)?;
            if d.levels.0 == d.levels.1 {
                return Err(BlochError::SelfTransition(d.levels.0));
            }
            rate_ok("dephasing rate", d.rate)?;
        }
        for p in &self.pumping {
            check(p.from)?;
            check(p.to)?;
            if p.from == p.to {
                return Err(BlochError::SelfTransition(p.from));
            }
            rate_ok("pumping rate", p.rate)?;
        }
        self.check_decays_acyclic()
    }

    fn check_decays_acyclic(&self) -> Result<(), BlochError> {
        let n = self.dim();
        let mut indegree = vec![0usize; n];
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
        for d in &self.decays {
            out[d.upper].push(d.lower);
            indegree[d.lower] += 1;
        }
        let mut queue: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
        let mut visited = 0;
        while let Some(i) = queue.pop() {
            visited += 1;
            for &j in &out[i] {
                indegree[j] -= 1;
                if indegree[j] == 0 {
                    queue.push(j);
                }
            }
        }
        if visited == n {
            Ok(())
        } else {
            Err(BlochError::DecayCycle)
        }
    }

    /// Total population decay rate out of each level (decays and pumping).
    pub fn outgoing_rates(&self) -> Vec<f64> {
        let mut rates = vec![0.0; self.dim()];
        for d in &self.decays {
            rates[d.upper] += d.rate;
        }
        for p in &self.pumping {
            rates[p.from] += p.rate;
        }
        rates
    }

    /// Indices of the couplings driven by `laser`.
    pub fn couplings_of(&self, laser: &str) -> Vec<usize> {
        self.couplings
            .iter()
            .enumerate()
            .filter(|(_, c)| c.laser == laser)
            .map(|(i, _)| i)
            .collect()
    }

    /// Sets the detuning of every coupling driven by `laser`.
    pub fn set_laser_detuning(&mut self, laser: &str, detuning: f64) {
        for c in self.couplings.iter_mut().filter(|c| c.laser == laser) {
            c.detuning = detuning;
        }
    }

    /// Scales the coupling strength of every component of `laser`.
    pub fn scale_laser(&mut self, laser: &str, factor: f64) {
        for c in self.couplings.iter_mut().filter(|c| c.laser == laser) {
            c.rabi *= factor;
        }
    }

    /// Same scheme with levels reordered: new level `i` is old level
    /// `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut inverse = vec![0; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new;
        }
        let m = |i: usize| inverse[i];
        Self {
            levels: perm.iter().map(|&old| self.levels[old].clone()).collect(),
            decays: self
                .decays
                .iter()
                .map(|d| Decay {
                    upper: m(d.upper),
                    lower: m(d.lower),
                    ..d.clone()
                })
                .collect(),
            couplings: self
                .couplings
                .iter()
                .map(|c| Coupling {
                    lower: m(c.lower),
                    upper: m(c.upper),
                    ..c.clone()
                })
                .collect(),
            dephasings: self
                .dephasings
                .iter()
                .map(|d| Dephasing {
                    levels: (m(d.levels.0), m(d.levels.1)),
                    rate: d.rate,
                })
                .collect(),
            pumping: self
                .pumping
                .iter()
                .map(|p| Pumping {
                    from: m(p.from),
                    to: m(p.to),
                    rate: p.rate,
                })
                .collect(),
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self, BlochError> {
        let file: SchemeFile = toml::from_str(text).map_err(|e| BlochError::Parse(e.to_string()))?;
        file.resolve()
    }

    pub fn from_file(path: &Path) -> Result<Self, BlochError> {
        let text = std::fs::read_to_string(path).map_err(|e| BlochError::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        let label = |i: usize| self.levels[i].label.clone();
        let file = SchemeFile {
            levels: self
                .levels
                .iter()
                .map(|l| LevelEntry {
                    label: l.label.clone(),
                    zeeman: l.zeeman_shift,
                })
                .collect(),
            decays: self
                .decays
                .iter()
                .map(|d| DecayEntry {
                    upper: label(d.upper),
                    lower: label(d.lower),
                    rate: d.rate,
                    polarization: d.polarization,
                })
                .collect(),
            couplings: self
                .couplings
                .iter()
                .map(|c| CouplingEntry {
                    lower: label(c.lower),
                    upper: label(c.upper),
                    rabi: c.rabi,
                    phase: c.phase,
                    detuning: c.detuning,
                    polarization: c.polarization,
                    laser: c.laser.clone(),
                })
                .collect(),
            dephasings: self
                .dephasings
                .iter()
                .map(|d| DephasingEntry {
                    levels: [label(d.levels.0), label(d.levels.1)],
                    rate: d.rate,
                })
                .collect(),
            pumping: self
                .pumping
                .iter()
                .map(|p| PumpingEntry {
                    from: label(p.from),
                    to: label(p.to),
                    rate: p.rate,
                })
                .collect(),
        };
        toml::to_string(&file).expect("scheme serialises")
    }
}

// On-disk form: levels referenced by label.

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SchemeFile {
    levels: Vec<LevelEntry>,
    #[serde(default)]
    decays: Vec<DecayEntry>,
    #[serde(default)]
    couplings: Vec<CouplingEntry>,
    #[serde(default)]
    dephasings: Vec<DephasingEntry>,
    #[serde(default)]
    pumping: Vec<PumpingEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LevelEntry {
    label: String,
    #[serde(default)]
    zeeman: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DecayEntry {
    upper: String,
    lower: String,
    rate: f64,
    #[serde(default)]
    polarization: Polarization,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CouplingEntry {
    lower: String,
    upper: String,
    rabi: f64,
    #[serde(default)]
    phase: f64,
    #[serde(default)]
    detuning: f64,
    #[serde(default)]
    polarization: Polarization,
    #[serde(default = "default_laser")]
    laser: String,
}

fn default_laser() -> String {
    "probe".to_string()
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DephasingEntry {
    levels: [String; 2],
    rate: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PumpingEntry {
    from: String,
    to: String,
    rate: f64,
}

impl SchemeFile {
    fn resolve(self) -> Result<LevelScheme, BlochError> {
        let index: HashMap<&str, usize> = self
            .levels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.label.as_str(), i))
            .collect();
        let find = |label: &str| index.get(label).copied().ok_or_else(|| BlochError::UnknownLevel(label.to_string()));
        let scheme = LevelScheme {
            levels: self
                .levels
                .iter()
                .map(|l| Level {
                    label: l.label.clone(),
                    zeeman_shift: l.zeeman,
                })
                .collect(),
            decays: self
                .decays
                .iter()
                .map(|d| {
                    Ok(Decay {
                        upper: find(&d.upper)?,
                        lower: find(&d.lower)?,
                        rate: d.rate,
                        polarization: d.polarization,
                    })
                })
                .collect::<Result<_, BlochError>>()?,
            couplings: self
                .couplings
                .iter()
                .map(|c| {
                    Ok(Coupling {
                        lower: find(&c.lower)?,
                        upper: find(&c.upper)?,
                        rabi: c.rabi,
                        phase: c.phase,
                        detuning: c.detuning,
                        polarization: c.polarization,
                        laser: c.laser.clone(),
                    })
                })
                .collect::<Result<_, BlochError>>()?,
            dephasings: self
                .dephasings
                .iter()
                .map(|d| {
                    Ok(Dephasing {
                        levels: (find(&d.levels[0])?, find(&d.levels[1])?),
                        rate: d.rate,
                    })
                })
                .collect::<Result<_, BlochError>>()?,
            pumping: self
                .pumping
                .iter()
                .map(|p| {
                    Ok(Pumping {
                        from: find(&p.from)?,
                        to: find(&p.to)?,
                        rate: p.rate,
                    })
                })
                .collect::<Result<_, BlochError>>()?,
        };
        scheme.validate()?;
        Ok(scheme)
    }
}
