//! Closed-form success probabilities and fidelities of the two protocols.

use super::{check_unit, EntangleError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinglePhoton {
    /// `(1 − p_e)/(1 − η p_e)`.
    pub fidelity: f64,
    /// `2 η p_e (1 − η p_e)`.
    pub success_probability: f64,
}

/// Fidelity and success probability of the single-photon protocol.
///
/// At `p_e = 1` both atoms are always excited and the fidelity is 0.
pub fn analytic_single_photon(p_e: f64, eta: f64) -> Result<SinglePhoton, EntangleError> {
    check_unit("p_e", p_e)?;
    check_unit("eta", eta)?;
    let fidelity = if p_e == 1.0 { 0.0 } else { (1.0 - p_e) / (1.0 - eta * p_e) };
    Ok(SinglePhoton {
        fidelity,
        success_probability: 2.0 * eta * p_e * (1.0 - eta * p_e),
    })
}

/// Two-photon protocol success probability in both common conventions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPhoton {
    pub eta_squared: f64,
    /// Counting both detector coincidence patterns.
    pub twice_eta_squared: f64,
}

pub fn analytic_two_photon(eta: f64) -> Result<TwoPhoton, EntangleError> {
    check_unit("eta", eta)?;
    Ok(TwoPhoton {
        eta_squared: eta * eta,
        twice_eta_squared: 2.0 * eta * eta,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuccessRatio {
    /// Excitation probability giving the target fidelity.
    pub p_e: f64,
    /// `P_s,1 / P_s,2` with `P_s,2 = η²`.
    pub ratio: f64,
}

/// Speed-up of the single-photon over the two-photon protocol at equal
/// fidelity.
pub fn success_ratio(eta: f64, target_fidelity: f64) -> Result<SuccessRatio, EntangleError> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(EntangleError::Parameter { name: "eta", value: eta });
    }
    if !(target_fidelity > 0.0 && target_fidelity <= 1.0) {
        return Err(EntangleError::Parameter {
            name: "target_fidelity",
            value: target_fidelity,
        });
    }
    let p_e = (1.0 - target_fidelity) / (1.0 - eta * target_fidelity);
    if !(0.0..=1.0).contains(&p_e) {
        return Err(EntangleError::InfeasibleFidelity(target_fidelity));
    }
    let single = 2.0 * eta * p_e * (1.0 - eta * p_e);
    Ok(SuccessRatio {
        p_e,
        ratio: single / (eta * eta),
    })
}

/// Heralded events per minute at `duty_cycle` trials per second.
pub fn events_per_minute(success_probability: f64, duty_cycle: f64) -> f64 {
    success_probability * duty_cycle * 60.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionStage {
    pub label: String,
    pub efficiency: f64,
}

impl DetectionStage {
    pub fn new(label: &str, efficiency: f64) -> Self {
        Self {
            label: label.to_string(),
            efficiency,
        }
    }
}

/// Overall detection efficiency η as the product of all stages.
pub fn detection_chain_efficiency(stages: &[DetectionStage]) -> Result<f64, EntangleError> {
    let mut eta = 1.0;
    for s in stages {
        check_unit("stage efficiency", s.efficiency)?;
        eta *= s.efficiency;
    }
    Ok(eta)
}

/// The experiment's quoted loss budget.
pub fn experiment_detection_budget() -> Vec<DetectionStage> {
    vec![
        DetectionStage::new("collection lens", 0.04),
        DetectionStage::new("single-mode fiber coupling", 0.1),
        DetectionStage::new("APD efficiency", 0.6),
        DetectionStage::new("polarization filtering", 0.5),
        DetectionStage::new("decay back to g", 0.66),
    ]
}
