//! Seeded Monte-Carlo realisation of the heralding protocol and readout.
//!
//! Every trial draws from its own ChaCha8 stream `(seed, trial index)`, and
//! tallies are integer sums, so the result does not depend on how rayon
//! splits the work.
//!
//! Each herald is measured once. Its measurement slot is drawn uniformly
//! from `{population readout, scan phase 0, …, scan phase m−1}`; a scan slot
//! applies the pulse sequence before readout. Readout reports the number of
//! excited atoms, each atom misidentified with probability `1 − readout_fidelity`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson};
use rayon::prelude::*;

use super::herald::{herald_project, joint_state, LaserDetectorPhases, ProtocolParams};
use super::state::{PulseSequence, TwoQubitState, EE, EG, GE, GG};
use super::{analytic::events_per_minute, check_unit, EntangleError};

const BATCH: u64 = 8192;

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloConfig {
    pub n_trials: u64,
    pub seed: u64,
    /// Phases of the parity scan, radians.
    pub scan_phases: Vec<f64>,
    pub sequence: PulseSequence,
    /// Probability of identifying one atom's state correctly.
    pub readout_fidelity: f64,
}

impl MonteCarloConfig {
    pub fn new(n_trials: u64, seed: u64) -> Self {
        Self {
            n_trials,
            seed,
            scan_phases: (0..8).map(|k| k as f64 * std::f64::consts::PI / 8.0).collect(),
            sequence: PulseSequence::Double,
            readout_fidelity: 0.98,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParityPoint {
    pub phi: f64,
    pub shots: u64,
    /// Mean measured parity, `NaN` without shots.
    pub parity: f64,
    /// Binomial standard error of `parity`.
    pub std_error: f64,
    /// Analytic expectation including readout errors.
    pub expected: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloStats {
    pub n_trials: u64,
    pub heralds: u64,
    pub herald_probability: f64,
    pub herald_std_error: f64,
    pub events_per_minute: f64,
    /// Heralds whose true state was `gg`, one excitation, `ee`.
    pub true_counts: [u64; 3],
    /// Heralds with a single excitation in the coherent superposition.
    pub coherent_singles: u64,
    /// Population readouts reporting 0, 1, 2 excited atoms.
    pub readout_counts: [u64; 3],
    pub parity: Vec<ParityPoint>,
}

impl MonteCarloStats {
    /// Fractions of `true_counts`, zero without heralds.
    pub fn true_populations(&self) -> [f64; 3] {
        fractions(&self.true_counts)
    }

    pub fn readout_populations(&self) -> [f64; 3] {
        fractions(&self.readout_counts)
    }
}

fn fractions(c: &[u64; 3]) -> [f64; 3] {
    let n: u64 = c.iter().sum();
    if n == 0 {
        return [0.0; 3];
    }
    c.map(|k| k as f64 / n as f64)
}

/// Probabilities of reading 0, 1, 2 excited atoms from `state` with
/// per-atom readout fidelity `f`.
pub fn expected_readout(state: &TwoQubitState, readout_fidelity: f64) -> [f64; 3] {
    let p = state.populations();
    let q = 1.0 - readout_fidelity;
    let (gg, one, ee) = (p[GG], p[GE] + p[EG], p[EE]);
    let keep = (1.0 - q).powi(2);
    let mix = q * (1.0 - q);
    [
        gg * keep + one * mix + ee * q * q,
        2.0 * (gg + ee) * mix + one * (keep + q * q),
        gg * q * q + one * mix + ee * keep,
    ]
}

#[derive(Debug, Clone, Default)]
struct Tally {
    heralds: u64,
    true_counts: [u64; 3],
    coherent: u64,
    readout: [u64; 3],
    // per scan phase: shots, even-parity outcomes
    scan: Vec<[u64; 2]>,
}

impl Tally {
    fn new(m: usize) -> Self {
        Self {
            scan: vec![[0; 2]; m],
            ..Default::default()
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.heralds += other.heralds;
        self.coherent += other.coherent;
        for k in 0..3 {
            self.true_counts[k] += other.true_counts[k];
            self.readout[k] += other.readout[k];
        }
        for (a, b) in self.scan.iter_mut().zip(other.scan) {
            a[0] += b[0];
            a[1] += b[1];
        }
        self
    }
}

enum Conditional {
    Ground,
    Coherent(f64),
    Mixed,
    Double,
}

pub fn monte_carlo(params: &ProtocolParams, config: &MonteCarloConfig) -> Result<MonteCarloStats, EntangleError> {
    params.validate()?;
    check_unit("readout_fidelity", config.readout_fidelity)?;
    if config.n_trials == 0 {
        return Err(EntangleError::NoTrials);
    }
    let d = params.dark_mean();
    let darks = if d > 0.0 { Some(Poisson::new(d).map_err(|_| EntangleError::Parameter { name: "dark mean", value: d })?) } else { None };
    let jitter = Normal::new(0.0, params.phase_jitter_sigma)
        .map_err(|_| EntangleError::Parameter { name: "phase_jitter_sigma", value: params.phase_jitter_sigma })?;
    let kappa = params.recoil_coherence * params.dephasing_coherence;
    let q = 1.0 - config.readout_fidelity;
    let m = config.scan_phases.len();
    let pulses: Vec<_> = config.scan_phases.iter().map(|&phi| config.sequence.pulses(phi)).collect();
    let mixed = {
        let mut a = TwoQubitState::basis(EG).density().matrix().clone();
        a += TwoQubitState::basis(GE).density().matrix();
        TwoQubitState::from_matrix(a * num_complex::Complex64::new(0.5, 0.0)).expect("valid mixture")
    };

    let trial = |index: u64, tally: &mut Tally| {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(index);
        let ex_a = rng.random_bool(params.p_e);
        let ex_b = rng.random_bool(params.p_e);
        let det_a = ex_a && rng.random_bool(params.eta);
        let det_b = ex_b && rng.random_bool(params.eta);
        let n_dark = darks.as_ref().map_or(0, |p| p.sample(&mut rng) as u64);
        if det_a as u64 + det_b as u64 + n_dark != 1 {
            return;
        }
        let cond = match (ex_a, ex_b) {
            (false, false) => Conditional::Ground,
            (true, true) => Conditional::Double,
            _ if n_dark == 0 && rng.random_bool(kappa) => Conditional::Coherent(jitter.sample(&mut rng)),
            _ => Conditional::Mixed,
        };
        tally.heralds += 1;
        tally.true_counts[match cond {
            Conditional::Ground => 0,
            Conditional::Double => 2,
            _ => 1,
        }] += 1;
        if matches!(cond, Conditional::Coherent(_)) {
            tally.coherent += 1;
        }
        let slot = rng.random_range(0..=m);
        let state = match cond {
            Conditional::Ground => TwoQubitState::basis(GG),
            Conditional::Double => TwoQubitState::basis(EE),
            Conditional::Coherent(phi) => TwoQubitState::psi(phi),
            Conditional::Mixed => mixed.clone(),
        };
        let state = if slot == 0 { state } else { state.apply(&pulses[slot - 1]) };
        let excited = sample_readout(&state, q, &mut rng);
        if slot == 0 {
            tally.readout[excited] += 1;
        } else {
            let s = &mut tally.scan[slot - 1];
            s[0] += 1;
            s[1] += (excited != 1) as u64;
        }
    };

    let batches = config.n_trials.div_ceil(BATCH);
    let tally = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut t = Tally::new(m);
            for i in b * BATCH..((b + 1) * BATCH).min(config.n_trials) {
                trial(i, &mut t);
            }
            t
        })
        .reduce(|| Tally::new(m), Tally::merge);

    let n = config.n_trials as f64;
    let p = tally.heralds as f64 / n;
    let expected_state = herald_project(&joint_state(params.p_e, &LaserDetectorPhases::default())?, params)
        .ok()
        .map(|o| o.state);
    let contrast = (1.0 - 2.0 * q).powi(2);
    let parity = config
        .scan_phases
        .iter()
        .zip(&tally.scan)
        .zip(&pulses)
        .map(|((&phi, s), seq)| {
            let shots = s[0];
            let (mean, err) = if shots == 0 {
                (f64::NAN, f64::NAN)
            } else {
                let f = s[1] as f64 / shots as f64;
                (2.0 * f - 1.0, 2.0 * (f * (1.0 - f) / shots as f64).sqrt())
            };
            ParityPoint {
                phi,
                shots,
                parity: mean,
                std_error: err,
                expected: expected_state.as_ref().map_or(f64::NAN, |st| contrast * st.apply(seq).parity()),
            }
        })
        .collect();

    Ok(MonteCarloStats {
        n_trials: config.n_trials,
        heralds: tally.heralds,
        herald_probability: p,
        herald_std_error: (p * (1.0 - p) / n).sqrt(),
        events_per_minute: events_per_minute(p, params.duty_cycle),
        true_counts: tally.true_counts,
        coherent_singles: tally.coherent,
        readout_counts: tally.readout,
        parity,
    })
}

/// Projective measurement followed by independent per-atom flips; returns
/// the reported number of excited atoms.
fn sample_readout(state: &TwoQubitState, q: f64, rng: &mut ChaCha8Rng) -> usize {
    let pops = state.populations();
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut outcome = EE;
    for (k, &pk) in pops.iter().enumerate() {
        acc += pk;
        if u < acc {
            outcome = k;
            break;
        }
    }
    let mut a = outcome >> 1;
    let mut b = outcome & 1;
    if q > 0.0 {
        a ^= rng.random_bool(q) as usize;
        b ^= rng.random_bool(q) as usize;
    }
    a + b
}
