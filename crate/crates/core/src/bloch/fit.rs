//! Least-squares fit of the 8-level model to a measured probe spectrum.
//!
//! The free parameters are the probe and repumper strengths. They are
//! fitted in log space with a Nelder-Mead simplex, which needs no
//! derivatives of the steady-state solution.

use argmin::core::{CostFunction, Executor, State, TerminationReason};
use argmin::solver::neldermead::NelderMead;

use super::presets::{ba138_8level, Ba8LevelPreset};
use super::{probe_spectrum, BlochError, ProbeSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    pub max_iterations: u64,
    /// Stop when the standard deviation of simplex values falls below this.
    pub sd_tolerance: f64,
    /// Initial simplex step along each coordinate.
    pub initial_step: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            max_iterations: 400,
            sd_tolerance: 1e-12,
            initial_step: 0.3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: u64,
    pub converged: bool,
}

struct Objective<F>(F);

impl<F: Fn(&[f64]) -> f64> CostFunction for Objective<F> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, x: &Self::Param) -> Result<f64, argmin::core::Error> {
        let y = (self.0)(x);
        Ok(if y.is_nan() { f64::INFINITY } else { y })
    }
}

/// Minimises `f` with a Nelder-Mead simplex started at `start`.
pub fn nelder_mead<F>(f: F, start: &[f64], opts: &NelderMeadOptions) -> Result<Minimum, BlochError>
where
    F: Fn(&[f64]) -> f64,
{
    let mut simplex = vec![start.to_vec()];
    for i in 0..start.len() {
        let mut v = start.to_vec();
        v[i] += opts.initial_step;
        simplex.push(v);
    }
    let solver = NelderMead::new(simplex)
        .with_sd_tolerance(opts.sd_tolerance)
        .map_err(|e| BlochError::Fit(e.to_string()))?;
    let result = Executor::new(Objective(f), solver)
        .configure(|state| state.max_iters(opts.max_iterations))
        .run()
        .map_err(|e| BlochError::Fit(e.to_string()))?;
    let state = result.state();
    let converged = matches!(
        state.get_termination_reason(),
        Some(TerminationReason::SolverConverged)
    );
    Ok(Minimum {
        x: state.get_best_param().cloned().unwrap_or_else(|| start.to_vec()),
        value: state.get_best_cost(),
        iterations: state.get_iter(),
        converged,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ba8Fit {
    pub params: Ba8LevelPreset,
    /// Residual sum of squares of the transmission.
    pub rss: f64,
    pub iterations: u64,
    pub converged: bool,
}

/// Fits probe and repumper strengths of `initial` to `(detuning, transmission)`
/// data swept on the probe laser, all other parameters fixed.
pub fn fit_ba138_8level(
    data: &[(f64, f64)],
    initial: &Ba8LevelPreset,
    epsilon: f64,
    opts: &NelderMeadOptions,
) -> Result<Ba8Fit, BlochError> {
    if data.is_empty() {
        return Err(BlochError::Fit("no data points".into()));
    }
    if initial.probe_rabi <= 0.0 || initial.repump_rabi <= 0.0 {
        return Err(BlochError::Fit("initial strengths must be positive".into()));
    }
    let grid: Vec<f64> = data.iter().map(|d| d.0).collect();
    let spec = ProbeSpec::scalar("probe", epsilon);
    let with = |x: &[f64]| Ba8LevelPreset {
        probe_rabi: x[0].exp(),
        repump_rabi: x[1].exp(),
        ..*initial
    };
    let rss = |x: &[f64]| -> Result<f64, BlochError> {
        let spectrum = probe_spectrum(&ba138_8level(&with(x)), &spec, &grid)?;
        Ok(spectrum.iter().zip(data).map(|(p, d)| (p.transmission - d.1).powi(2)).sum())
    };
    // reject the starting point early if it is outside the model's domain
    rss(&[initial.probe_rabi.ln(), initial.repump_rabi.ln()])?;
    let min = nelder_mead(
        |x| rss(x).unwrap_or(f64::INFINITY),
        &[initial.probe_rabi.ln(), initial.repump_rabi.ln()],
        opts,
    )?;
    Ok(Ba8Fit {
        params: with(&min.x),
        rss: min.value,
        iterations: min.iterations,
        converged: min.converged,
    })
}
