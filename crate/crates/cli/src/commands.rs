//! Parameter schemas and runners of the subcommands.

use std::path::{Path, PathBuf};

use ionphot::bloch::fit::{fit_ba138_8level, NelderMeadOptions};
use ionphot::bloch::presets::*;
use ionphot::bloch::{probe_spectrum, LevelScheme, ProbeSpec};
use ionphot::entangle::*;
use ionphot::lineshape::*;
use ionphot::mirror::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use toml::Table;

use crate::config::{config_err, CliError, Grid, Resolved};
use crate::output::{format_number, Cell, Report};

fn model_err(e: impl std::fmt::Display) -> CliError {
    config_err(e)
}

/// Metadata shared by every output.
pub fn header<P>(report: &mut Report, command: &str, r: &Resolved<P>) {
    report.meta("ionphot", ionphot::VERSION);
    report.meta("command", command);
    if let Some(f) = &r.figure {
        report.meta("figure", f);
    }
    report.meta("seed", r.seed);
    for (k, v) in &r.table {
        report.meta(format!("param.{k}"), render_value(v));
    }
    if let Some(g) = r.grid {
        report.meta("grid", format!("{} .. {} ({} points)", format_number(g.start), format_number(g.stop), g.points));
    }
}

fn preset_meta(report: &mut Report, table: &Table) {
    for (k, v) in table {
        report.meta(format!("preset.{k}"), render_value(v));
    }
}

fn render_value(v: &toml::Value) -> String {
    match v {
        toml::Value::Float(x) => format_number(*x),
        toml::Value::String(s) => s.clone(),
        toml::Value::Array(a) => format!("[{}]", a.iter().map(render_value).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

// ---------------------------------------------------------------- spectrum

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumParams {
    /// `two_level`, `lambda`, `ba_4level` or `ba_8level`.
    pub preset: String,
    pub epsilon: f64,
    /// `auto`, `analytic` (two-level only) or `bloch`.
    pub method: String,
    pub laser: String,
    pub sweep: String,
    /// `scalar` or `polarimetric`.
    pub detection: String,
    /// Level-scheme TOML file used instead of a preset.
    pub scheme: Option<String>,
}

impl Default for SpectrumParams {
    fn default() -> Self {
        Self {
            preset: "two_level".into(),
            epsilon: 0.04,
            method: "auto".into(),
            laser: "probe".into(),
            sweep: "probe".into(),
            detection: "scalar".into(),
            scheme: None,
        }
    }
}

pub const SPECTRUM_GRID: Grid = Grid::new(-40.0, 40.0, 801);

fn preset_scheme<T>(r: &Resolved<SpectrumParams>, report: &mut Report, build: fn(&T) -> LevelScheme) -> Result<LevelScheme, CliError>
where
    T: Serialize + DeserializeOwned + Default,
{
    let (p, table) = r.preset::<T>()?;
    preset_meta(report, &table);
    Ok(build(&p))
}

pub fn spectrum(r: &Resolved<SpectrumParams>) -> Result<Report, CliError> {
    let p = &r.params;
    let mut report = Report::new(&["detuning_mhz", "transmission", "phase_rad"]);
    header(&mut report, "spectrum", r);
    let grid = r.grid().values();
    let analytic = match p.method.as_str() {
        "auto" => p.scheme.is_none() && p.preset == "two_level" && p.detection == "scalar",
        "analytic" => {
            if p.scheme.is_some() || p.preset != "two_level" || p.detection != "scalar" {
                return Err(config_err("method = \"analytic\" needs the two_level preset with scalar detection"));
            }
            true
        }
        "bloch" => false,
        other => return Err(config_err(format!("unknown method `{other}` (auto, analytic, bloch)"))),
    };
    if analytic {
        let (preset, table) = r.preset::<TwoLevelPreset>()?;
        preset_meta(&mut report, &table);
        let tl = TwoLevelParams::new(preset.gamma, p.epsilon, 0.0).map_err(model_err)?;
        report.meta("method", "analytic");
        for d in grid {
            report.push(vec![d.into(), transmission(d, &tl).into(), phase_shift(d, &tl).into()]);
        }
        return Ok(report);
    }
    let scheme = match &p.scheme {
        Some(path) => {
            if r.preset::<Table>().map(|(_, t)| !t.is_empty()).unwrap_or(false) {
                return Err(config_err("[preset] parameters cannot be combined with a scheme file"));
            }
            LevelScheme::from_file(Path::new(path)).map_err(|e| match e {
                ionphot::bloch::BlochError::Io(m) => CliError::Io(m),
                other => config_err(format!("{path}: {other}")),
            })?
        }
        None => match p.preset.as_str() {
            "two_level" => preset_scheme::<TwoLevelPreset>(r, &mut report, two_level)?,
            "lambda" => preset_scheme::<LambdaPreset>(r, &mut report, lambda)?,
            "ba_4level" => preset_scheme::<Ba4LevelPreset>(r, &mut report, ba138_4level)?,
            "ba_8level" => preset_scheme::<Ba8LevelPreset>(r, &mut report, ba138_8level)?,
            other => {
                return Err(config_err(format!(
                    "unknown preset `{other}` (two_level, lambda, ba_4level, ba_8level)"
                )))
            }
        },
    };
    let spec = match p.detection.as_str() {
        "scalar" => ProbeSpec::scalar(&p.laser, p.epsilon),
        "polarimetric" => ProbeSpec::polarimetric(&p.laser, p.epsilon),
        other => return Err(config_err(format!("unknown detection `{other}` (scalar, polarimetric)"))),
    }
    .sweeping(&p.sweep);
    report.meta("method", "bloch");
    for pt in probe_spectrum(&scheme, &spec, &grid).map_err(model_err)? {
        report.push(vec![pt.detuning.into(), pt.transmission.into(), pt.phase.into()]);
    }
    Ok(report)
}

// ---------------------------------------------------------------- faraday

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FaradayParams {
    /// Half width at half maximum (MHz).
    pub gamma: f64,
    pub epsilon: f64,
    /// Zeeman shift of each circular component (MHz).
    pub delta_b: f64,
    /// Population of the ground state driven by σ⁻.
    pub rho_minus: f64,
    pub detuning_offset: f64,
}

impl Default for FaradayParams {
    fn default() -> Self {
        Self {
            gamma: 5.5,
            epsilon: 0.008,
            delta_b: 9.0,
            rho_minus: 0.9,
            detuning_offset: 0.0,
        }
    }
}

pub const FARADAY_GRID: Grid = Grid::new(-40.0, 40.0, 801);

pub fn faraday(r: &Resolved<FaradayParams>) -> Result<Report, CliError> {
    let p = &r.params;
    let base = TwoLevelParams::new(p.gamma, p.epsilon, p.detuning_offset).map_err(model_err)?;
    let doublet = ZeemanDoubletParams::new(base, p.delta_b, p.rho_minus, 1.0 - p.rho_minus).map_err(model_err)?;
    let mut report = Report::new(&[
        "detuning_mhz",
        "i0",
        "i45",
        "i90",
        "extinction_i0",
        "rotation_rad",
        "rotation_stokes_rad",
    ]);
    header(&mut report, "faraday", r);
    let (mut peak_ext, mut peak_rot) = (0.0f64, 0.0f64);
    for d in r.grid().values() {
        let s = polarimetry(d, &doublet);
        let a = faraday_angle(d, &doublet);
        peak_ext = peak_ext.max(1.0 - s.i0);
        peak_rot = peak_rot.max(a.exact.abs());
        report.push(vec![
            d.into(),
            s.i0.into(),
            s.i45.into(),
            s.i90.into(),
            (1.0 - s.i0).into(),
            a.exact.into(),
            a.stokes.into(),
        ]);
    }
    report.meta_num("peak_extinction_i0", peak_ext);
    report.meta_num("peak_rotation_deg", peak_rot.to_degrees());
    report.summary.push(format!(
        "peak I0 extinction {:.4} %, peak rotation {:.4} deg",
        100.0 * peak_ext,
        peak_rot.to_degrees()
    ));
    Ok(report)
}

// ---------------------------------------------------------------- eit

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EitParams {
    pub gamma: f64,
    pub gamma0: f64,
    pub control_rabi: f64,
    /// Probe detuning from the optical resonance (MHz).
    pub probe_detuning: f64,
    pub epsilon: f64,
    /// Also solve the three-level master equation at every point.
    pub bloch: bool,
}

impl Default for EitParams {
    fn default() -> Self {
        Self {
            gamma: 10.0,
            gamma0: 0.0,
            control_rabi: 5.0,
            probe_detuning: 0.0,
            epsilon: 0.04,
            bloch: true,
        }
    }
}

pub const EIT_GRID: Grid = Grid::new(-30.0, 30.0, 601);

pub fn eit(r: &Resolved<EitParams>) -> Result<Report, CliError> {
    let p = &r.params;
    let lp = LambdaParams::new(p.gamma, p.gamma0, p.control_rabi, p.probe_detuning).map_err(model_err)?;
    let deltas = r.grid().values();
    let columns: &[&'static str] = if p.bloch {
        &["delta_mhz", "transmission", "phase_rad", "transmission_bloch", "phase_bloch_rad"]
    } else {
        &["delta_mhz", "transmission", "phase_rad"]
    };
    let mut report = Report::new(columns);
    header(&mut report, "eit", r);
    report.meta_num("window_width_mhz", lp.window_width());
    let solved = if p.bloch {
        let scheme = lambda(&LambdaPreset {
            gamma: p.gamma,
            gamma0: p.gamma0,
            control_rabi: p.control_rabi,
            probe_detuning: p.probe_detuning,
            probe_rabi: 1e-3 * p.gamma,
            ..Default::default()
        });
        // the control detuning is δ plus the probe detuning
        let grid: Vec<f64> = deltas.iter().map(|d| d + p.probe_detuning).collect();
        let spec = ProbeSpec::scalar("probe", p.epsilon).sweeping("control");
        Some(probe_spectrum(&scheme, &spec, &grid).map_err(model_err)?)
    } else {
        None
    };
    for (k, &d) in deltas.iter().enumerate() {
        let field = output_field(p.epsilon, eit_susceptibility(d, &lp));
        let mut row: Vec<Cell> = vec![d.into(), field.norm_sqr().into(), field.arg().into()];
        if let Some(s) = &solved {
            row.push(s[k].transmission.into());
            row.push(s[k].phase.into());
        }
        report.push(row);
    }
    Ok(report)
}

// ---------------------------------------------------------------- bloch-fit

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BlochFitParams {
    /// CSV with probe detuning (MHz) and transmission in the first two columns.
    pub data: String,
    pub epsilon: f64,
    pub max_iterations: u64,
    pub sd_tolerance: f64,
    pub initial_step: f64,
}

impl Default for BlochFitParams {
    fn default() -> Self {
        let o = NelderMeadOptions::default();
        Self {
            data: String::new(),
            epsilon: 0.008,
            max_iterations: o.max_iterations,
            sd_tolerance: o.sd_tolerance,
            initial_step: o.initial_step,
        }
    }
}

pub fn read_xy(path: &Path) -> Result<Vec<(f64, f64)>, CliError> {
    let file = std::fs::File::open(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(file);
    let mut data = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| config_err(format!("{}: {e}", path.display())))?;
        let line = record.position().map_or(i as u64 + 2, |p| p.line());
        let field = |k: usize| -> Result<f64, CliError> {
            record
                .get(k)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| config_err(format!("{}: line {line}: column {} is not a number", path.display(), k + 1)))
        };
        data.push((field(0)?, field(1)?));
    }
    if data.is_empty() {
        return Err(config_err(format!("{}: no data rows", path.display())));
    }
    Ok(data)
}

pub fn bloch_fit(r: &Resolved<BlochFitParams>) -> Result<Report, CliError> {
    let p = &r.params;
    if p.data.is_empty() {
        return Err(config_err("bloch-fit needs a data file (--data or params.data)"));
    }
    let data = read_xy(&PathBuf::from(&p.data))?;
    let (initial, table) = r.preset::<Ba8LevelPreset>()?;
    let opts = NelderMeadOptions {
        max_iterations: p.max_iterations,
        sd_tolerance: p.sd_tolerance,
        initial_step: p.initial_step,
    };
    let fit = fit_ba138_8level(&data, &initial, p.epsilon, &opts).map_err(model_err)?;
    let grid: Vec<f64> = data.iter().map(|d| d.0).collect();
    let curve = probe_spectrum(&ba138_8level(&fit.params), &ProbeSpec::scalar("probe", p.epsilon), &grid).map_err(model_err)?;

    let mut report = Report::new(&["detuning_mhz", "measured", "fitted"]);
    header(&mut report, "bloch-fit", r);
    preset_meta(&mut report, &table);
    report.meta_num("fit.probe_rabi", fit.params.probe_rabi);
    report.meta_num("fit.repump_rabi", fit.params.repump_rabi);
    report.meta_num("fit.rss", fit.rss);
    report.meta("fit.iterations", fit.iterations);
    report.meta("fit.converged", fit.converged);
    for ((d, m), pt) in data.iter().zip(&curve) {
        report.push(vec![(*d).into(), (*m).into(), pt.transmission.into()]);
    }
    report.summary.push(format!(
        "probe_rabi = {}, repump_rabi = {}, rss = {}, converged = {}",
        format_number(fit.params.probe_rabi),
        format_number(fit.params.repump_rabi),
        format_number(fit.rss),
        fit.converged
    ));
    Ok(report)
}

// ---------------------------------------------------------------- cavity

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CavityCmdParams {
    pub epsilon: f64,
    /// Mirror intensity reflectivity.
    pub r2: f64,
    pub wavelength_nm: f64,
    pub reflection_amplitude: f64,
}

impl Default for CavityCmdParams {
    fn default() -> Self {
        Self {
            epsilon: 0.04,
            r2: 0.25,
            wavelength_nm: 493.4,
            reflection_amplitude: 1.0,
        }
    }
}

/// Mirror displacement in wavelengths.
pub const CAVITY_GRID: Grid = Grid::new(0.0, 2.0, 401);

pub fn cavity(r: &Resolved<CavityCmdParams>) -> Result<Report, CliError> {
    let p = &r.params;
    let wavelength = p.wavelength_nm * 1e-9;
    let base = CavityParams::with_intensity_reflectivity(p.epsilon, p.r2, 0.0, wavelength).map_err(model_err)?;
    let positions: Vec<f64> = r.grid().values().iter().map(|x| x * wavelength).collect();
    let mut report = Report::new(&["displacement_nm", "phase_rad", "transmission", "transmission_qed", "reflection"]);
    header(&mut report, "cavity", r);
    let (hi, lo) = fringe_extrema(&base);
    report.meta_num("finesse", finesse(&base));
    report.meta_num("t_max", hi);
    report.meta_num("t_min", lo);
    report.meta_num("visibility", fringe_visibility(&base));
    for pt in fringe_scan(&base, &positions, p.reflection_amplitude) {
        let qed = qed_transmission(&base.with_distance(pt.position));
        report.push(vec![
            (pt.position * 1e9).into(),
            pt.phase.into(),
            pt.transmission.into(),
            qed.into(),
            pt.reflection.into(),
        ]);
    }
    report.summary.push(format!(
        "finesse {}, fringe {} .. {}",
        format_number(finesse(&base)),
        format_number(lo),
        format_number(hi)
    ));
    Ok(report)
}

// ---------------------------------------------------------------- entangle

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EntangleParams {
    pub p_e: f64,
    pub eta: f64,
    /// Dark counts per second.
    pub dark_rate: f64,
    /// Herald window (s); calibrated to `dark_population` when absent.
    pub gate: Option<f64>,
    pub dark_population: f64,
    pub duty_cycle: f64,
    pub phase_jitter_sigma: f64,
    pub recoil_coherence: f64,
    pub dephasing_coherence: f64,
}

impl Default for EntangleParams {
    fn default() -> Self {
        let p = ProtocolParams::experiment();
        Self {
            p_e: p.p_e,
            eta: p.eta,
            dark_rate: p.dark_rate,
            gate: None,
            dark_population: EXPERIMENT_DARK_POPULATION,
            duty_cycle: p.duty_cycle,
            phase_jitter_sigma: p.phase_jitter_sigma,
            recoil_coherence: p.recoil_coherence,
            dephasing_coherence: p.dephasing_coherence,
        }
    }
}

impl EntangleParams {
    pub fn protocol(&self) -> Result<ProtocolParams, CliError> {
        let gate = match self.gate {
            Some(g) => g,
            None if self.dark_rate > 0.0 => {
                calibrate_gate(self.p_e, self.eta, self.dark_rate, self.dark_population).map_err(model_err)?
            }
            None => 0.0,
        };
        let p = ProtocolParams {
            p_e: self.p_e,
            eta: self.eta,
            dark_rate: self.dark_rate,
            gate,
            duty_cycle: self.duty_cycle,
            phase_jitter_sigma: self.phase_jitter_sigma,
            recoil_coherence: self.recoil_coherence,
            dephasing_coherence: self.dephasing_coherence,
        };
        p.validate().map_err(model_err)?;
        Ok(p)
    }
}

fn herald(params: &ProtocolParams) -> Result<HeraldOutcome, CliError> {
    herald_project(&joint_state(params.p_e, &LaserDetectorPhases::default()).map_err(model_err)?, params)
        .map_err(model_err)
}

pub fn entangle_analytic(r: &Resolved<EntangleParams>) -> Result<Report, CliError> {
    let params = r.params.protocol()?;
    let single = analytic_single_photon(params.p_e, params.eta).map_err(model_err)?;
    let two = analytic_two_photon(params.eta).map_err(model_err)?;
    let rate = events_per_minute(single.success_probability, params.duty_cycle);

    let mut report = Report::new(&["quantity", "value"]);
    header(&mut report, "entangle-analytic", r);
    let mut row = |name: &str, v: f64| report.push(vec![name.into(), v.into()]);
    row("fidelity_single_photon", single.fidelity);
    row("p_succ", single.success_probability);
    row("p_succ_two_photon", two.eta_squared);
    row("p_succ_two_photon_both_patterns", two.twice_eta_squared);
    row("events_per_minute", rate);
    row("gate_s", params.gate);
    let mut summary = vec![format!(
        "P_succ = {:.2e}, {:.1} events/min at {} Hz",
        single.success_probability,
        rate,
        format_number(params.duty_cycle)
    )];
    match herald(&params) {
        Ok(out) => {
            let s = &out.state;
            let pops = s.populations();
            row("herald_probability", out.probability);
            row("herald_events_per_minute", events_per_minute(out.probability, params.duty_cycle));
            row("rho_gg", pops[GG]);
            row("rho_ge", pops[GE]);
            row("rho_eg", pops[EG]);
            row("rho_ee", pops[EE]);
            row("coherence", 2.0 * s.get(EG, GE).re);
            row("fidelity", s.fidelity());
            let scan = parity_scan(s, PulseSequence::Double, &[0.0]).map_err(model_err)?;
            row("parity_double_pulse_phi0", scan.parity[0]);
            summary.push(format!(
                "heralded state: single {}, ee {}, gg {}, fidelity {}",
                format_number(pops[GE] + pops[EG]),
                format_number(pops[EE]),
                format_number(pops[GG]),
                format_number(s.fidelity())
            ));
        }
        Err(e) => summary.push(format!("no heralded state: {e}")),
    }
    report.summary = summary;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EntangleMcParams {
    pub p_e: f64,
    pub eta: f64,
    pub dark_rate: f64,
    pub gate: Option<f64>,
    pub dark_population: f64,
    pub duty_cycle: f64,
    pub phase_jitter_sigma: f64,
    pub recoil_coherence: f64,
    pub dephasing_coherence: f64,
    pub n_trials: u64,
    /// `single` or `double`.
    pub sequence: String,
    pub readout_fidelity: f64,
}

impl Default for EntangleMcParams {
    fn default() -> Self {
        let e = EntangleParams::default();
        Self {
            p_e: e.p_e,
            eta: e.eta,
            dark_rate: e.dark_rate,
            gate: e.gate,
            dark_population: e.dark_population,
            duty_cycle: e.duty_cycle,
            phase_jitter_sigma: e.phase_jitter_sigma,
            recoil_coherence: e.recoil_coherence,
            dephasing_coherence: e.dephasing_coherence,
            n_trials: 1_000_000,
            sequence: "double".into(),
            readout_fidelity: 0.98,
        }
    }
}

impl EntangleMcParams {
    fn protocol(&self) -> Result<ProtocolParams, CliError> {
        EntangleParams {
            p_e: self.p_e,
            eta: self.eta,
            dark_rate: self.dark_rate,
            gate: self.gate,
            dark_population: self.dark_population,
            duty_cycle: self.duty_cycle,
            phase_jitter_sigma: self.phase_jitter_sigma,
            recoil_coherence: self.recoil_coherence,
            dephasing_coherence: self.dephasing_coherence,
        }
        .protocol()
    }
}

/// Scan phases (rad).
pub const MC_GRID: Grid = Grid::new(0.0, std::f64::consts::PI, 17);

pub fn entangle_mc(r: &Resolved<EntangleMcParams>) -> Result<Report, CliError> {
    let p = &r.params;
    let params = p.protocol()?;
    let sequence = match p.sequence.as_str() {
        "single" => PulseSequence::Single,
        "double" => PulseSequence::Double,
        other => return Err(config_err(format!("unknown sequence `{other}` (single, double)"))),
    };
    let config = MonteCarloConfig {
        n_trials: p.n_trials,
        seed: r.seed,
        scan_phases: r.grid().values(),
        sequence,
        readout_fidelity: p.readout_fidelity,
    };
    let stats = monte_carlo(&params, &config).map_err(model_err)?;

    let mut report = Report::new(&["phi_rad", "shots", "parity", "std_error", "expected"]);
    header(&mut report, "entangle-mc", r);
    report.meta_num("gate_s", params.gate);
    report.meta("heralds", stats.heralds);
    report.meta_num("herald_probability", stats.herald_probability);
    report.meta_num("herald_std_error", stats.herald_std_error);
    report.meta_num("events_per_minute", stats.events_per_minute);
    if let Ok(out) = herald(&params) {
        report.meta_num("analytic.herald_probability", out.probability);
        let pops = out.state.populations();
        report.meta(
            "analytic.populations_gg_single_ee",
            format!("{}, {}, {}", format_number(pops[GG]), format_number(pops[GE] + pops[EG]), format_number(pops[EE])),
        );
        let ro = expected_readout(&out.state, p.readout_fidelity);
        report.meta(
            "analytic.readout_0_1_2",
            format!("{}, {}, {}", format_number(ro[0]), format_number(ro[1]), format_number(ro[2])),
        );
    }
    let c = stats.true_counts;
    report.meta("true_counts_gg_single_ee", format!("{}, {}, {}", c[0], c[1], c[2]));
    report.meta("coherent_singles", stats.coherent_singles);
    let ro = stats.readout_counts;
    report.meta("readout_counts_0_1_2", format!("{}, {}, {}", ro[0], ro[1], ro[2]));
    for pt in &stats.parity {
        report.push(vec![
            pt.phi.into(),
            pt.shots.into(),
            pt.parity.into(),
            pt.std_error.into(),
            pt.expected.into(),
        ]);
    }
    report.summary.push(format!(
        "{} heralds in {} trials ({} events/min)",
        stats.heralds,
        stats.n_trials,
        format_number(stats.events_per_minute)
    ));
    Ok(report)
}

// ---------------------------------------------------------------- ratio-map

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RatioParams {
    pub fidelities: Vec<f64>,
    /// Space the efficiency grid logarithmically.
    pub log_grid: bool,
}

impl Default for RatioParams {
    fn default() -> Self {
        Self {
            fidelities: vec![0.8, 0.9, 0.95, 0.99],
            log_grid: true,
        }
    }
}

/// Detection efficiency η.
pub const RATIO_GRID: Grid = Grid::new(1e-4, 1.0, 81);

pub fn ratio_map(r: &Resolved<RatioParams>) -> Result<Report, CliError> {
    let p = &r.params;
    if p.fidelities.is_empty() {
        return Err(config_err("fidelities must not be empty"));
    }
    let etas = if p.log_grid { r.grid().log_values()? } else { r.grid().values() };
    let mut report = Report::new(&["eta", "target_fidelity", "p_e", "ratio"]);
    header(&mut report, "ratio-map", r);
    for &f in &p.fidelities {
        for &eta in &etas {
            let s = success_ratio(eta, f).map_err(model_err)?;
            report.push(vec![eta.into(), f.into(), s.p_e.into(), s.ratio.into()]);
        }
    }
    Ok(report)
}
