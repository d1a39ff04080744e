//! `ionphot` command-line front end.
//!
//! Each subcommand writes one CSV table with a `#` metadata block. Exit
//! codes: 0 success, 2 invalid configuration, 3 I/O failure.

mod commands;
mod config;
mod figures;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use toml::Value;

use config::{resolve, CliError, Common, Grid, Schema};
use output::Report;

#[derive(Debug, Parser)]
#[command(name = "ionphot", version, about = "Single-ion free-space optics and heralded entanglement simulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Probe transmission and phase of a level scheme versus detuning.
    Spectrum {
        #[command(flatten)]
        common: Common,
        /// two_level, lambda, ba_4level or ba_8level.
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        epsilon: Option<f64>,
        /// Level-scheme TOML file instead of a preset.
        #[arg(long, value_name = "FILE")]
        scheme: Option<PathBuf>,
    },
    /// Polarimetric transmission and rotation of a Zeeman doublet.
    Faraday {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        delta_b: Option<f64>,
        #[arg(long)]
        rho_minus: Option<f64>,
    },
    /// Λ-system transparency window, analytic and from the master equation.
    Eit {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        control_rabi: Option<f64>,
        #[arg(long)]
        gamma0: Option<f64>,
    },
    /// Fit the 8-level Ba+ model to a measured probe spectrum.
    BlochFit {
        #[command(flatten)]
        common: Common,
        /// CSV of probe detuning (MHz) and transmission.
        #[arg(long, value_name = "FILE")]
        data: Option<PathBuf>,
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Atom-mirror fringes versus mirror displacement.
    Cavity {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        epsilon: Option<f64>,
        /// Mirror intensity reflectivity.
        #[arg(long)]
        r2: Option<f64>,
        /// Scan length in wavelengths (sets the grid stop).
        #[arg(long)]
        scan_lambda: Option<f64>,
    },
    /// Closed-form protocol rates and the exact heralded state.
    EntangleAnalytic {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        protocol: ProtocolFlags,
    },
    /// Monte-Carlo heralding, readout and parity scan.
    EntangleMc {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        protocol: ProtocolFlags,
        #[arg(long)]
        trials: Option<u64>,
    },
    /// Single- over two-photon success ratio versus detection efficiency.
    RatioMap {
        #[command(flatten)]
        common: Common,
    },
    /// List the figure presets.
    Figures,
}

#[derive(Debug, clap::Args)]
struct ProtocolFlags {
    /// Excitation probability per atom.
    #[arg(long)]
    pe: Option<f64>,
    /// Overall detection efficiency.
    #[arg(long)]
    eta: Option<f64>,
    /// Trials per second.
    #[arg(long)]
    duty: Option<f64>,
    /// Dark counts per second.
    #[arg(long)]
    dark_rate: Option<f64>,
    /// Herald window (s).
    #[arg(long)]
    gate: Option<f64>,
}

impl ProtocolFlags {
    fn values(&self) -> Vec<(&'static str, Value)> {
        let mut v = Vec::new();
        push_f(&mut v, "p_e", self.pe);
        push_f(&mut v, "eta", self.eta);
        push_f(&mut v, "duty_cycle", self.duty);
        push_f(&mut v, "dark_rate", self.dark_rate);
        push_f(&mut v, "gate", self.gate);
        v
    }
}

fn push_f(v: &mut Vec<(&'static str, Value)>, key: &'static str, x: Option<f64>) {
    if let Some(x) = x {
        v.push((key, Value::Float(x)));
    }
}

fn schema(command: &'static str, grid: Option<Grid>, has_preset: bool) -> Schema {
    Schema {
        command,
        grid,
        has_preset,
    }
}

fn emit<P>(name: &str, r: &config::Resolved<P>, report: Report) -> Result<(), CliError> {
    let stem = r.figure.as_deref().unwrap_or(name);
    let path = output::destination(r.output.as_deref(), stem);
    output::write(&report, path.as_deref())?;
    for line in &report.summary {
        eprintln!("{line}");
    }
    if let Some(p) = path {
        eprintln!("wrote {}", p.display());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Spectrum {
            common,
            preset,
            epsilon,
            scheme,
        } => {
            let mut flags = Vec::new();
            if let Some(p) = preset {
                flags.push(("preset", Value::String(p)));
            }
            push_f(&mut flags, "epsilon", epsilon);
            if let Some(s) = scheme {
                flags.push(("scheme", Value::String(s.display().to_string())));
            }
            let r = resolve(&schema("spectrum", Some(commands::SPECTRUM_GRID), true), &common, flags)?;
            emit("spectrum", &r, commands::spectrum(&r)?)
        }
        Command::Faraday {
            common,
            epsilon,
            delta_b,
            rho_minus,
        } => {
            let mut flags = Vec::new();
            push_f(&mut flags, "epsilon", epsilon);
            push_f(&mut flags, "delta_b", delta_b);
            push_f(&mut flags, "rho_minus", rho_minus);
            let r = resolve(&schema("faraday", Some(commands::FARADAY_GRID), false), &common, flags)?;
            emit("faraday", &r, commands::faraday(&r)?)
        }
        Command::Eit {
            common,
            epsilon,
            control_rabi,
            gamma0,
        } => {
            let mut flags = Vec::new();
            push_f(&mut flags, "epsilon", epsilon);
            push_f(&mut flags, "control_rabi", control_rabi);
            push_f(&mut flags, "gamma0", gamma0);
            let r = resolve(&schema("eit", Some(commands::EIT_GRID), false), &common, flags)?;
            emit("eit", &r, commands::eit(&r)?)
        }
        Command::BlochFit { common, data, epsilon } => {
            let mut flags = Vec::new();
            if let Some(d) = data {
                flags.push(("data", Value::String(d.display().to_string())));
            }
            push_f(&mut flags, "epsilon", epsilon);
            let r = resolve(&schema("bloch-fit", None, true), &common, flags)?;
            emit("bloch-fit", &r, commands::bloch_fit(&r)?)
        }
        Command::Cavity {
            mut common,
            epsilon,
            r2,
            scan_lambda,
        } => {
            let mut flags = Vec::new();
            push_f(&mut flags, "epsilon", epsilon);
            push_f(&mut flags, "r2", r2);
            if scan_lambda.is_some() {
                common.stop = scan_lambda;
            }
            let r = resolve(&schema("cavity", Some(commands::CAVITY_GRID), false), &common, flags)?;
            emit("cavity", &r, commands::cavity(&r)?)
        }
        Command::EntangleAnalytic { common, protocol } => {
            let r = resolve(&schema("entangle-analytic", None, false), &common, protocol.values())?;
            emit("entangle-analytic", &r, commands::entangle_analytic(&r)?)
        }
        Command::EntangleMc {
            common,
            protocol,
            trials,
        } => {
            let mut flags = protocol.values();
            if let Some(n) = trials {
                let n = i64::try_from(n).map_err(|_| config::config_err("--trials is too large"))?;
                flags.push(("n_trials", Value::Integer(n)));
            }
            let r = resolve(&schema("entangle-mc", Some(commands::MC_GRID), false), &common, flags)?;
            emit("entangle-mc", &r, commands::entangle_mc(&r)?)
        }
        Command::RatioMap { common } => {
            let r = resolve(&schema("ratio-map", Some(commands::RATIO_GRID), false), &common, vec![])?;
            emit("ratio-map", &r, commands::ratio_map(&r)?)
        }
        Command::Figures => {
            for f in figures::FIGURES {
                println!("{:<6} {:<18} {}", f.name, f.command, f.description);
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
