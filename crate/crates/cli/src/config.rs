//! Layered parameter resolution.
//!
//! Every subcommand has a typed parameter struct with defaults. A figure
//! preset, a TOML config file and command-line flags are merged over those
//! defaults in that order. Config files are checked against the typed schema
//! first so that unknown keys and type errors are reported with a line number.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::de::{DeserializeOwned, IgnoredAny};
use serde::{Deserialize, Serialize};
use thiserror::Error;
use toml::{Table, Value};

use crate::figures;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

pub fn config_err(msg: impl std::fmt::Display) -> CliError {
    CliError::Config(msg.to_string().trim_end().to_string())
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// TOML config file with optional `[params]`, `[grid]` and `[preset]` tables.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Output CSV path; defaults to `$IONPHOT_OUTPUT_DIR/<name>.csv`, else stdout.
    #[arg(long, short, value_name = "FILE")]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Named parameter set reproducing one of the reference figures.
    #[arg(long, value_name = "NAME")]
    pub figure: Option<String>,
    /// Override a parameter, e.g. `--set gamma=6` or `--set preset.b_field_gauss=0.5`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub start: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub stop: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Grid {
    pub const fn new(start: f64, stop: f64, points: usize) -> Self {
        Self { start, stop, points }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.points < 2 {
            return Err(config_err(format!("grid needs at least 2 points, got {}", self.points)));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(config_err("grid bounds must be finite"));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let step = (self.stop - self.start) / (self.points - 1) as f64;
        (0..self.points)
            .map(|k| if k + 1 == self.points { self.stop } else { self.start + k as f64 * step })
            .collect()
    }

    /// Logarithmically spaced values; both bounds must be positive.
    pub fn log_values(&self) -> Result<Vec<f64>, CliError> {
        if !(self.start > 0.0 && self.stop > 0.0) {
            return Err(config_err("logarithmic grid needs positive bounds"));
        }
        let lin = Grid::new(self.start.log10(), self.stop.log10(), self.points).values();
        let mut v: Vec<f64> = lin.iter().map(|x| 10f64.powf(*x)).collect();
        v[0] = self.start;
        v[self.points - 1] = self.stop;
        Ok(v)
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PartialGrid {
    start: Option<f64>,
    stop: Option<f64>,
    points: Option<usize>,
}

impl PartialGrid {
    fn apply(&self, g: &mut Grid) {
        if let Some(v) = self.start {
            g.start = v;
        }
        if let Some(v) = self.stop {
            g.stop = v;
        }
        if let Some(v) = self.points {
            g.points = v;
        }
    }

    fn is_empty(&self) -> bool {
        self.start.is_none() && self.stop.is_none() && self.points.is_none()
    }
}

/// Untyped view of a config file or figure preset.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    command: Option<String>,
    figure: Option<String>,
    output: Option<PathBuf>,
    seed: Option<u64>,
    #[serde(default)]
    params: Table,
    grid: Option<PartialGrid>,
    #[serde(default)]
    preset: Table,
}

/// Same layout with typed params, used only to locate errors.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(dead_code)]
struct CheckedFile<P> {
    command: Option<IgnoredAny>,
    figure: Option<IgnoredAny>,
    output: Option<IgnoredAny>,
    seed: Option<IgnoredAny>,
    params: Option<P>,
    grid: Option<IgnoredAny>,
    preset: Option<IgnoredAny>,
}

#[derive(Deserialize)]
#[allow(dead_code)]
struct PresetOnly<T> {
    preset: Option<T>,
}

/// What a subcommand accepts besides its parameter struct.
pub struct Schema {
    pub command: &'static str,
    pub grid: Option<Grid>,
    pub has_preset: bool,
}

#[derive(Debug, Clone)]
pub struct Resolved<P> {
    pub params: P,
    /// Final parameter table, for the output metadata.
    pub table: Table,
    pub grid: Option<Grid>,
    pub output: Option<PathBuf>,
    pub seed: u64,
    pub figure: Option<String>,
    preset_layers: Vec<Table>,
    config_text: Option<(PathBuf, String)>,
}

impl<P> Resolved<P> {
    pub fn grid(&self) -> Grid {
        self.grid.expect("schema declares a grid")
    }

    /// Deserialises the merged `[preset]` table into `T`, starting from
    /// `T::default()`.
    pub fn preset<T: Serialize + DeserializeOwned + Default>(&self) -> Result<(T, Table), CliError> {
        if let Some((path, text)) = &self.config_text {
            toml::from_str::<PresetOnly<T>>(text).map_err(|e| file_err(path, e))?;
        }
        let mut table = Table::try_from(T::default()).map_err(config_err)?;
        for layer in &self.preset_layers {
            for (k, v) in layer {
                table.insert(k.clone(), v.clone());
            }
        }
        let value: T = Value::Table(table.clone()).try_into().map_err(|e| config_err(format!("[preset]: {e}")))?;
        Ok((value, table))
    }
}

fn file_err(path: &Path, e: toml::de::Error) -> CliError {
    config_err(format!("{}: {e}", path.display()))
}

/// Parses `KEY=VALUE`, reading the value as a TOML literal and falling back
/// to a plain string.
pub fn parse_assignment(s: &str) -> Result<(String, Value), CliError> {
    let (key, raw) = s
        .split_once('=')
        .ok_or_else(|| config_err(format!("--set expects KEY=VALUE, got `{s}`")))?;
    let key = key.trim();
    if key.is_empty() {
        return Err(config_err(format!("--set expects KEY=VALUE, got `{s}`")));
    }
    let raw = raw.trim();
    let value = toml::from_str::<Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| Value::String(raw.to_string()));
    Ok((key.to_string(), value))
}

pub fn resolve<P>(schema: &Schema, common: &Common, flags: Vec<(&str, Value)>) -> Result<Resolved<P>, CliError>
where
    P: Serialize + DeserializeOwned + Default,
{
    let config_text = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            Some((path.clone(), text))
        }
        None => None,
    };
    let file = match &config_text {
        Some((path, text)) => {
            toml::from_str::<CheckedFile<P>>(text).map_err(|e| file_err(path, e))?;
            toml::from_str::<RawFile>(text).map_err(|e| file_err(path, e))?
        }
        None => RawFile::default(),
    };
    if let Some(cmd) = &file.command {
        if cmd != schema.command {
            return Err(config_err(format!("config is for `{cmd}`, not `{}`", schema.command)));
        }
    }

    let figure_name = common.figure.clone().or(file.figure.clone());
    let figure = match &figure_name {
        Some(name) => {
            let (cmd, text) = figures::lookup(name)?;
            if cmd != schema.command {
                return Err(config_err(format!("figure `{name}` belongs to `{cmd}`, not `{}`", schema.command)));
            }
            toml::from_str::<RawFile>(text).map_err(|e| config_err(format!("figure `{name}`: {e}")))?
        }
        None => RawFile::default(),
    };

    let mut table = Table::try_from(P::default()).map_err(config_err)?;
    let mut preset_layers = vec![figure.preset.clone(), file.preset.clone()];
    let mut cli_preset = Table::new();
    for layer in [&figure.params, &file.params] {
        for (k, v) in layer {
            table.insert(k.clone(), v.clone());
        }
    }
    for s in &common.set {
        let (key, value) = parse_assignment(s)?;
        match key.strip_prefix("preset.") {
            Some(k) if schema.has_preset => {
                cli_preset.insert(k.to_string(), value);
            }
            Some(_) => return Err(config_err(format!("`{}` takes no preset parameters", schema.command))),
            None => {
                table.insert(key, value);
            }
        }
    }
    preset_layers.push(cli_preset);
    for (k, v) in flags {
        table.insert(k.to_string(), v);
    }
    let params: P = Value::Table(table.clone())
        .try_into()
        .map_err(|e| config_err(format!("parameters: {e}")))?;

    if !schema.has_preset && preset_layers.iter().any(|t| !t.is_empty()) {
        return Err(config_err(format!("`{}` takes no [preset] table", schema.command)));
    }

    let cli_grid = PartialGrid {
        start: common.start,
        stop: common.stop,
        points: common.points,
    };
    let layers = [figure.grid.unwrap_or_default(), file.grid.unwrap_or_default(), cli_grid];
    let grid = match schema.grid {
        Some(mut g) => {
            for l in &layers {
                l.apply(&mut g);
            }
            g.validate()?;
            Some(g)
        }
        None => {
            if layers.iter().any(|l| !l.is_empty()) {
                return Err(config_err(format!("`{}` takes no grid", schema.command)));
            }
            None
        }
    };

    Ok(Resolved {
        params,
        table,
        grid,
        output: common.output.clone().or(file.output),
        seed: common.seed.or(file.seed).or(figure.seed).unwrap_or(0),
        figure: figure_name,
        preset_layers,
        config_text,
    })
}
