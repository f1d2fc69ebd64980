//! Experiment configuration: optional TOML file, per-experiment defaults and
//! command-line overrides, resolved into one fully specified [`RunConfig`].

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::experiments::Experiment;

/// Configuration file as written by the user. Every key is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub out: Option<PathBuf>,
    pub svg: Option<bool>,
    pub array: Option<ArrayFile>,
    pub scattering: Option<ScatteringFile>,
    pub snr: Option<SnrFile>,
    pub sweep: Option<SweepFile>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrayFile {
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    /// Element spacing in wavelengths.
    pub spacing: Option<f64>,
    /// Wavelength in meters.
    pub wavelength: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScatteringFile {
    pub azimuths_deg: Option<Vec<f64>>,
    pub std_deg: Option<f64>,
    pub paths: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SnrFile {
    pub db: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFile {
    pub values: Option<Vec<f64>>,
    pub pilot_lengths: Option<Vec<usize>>,
    pub users: Option<Vec<usize>>,
    /// Focus distance as a fraction of the Fraunhofer distance.
    pub focus: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArrayConfig {
    pub nx: usize,
    pub ny: usize,
    pub spacing: f64,
    pub wavelength: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScatteringConfig {
    pub azimuths_deg: Vec<f64>,
    pub std_deg: f64,
    pub paths: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub values: Vec<f64>,
    pub pilot_lengths: Vec<usize>,
    pub users: Vec<usize>,
    pub focus: f64,
}

/// Fully resolved configuration, recorded verbatim in the run manifest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub experiment: String,
    pub seed: u64,
    pub trials: usize,
    pub out: PathBuf,
    pub svg: bool,
    pub snr_db: f64,
    pub array: ArrayConfig,
    pub scattering: ScatteringConfig,
    pub sweep: SweepConfig,
}

/// Values given on the command line; they win over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub out: Option<PathBuf>,
    pub svg: bool,
    pub focus: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn load_file(path: &Path) -> Result<FileConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
    parse(&text).map_err(|e| ConfigError(format!("{}: {}", path.display(), e.0)))
}

pub fn parse(text: &str) -> Result<FileConfig, ConfigError> {
    toml::from_str(text).map_err(|e| ConfigError(e.to_string()))
}

/// Parse a focus distance such as `0.05dF` or `0.05`, as a fraction of d_F.
pub fn parse_focus(s: &str) -> Result<f64, ConfigError> {
    let t = s.trim();
    let t = t.strip_suffix("dF").or_else(|| t.strip_suffix("df")).unwrap_or(t);
    t.trim()
        .parse::<f64>()
        .map_err(|_| ConfigError(format!("--F: expected a fraction of d_F such as 0.05dF, got '{s}'")))
}

fn check(ok: bool, field: &str, msg: &str) -> Result<(), ConfigError> {
    if ok {
        Ok(())
    } else {
        Err(ConfigError(format!("{field}: {msg}")))
    }
}

impl RunConfig {
    pub fn resolve(exp: &Experiment, file: &FileConfig, cli: &Overrides) -> Result<Self, ConfigError> {
        let d = (exp.defaults)();
        let a = file.array.clone().unwrap_or_default();
        let s = file.scattering.clone().unwrap_or_default();
        let w = file.sweep.clone().unwrap_or_default();
        let cfg = RunConfig {
            experiment: exp.id.to_string(),
            seed: cli.seed.or(file.seed).unwrap_or(1),
            trials: cli.trials.or(file.trials).unwrap_or(d.trials),
            out: cli.out.clone().or(file.out.clone()).unwrap_or_else(|| PathBuf::from("runs")),
            svg: cli.svg || file.svg.unwrap_or(false),
            snr_db: file.snr.as_ref().and_then(|x| x.db).unwrap_or(d.snr_db),
            array: ArrayConfig {
                nx: a.nx.unwrap_or(d.array.nx),
                ny: a.ny.unwrap_or(d.array.ny),
                spacing: a.spacing.unwrap_or(d.array.spacing),
                wavelength: a.wavelength.unwrap_or(d.array.wavelength),
            },
            scattering: ScatteringConfig {
                azimuths_deg: s.azimuths_deg.unwrap_or_else(|| d.scattering.azimuths_deg.clone()),
                std_deg: s.std_deg.unwrap_or(d.scattering.std_deg),
                paths: s.paths.unwrap_or(d.scattering.paths),
            },
            sweep: SweepConfig {
                values: w.values.unwrap_or_else(|| d.sweep.values.clone()),
                pilot_lengths: w.pilot_lengths.unwrap_or_else(|| d.sweep.pilot_lengths.clone()),
                users: w.users.unwrap_or_else(|| d.sweep.users.clone()),
                focus: cli.focus.or(w.focus).unwrap_or(d.sweep.focus),
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        check(self.trials > 0, "trials", "must be at least 1")?;
        check(self.array.nx > 0, "array.nx", "must be at least 1")?;
        check(self.array.ny > 0, "array.ny", "must be at least 1")?;
        check(self.array.spacing > 0.0 && self.array.spacing.is_finite(), "array.spacing", "must be a positive number of wavelengths")?;
        check(self.array.wavelength > 0.0 && self.array.wavelength.is_finite(), "array.wavelength", "must be positive meters")?;
        check(self.snr_db.is_finite(), "snr.db", "must be finite")?;
        check(
            self.scattering.azimuths_deg.iter().all(|a| a.abs() <= 90.0),
            "scattering.azimuths_deg",
            "cluster azimuths must lie in [-90, 90]",
        )?;
        check(!self.scattering.azimuths_deg.is_empty(), "scattering.azimuths_deg", "needs at least one cluster")?;
        check(self.scattering.std_deg > 0.0, "scattering.std_deg", "must be positive")?;
        check(self.scattering.paths > 0, "scattering.paths", "must be at least 1")?;
        check(self.sweep.values.iter().all(|v| *v > 0.0 && v.is_finite()), "sweep.values", "entries must be positive")?;
        check(self.sweep.pilot_lengths.iter().all(|t| *t > 0), "sweep.pilot_lengths", "entries must be at least 1")?;
        check(self.sweep.users.iter().all(|k| *k > 0), "sweep.users", "entries must be at least 1")?;
        check(self.sweep.focus > 0.0 && self.sweep.focus.is_finite(), "sweep.focus", "must be a positive fraction of d_F")?;
        Ok(())
    }
}
