//! Experiment runner for the umm-core simulation library.

pub mod config;
pub mod experiments;
pub mod output;

use std::path::PathBuf;

use config::{ConfigError, FileConfig, Overrides, RunConfig};
use output::Report;

/// Process exit codes.
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_CONTRACT: i32 = 3;

#[derive(Debug)]
pub enum RunError {
    Config(String),
    Contract(String),
    Io(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => EXIT_CONFIG,
            RunError::Contract(_) => EXIT_CONTRACT,
            RunError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(m) => write!(f, "config error: {m}"),
            RunError::Contract(m) => write!(f, "numerical contract violated: {m}"),
            RunError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e.0)
    }
}

impl From<umm_core::Error> for RunError {
    fn from(e: umm_core::Error) -> Self {
        match e {
            umm_core::Error::Config(m) => RunError::Config(m),
            other => RunError::Contract(other.to_string()),
        }
    }
}

/// One line per experiment: id, figure, summary.
pub fn list_experiments() -> String {
    let reg = experiments::registry();
    let width = reg.iter().map(|e| e.id.len()).max().unwrap_or(0);
    let mut s = String::new();
    for e in reg {
        s.push_str(&format!("{:<width$}  {}: {}\n", e.id, e.figure, e.summary));
    }
    s
}

/// Resolve the configuration and compute the report without touching disk.
pub fn prepare(id: &str, file: Option<&PathBuf>, cli: &Overrides) -> Result<(RunConfig, Report), RunError> {
    let exp = experiments::find(id)
        .ok_or_else(|| RunError::Config(format!("unknown experiment '{id}'; see list-experiments")))?;
    let file_cfg = match file {
        Some(p) => config::load_file(p)?,
        None => FileConfig::default(),
    };
    let cfg = RunConfig::resolve(&exp, &file_cfg, cli)?;
    let report = (exp.run)(&cfg)?;
    Ok((cfg, report))
}

/// Run an experiment and write its artifacts; returns the output directory.
pub fn run(id: &str, file: Option<&PathBuf>, cli: &Overrides) -> Result<PathBuf, RunError> {
    let (cfg, report) = prepare(id, file, cli)?;
    output::write_report(&cfg, &report).map_err(|e| match e {
        output::WriteError::Conflict(_) => RunError::Config(e.to_string()),
        output::WriteError::Io(io) => RunError::Io(io.to_string()),
    })
}
