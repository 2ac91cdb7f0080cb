//! Where the solver comes from: `--solver`, then `PROOFTREE_SOLVER`, then
//! the config file, then `z3` on the `PATH`.

use std::path::{Path, PathBuf};
use std::time::Duration;

use prooftree::smt::{SolverConfig, DEFAULT_TIMEOUT};
use serde::Deserialize;

/// Overrides the config file location.
pub const CONFIG_ENV: &str = "PROOFTREE_CONFIG";

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    /// Solver executable.
    pub solver: Option<PathBuf>,
    /// Extra solver arguments; defaults to `["-in"]`.
    pub solver_args: Option<Vec<String>>,
    /// Default solver timeout in seconds.
    pub timeout: Option<f64>,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {0}: {1}")]
    Read(PathBuf, std::io::Error),
    #[error("invalid config {0}: {1}")]
    Invalid(PathBuf, toml::de::Error),
}

/// `$PROOFTREE_CONFIG`, else `$XDG_CONFIG_HOME/prooftree/config.toml`, else
/// `~/.config/prooftree/config.toml`.
pub fn config_path() -> Option<PathBuf> {
    if let Some(p) = std::env::var_os(CONFIG_ENV) {
        return Some(p.into());
    }
    let base = std::env::var_os("XDG_CONFIG_HOME")
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| Path::new(&h).join(".config")))?;
    Some(base.join("prooftree").join("config.toml"))
}

/// Reads the config file. A missing default file is an empty config; a
/// missing file named by `PROOFTREE_CONFIG` is an error.
pub fn load_file_config() -> Result<FileConfig, ConfigError> {
    let explicit = std::env::var_os(CONFIG_ENV).is_some();
    let Some(path) = config_path() else {
        return Ok(FileConfig::default());
    };
    match std::fs::read_to_string(&path) {
        Ok(text) => toml::from_str(&text).map_err(|e| ConfigError::Invalid(path, e)),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound && !explicit => {
            Ok(FileConfig::default())
        }
        Err(e) => Err(ConfigError::Read(path, e)),
    }
}

/// Applies the precedence rules.
pub fn resolve_solver(flag: Option<&Path>, file: &FileConfig) -> SolverConfig {
    if let Some(p) = flag {
        return SolverConfig::z3(p);
    }
    if let Some(cfg) = SolverConfig::from_env() {
        return cfg;
    }
    if let Some(p) = &file.solver {
        let mut cfg = SolverConfig::z3(p);
        if let Some(args) = &file.solver_args {
            cfg.args = args.clone();
        }
        return cfg;
    }
    SolverConfig::default()
}

pub fn resolve_timeout(flag: Option<f64>, file: &FileConfig) -> Duration {
    flag.or(file.timeout)
        .filter(|s| s.is_finite() && *s > 0.0)
        .map_or(DEFAULT_TIMEOUT, Duration::from_secs_f64)
}
