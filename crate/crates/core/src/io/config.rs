//! Experiment configuration: JSON schema, defaults and validation.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::backends::NoiseProfile;
use crate::error::{Error, Result};
use crate::model::{SpinChainParams, DEFAULT_MAX_DENSE_QUBITS};

/// Which backends fill the result table.
///
/// The exact-oracle and Trotter-statevector columns are always computed;
/// `Noisy` adds the density-matrix column, `Sampled` the shot-estimate
/// columns, `All` both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum BackendChoice {
    #[default]
    Statevector,
    Noisy,
    Sampled,
    All,
}

impl BackendChoice {
    pub fn wants_noisy(self) -> bool {
        matches!(self, BackendChoice::Noisy | BackendChoice::All)
    }

    pub fn wants_sampled(self) -> bool {
        matches!(self, BackendChoice::Sampled | BackendChoice::All)
    }

    /// Whether this choice requires a resolvable noise profile.
    pub fn needs_noise_profile(self) -> bool {
        self.wants_noisy() || self.wants_sampled()
    }
}

impl std::str::FromStr for BackendChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "statevector" => Ok(BackendChoice::Statevector),
            "noisy" => Ok(BackendChoice::Noisy),
            "sampled" => Ok(BackendChoice::Sampled),
            "all" => Ok(BackendChoice::All),
            other => Err(Error::config(
                "backend",
                format!("unknown backend '{other}' (statevector|noisy|sampled|all)"),
            )),
        }
    }
}

fn default_j_z() -> f64 {
    0.01
}
fn default_f_ph() -> f64 {
    4.8
}
fn default_dt() -> f64 {
    3.0
}
fn default_n_steps() -> usize {
    40
}
fn default_noise_profile() -> String {
    "ideal".into()
}
fn default_shots() -> u64 {
    1024
}
fn default_runs() -> usize {
    5
}
fn default_max_dense() -> usize {
    DEFAULT_MAX_DENSE_QUBITS
}
fn default_max_density() -> usize {
    crate::backends::density::DEFAULT_MAX_DENSITY_QUBITS
}

/// One experiment: chain parameters (drive amplitude as a ratio of the
/// exchange coupling), backend selection, sampling protocol and output
/// destinations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n_qubits: usize,
    /// Drive amplitude as eps_ph / J_z.
    pub eps_ratio: f64,
    #[serde(default = "default_j_z")]
    pub j_z_ev: f64,
    #[serde(default = "default_f_ph")]
    pub f_ph_thz: f64,
    #[serde(default = "default_dt")]
    pub dt_fs: f64,
    #[serde(default = "default_n_steps")]
    pub n_steps: usize,
    #[serde(default)]
    pub backend: BackendChoice,
    /// Built-in profile name ("ideal", "nisq-2019") or a JSON file path.
    #[serde(default = "default_noise_profile")]
    pub noise_profile: String,
    #[serde(default = "default_shots")]
    pub shots: u64,
    #[serde(default = "default_runs")]
    pub runs: usize,
    /// Master seed; per-(combination, run, step) streams derive from it.
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plot: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub emit_qasm: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub emit_quil: Option<PathBuf>,
    #[serde(default = "default_max_dense")]
    pub max_dense_qubits: usize,
    #[serde(default = "default_max_density")]
    pub max_density_qubits: usize,
}

impl ExperimentConfig {
    /// Minimal config for a chain size and drive ratio; everything else at
    /// defaults.
    pub fn minimal(n_qubits: usize, eps_ratio: f64) -> Self {
        Self {
            n_qubits,
            eps_ratio,
            j_z_ev: default_j_z(),
            f_ph_thz: default_f_ph(),
            dt_fs: default_dt(),
            n_steps: default_n_steps(),
            backend: BackendChoice::default(),
            noise_profile: default_noise_profile(),
            shots: default_shots(),
            runs: default_runs(),
            seed: 0,
            out: None,
            plot: None,
            emit_qasm: None,
            emit_quil: None,
            max_dense_qubits: default_max_dense(),
            max_density_qubits: default_max_density(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits < 1 {
            return Err(Error::config("n_qubits", "must be >= 1"));
        }
        if !self.eps_ratio.is_finite() {
            return Err(Error::config("eps_ratio", "must be finite"));
        }
        if !self.j_z_ev.is_finite() {
            return Err(Error::config("j_z_ev", "must be finite"));
        }
        if !(self.dt_fs > 0.0) {
            return Err(Error::config(
                "dt_fs",
                format!("must be > 0, got {}", self.dt_fs),
            ));
        }
        if !(self.f_ph_thz >= 0.0) {
            return Err(Error::config(
                "f_ph_thz",
                format!("must be >= 0, got {}", self.f_ph_thz),
            ));
        }
        if self.shots < 1 {
            return Err(Error::config("shots", "must be >= 1"));
        }
        if self.runs < 1 {
            return Err(Error::config("runs", "must be >= 1"));
        }
        if self.backend.needs_noise_profile() && self.noise_profile.is_empty() {
            return Err(Error::config(
                "noise_profile",
                "required for noisy/sampled backends",
            ));
        }
        self.params().validate()?;
        Ok(())
    }

    /// Chain parameters with the drive ratio converted to eV.
    pub fn params(&self) -> SpinChainParams {
        SpinChainParams {
            n_qubits: self.n_qubits,
            j_z: self.j_z_ev,
            eps_ph: self.eps_ratio * self.j_z_ev,
            f_ph: self.f_ph_thz,
            dt: self.dt_fs,
            n_steps: self.n_steps,
        }
    }

    /// Resolve the configured noise profile (built-in name or JSON file).
    pub fn noise(&self) -> Result<NoiseProfile> {
        resolve_noise_profile(&self.noise_profile)
    }
}

/// Parse and validate a JSON configuration document.
pub fn load_config(text: &str) -> Result<ExperimentConfig> {
    let config: ExperimentConfig =
        serde_json::from_str(text).map_err(|e| Error::config(json_error_path(&e), e.to_string()))?;
    config.validate()?;
    Ok(config)
}

/// Best-effort field path for a serde_json error: the message usually names
/// the offending field; fall back to the document position.
fn json_error_path(err: &serde_json::Error) -> String {
    let msg = err.to_string();
    if let Some(rest) = msg.split("field `").nth(1) {
        if let Some(field) = rest.split('`').next() {
            return field.to_string();
        }
    }
    format!("line {} column {}", err.line(), err.column())
}

/// Resolve a noise profile from a built-in name or a JSON file path.
pub fn resolve_noise_profile(spec: &str) -> Result<NoiseProfile> {
    if let Some(profile) = NoiseProfile::builtin(spec) {
        return Ok(profile);
    }
    let path = Path::new(spec);
    let text = std::fs::read_to_string(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            Error::config(
                "noise_profile",
                format!("'{spec}' is neither a built-in profile nor a readable file"),
            )
        } else {
            Error::io(path, e)
        }
    })?;
    let profile: NoiseProfile = serde_json::from_str(&text)
        .map_err(|e| Error::config(format!("noise_profile:{spec}"), e.to_string()))?;
    profile.validate()?;
    Ok(profile)
}
