//! Run configuration: JSON file plus flag overrides (flags win).
//!
//! Schema:
//! ```json
//! {
//!   "system":   {"omega_e": 1000.0, "omega_n": 10.0, "a": 50.0},
//!   "physical": {"g": .., "beta_over_hbar": .., "B0": ..,
//!                "gamma_n": .., "gamma_e": .., "A_over_hbar": ..},
//!   "drive":      {"rabi_e": 1.0, "rabi_n": 1.0},
//!   "integrator": {"dt": 1e-4}
//! }
//! ```
//! Exactly one of `system` / `physical` may be present; with neither, the
//! demo parameter set is used. `HFQPU_DEFAULT_CONFIG` names a config file to
//! load when `--config` is not given.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use hfqpu_core::hamiltonian::{PhysicalInput, SystemParams};
use hfqpu_core::pulse::DriveBudget;

use crate::CliError;

pub const DEFAULT_CONFIG_ENV: &str = "HFQPU_DEFAULT_CONFIG";

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    system: Option<SystemSection>,
    physical: Option<PhysicalSection>,
    drive: Option<DriveSection>,
    integrator: Option<IntegratorSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemSection {
    omega_e: f64,
    omega_n: f64,
    a: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PhysicalSection {
    g: f64,
    beta_over_hbar: f64,
    #[serde(rename = "B0")]
    b0: f64,
    gamma_n: f64,
    gamma_e: f64,
    #[serde(rename = "A_over_hbar")]
    a_over_hbar: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DriveSection {
    rabi_e: f64,
    rabi_n: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct IntegratorSection {
    dt: f64,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: SystemParams,
    pub physical: PhysicalInput,
    pub budget: DriveBudget,
    pub dt: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let params = SystemParams::demo();
        Self {
            params,
            physical: PhysicalInput::demo(&params),
            budget: DriveBudget::default(),
            dt: None,
        }
    }
}

fn parse_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut de = serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        CliError::usage(format!(
            "malformed config {}: field `{}`: {}",
            path.display(),
            e.path(),
            e.inner()
        ))
    })
}

/// Load the config file named by `--config` or the environment, apply
/// defaults, and validate.
pub fn load(config_flag: Option<&PathBuf>, dt_flag: Option<f64>) -> Result<RunConfig, CliError> {
    let env_path = std::env::var_os(DEFAULT_CONFIG_ENV).map(PathBuf::from);
    let path = config_flag.cloned().or(env_path);
    let mut resolved = RunConfig::default();

    if let Some(path) = path {
        let file = parse_file(&path)?;
        match (&file.system, &file.physical) {
            (Some(_), Some(_)) => {
                return Err(CliError::usage(
                    "config must set exactly one of `system` and `physical`, found both"
                        .to_string(),
                ))
            }
            (Some(s), None) => {
                resolved.params = SystemParams::new(s.omega_e, s.omega_n, s.a);
                resolved.physical = PhysicalInput::demo(&resolved.params);
            }
            (None, Some(p)) => {
                resolved.physical = PhysicalInput {
                    g_factor: p.g,
                    bohr_magneton_over_hbar: p.beta_over_hbar,
                    field_b: p.b0,
                    gamma_n: p.gamma_n,
                    gamma_e: p.gamma_e,
                    hyperfine_a_over_hbar: p.a_over_hbar,
                };
                resolved.params = SystemParams::from_physical(&resolved.physical);
            }
            (None, None) => {}
        }
        if let Some(d) = file.drive {
            resolved.budget = DriveBudget {
                rabi_e: d.rabi_e,
                rabi_n: d.rabi_n,
            };
        }
        if let Some(i) = file.integrator {
            if !i.dt.is_finite() || i.dt <= 0.0 {
                return Err(CliError::usage(format!(
                    "field `integrator.dt` must be positive and finite, got {}",
                    i.dt
                )));
            }
            resolved.dt = Some(i.dt);
        }
    }

    if let Some(dt) = dt_flag {
        if !dt.is_finite() || dt <= 0.0 {
            return Err(CliError::usage(format!(
                "--dt must be positive and finite, got {dt}"
            )));
        }
        resolved.dt = Some(dt);
    }
    if resolved.budget.rabi_e.is_nan()
        || resolved.budget.rabi_e < 0.0
        || resolved.budget.rabi_n.is_nan()
        || resolved.budget.rabi_n < 0.0
    {
        return Err(CliError::usage(
            "field `drive`: rabi rates must be non-negative".to_string(),
        ));
    }
    Ok(resolved)
}
