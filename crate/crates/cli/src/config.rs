use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use qproc_core::iontrap::IonTrapParams;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Ideal,
    Simulate,
    Sweep,
    Metrics,
    Liouvillian,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Mode::Ideal => "ideal",
            Mode::Simulate => "simulate",
            Mode::Sweep => "sweep",
            Mode::Metrics => "metrics",
            Mode::Liouvillian => "liouvillian",
        };
        f.write_str(name)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Durations {
    #[default]
    Analytic,
    Calibrated,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepConfig {
    /// Rabi frequencies in units of the trap frequency; applied to both ions.
    pub omega_values: Vec<f64>,
    /// Lamb–Dicke parameters; applied to both modes. Empty means the configured `eta_cm`.
    pub eta_values: Vec<f64>,
}

/// Run configuration. Ion-trap parameters sit at the top level of the JSON
/// object; frequencies are in units of the trap frequency.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(flatten)]
    pub iontrap: IonTrapParams,
    /// Shots per Pauli observable; 0 uses exact expectation values.
    pub shots: u64,
    pub seed: u64,
    pub durations: Durations,
    pub sweep: SweepConfig,
    pub output_dir: PathBuf,
    /// Transfer-operator JSON read by the `metrics` and `liouvillian` commands.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transfer_operators: Option<PathBuf>,
    /// Second snapshot, taken at `2 * time`, for the Markovianity check.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transfer_operators_2t: Option<PathBuf>,
    /// Evolution time of `transfer_operators`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            mode: None,
            iontrap: IonTrapParams::default(),
            shots: 0,
            seed: 0,
            durations: Durations::Analytic,
            sweep: SweepConfig::default(),
            output_dir: PathBuf::from("out"),
            transfer_operators: None,
            transfer_operators_2t: None,
            time: None,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let mut config: RunConfig =
            serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        // relative input files are resolved against the config's directory
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [&mut config.transfer_operators, &mut config.transfer_operators_2t].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(config)
    }

    /// Checks the fields the given command needs.
    pub fn validate_for(&self, mode: Mode) -> Result<()> {
        if let Some(m) = self.mode {
            if m != mode {
                bail!("config mode '{m}' does not match command '{mode}'");
            }
        }
        match mode {
            Mode::Simulate => self.iontrap.validate()?,
            Mode::Sweep => {
                if self.sweep.omega_values.is_empty() {
                    bail!("sweep.omega_values must not be empty");
                }
                if let Some(w) = self.sweep.omega_values.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
                    bail!("sweep.omega_values must be positive, got {w}");
                }
                if let Some(e) = self.sweep.eta_values.iter().find(|e| !(**e >= 0.0) || !e.is_finite()) {
                    bail!("sweep.eta_values must be non-negative, got {e}");
                }
                self.iontrap.validate()?;
            }
            Mode::Metrics => {
                if self.transfer_operators.is_none() {
                    bail!("metrics needs 'transfer_operators' (path to a transfer-operator JSON file)");
                }
            }
            Mode::Liouvillian => {
                if self.transfer_operators.is_none() {
                    bail!("liouvillian needs 'transfer_operators' (path to a transfer-operator JSON file)");
                }
                match self.time {
                    Some(t) if t > 0.0 && t.is_finite() => {}
                    Some(t) => bail!("time must be positive, got {t}"),
                    None => bail!("liouvillian needs 'time' (evolution time of the snapshot)"),
                }
            }
            Mode::Ideal => {}
        }
        Ok(())
    }

    /// Eta values of the sweep; falls back to the configured `eta_cm`.
    pub fn sweep_etas(&self) -> Vec<f64> {
        if self.sweep.eta_values.is_empty() {
            vec![self.iontrap.eta_cm]
        } else {
            self.sweep.eta_values.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{
        "mode": "sweep",
        "eta_cm": 0.5, "eta_r": 0.5, "delta1": -1.0, "delta2": -1.0,
        "omega1": 0.1, "omega2": 0.1, "n_max": 5,
        "shots": 0, "seed": 7,
        "sweep": {"omega_values": [0.05, 0.1], "eta_values": [0.5]},
        "output_dir": "out/sweep"
    }"#;

    #[test]
    fn parses_flat_layout() {
        let c: RunConfig = serde_json::from_str(SAMPLE).unwrap();
        assert_eq!(c.mode, Some(Mode::Sweep));
        assert_eq!(c.iontrap.n_max, 5);
        assert_eq!(c.iontrap.nu, 1.0);
        assert_eq!(c.sweep.omega_values, vec![0.05, 0.1]);
        assert_eq!(c.seed, 7);
        c.validate_for(Mode::Sweep).unwrap();
    }

    #[test]
    fn round_trips_through_json() {
        let c: RunConfig = serde_json::from_str(SAMPLE).unwrap();
        let text = serde_json::to_string(&c).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        let d = RunConfig { transfer_operators: Some("r.json".into()), time: Some(0.5), ..RunConfig::default() };
        assert_eq!(serde_json::from_str::<RunConfig>(&serde_json::to_string(&d).unwrap()).unwrap(), d);
    }

    #[test]
    fn missing_keys_take_defaults() {
        let c: RunConfig = serde_json::from_str("{}").unwrap();
        assert_eq!(c, RunConfig::default());
    }

    #[test]
    fn rejects_bad_sweeps_and_mode_mismatch() {
        let mut c: RunConfig = serde_json::from_str(SAMPLE).unwrap();
        assert!(c.validate_for(Mode::Simulate).is_err());
        c.mode = None;
        c.sweep.omega_values = vec![0.1, -0.2];
        assert!(c.validate_for(Mode::Sweep).is_err());
        c.sweep.omega_values.clear();
        assert!(c.validate_for(Mode::Sweep).is_err());
    }

    #[test]
    fn liouvillian_requires_input_and_time() {
        let c = RunConfig::default();
        assert!(c.validate_for(Mode::Liouvillian).is_err());
        let c = RunConfig { transfer_operators: Some("r.json".into()), time: Some(0.0), ..RunConfig::default() };
        assert!(c.validate_for(Mode::Liouvillian).is_err());
    }
}
