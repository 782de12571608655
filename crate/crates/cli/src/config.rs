//! Device config files: flat TOML with units carried in the key names, so a
//! value can never be mistaken for the wrong scale. Omitted keys fall back to
//! the built-in demo device.

use std::path::Path;

use serde::Deserialize;

use qfb_core::{DeviceParams, JbaParams, ShiftCurve};

use crate::output::{CliError, CliResult};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceConfig {
    pub omega_qubit_ghz: Option<f64>,
    pub qubit_gap_ghz: Option<f64>,
    /// Control amplitude as Ω/2π in MHz.
    pub rabi_mhz: Option<f64>,
    /// Alternative to `rabi_mhz`: π-pulse duration in ns.
    pub pi_ns: Option<f64>,
    pub f_jba_ghz: Option<f64>,
    pub q_factor: Option<f64>,
    pub delta_high_mhz: Option<f64>,
    pub delta_low_mhz: Option<f64>,
    /// Sets `delta_high` to `delta_low` plus this difference.
    pub delta_omega_mhz: Option<f64>,
    pub projection_error: Option<f64>,
    pub assignment_error: Option<f64>,
    pub t1_us: Option<f64>,
    pub t2_us: Option<f64>,
    /// Two-column `height shift_MHz` table for the pulse-height curve.
    pub shift_curve_file: Option<String>,
}

impl DeviceConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let mut cfg: DeviceConfig = toml::from_str(&text)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        // Resolve the curve path relative to the config file.
        if let Some(rel) = &cfg.shift_curve_file {
            let resolved = path.parent().map_or_else(|| rel.into(), |dir| dir.join(rel));
            if !resolved.exists() {
                return Err(CliError::Input(format!(
                    "shift_curve_file {} does not exist",
                    resolved.display()
                )));
            }
            cfg.shift_curve_file = Some(resolved.to_string_lossy().into_owned());
        }
        if cfg.rabi_mhz.is_some() && cfg.pi_ns.is_some() {
            return Err(CliError::Input("set either rabi_mhz or pi_ns, not both".into()));
        }
        Ok(cfg)
    }

    pub fn into_device(self) -> CliResult<DeviceParams> {
        let base = DeviceParams::default();
        let mut jba = JbaParams::new(
            self.f_jba_ghz.map_or(base.jba.f_jba, |v| v * 1e9),
            self.q_factor.unwrap_or(base.jba.q_factor),
            self.delta_high_mhz.map_or(base.jba.delta_high, |v| TWO_PI * 1e6 * v),
            self.delta_low_mhz.map_or(base.jba.delta_low, |v| TWO_PI * 1e6 * v),
            self.projection_error.unwrap_or(base.jba.projection_error),
            self.assignment_error.unwrap_or(base.jba.assignment_error),
        )
        .map_err(|e| CliError::Input(e.to_string()))?;
        if let Some(mhz) = self.delta_omega_mhz {
            jba = jba.with_delta_omega(TWO_PI * 1e6 * mhz);
        }
        if let Some(file) = &self.shift_curve_file {
            let text = std::fs::read_to_string(file)
                .map_err(|e| CliError::Input(format!("{file}: {e}")))?;
            let curve =
                ShiftCurve::from_text(&text).map_err(|e| CliError::Input(e.to_string()))?;
            jba = jba.with_shift_curve(curve);
        }
        let rabi_omega = match (self.rabi_mhz, self.pi_ns) {
            (Some(mhz), _) => TWO_PI * 1e6 * mhz,
            (None, Some(ns)) => std::f64::consts::PI / (ns * 1e-9),
            (None, None) => base.rabi_omega,
        };
        DeviceParams::new(
            self.omega_qubit_ghz.map_or(base.omega_qubit, |v| TWO_PI * 1e9 * v),
            self.qubit_gap_ghz.map_or(base.qubit_gap, |v| TWO_PI * 1e9 * v),
            rabi_omega,
            jba,
            self.t1_us.map(|v| v * 1e-6),
            self.t2_us.map(|v| v * 1e-6),
        )
        .map_err(|e| CliError::Input(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_the_default_device() {
        let cfg: DeviceConfig = toml::from_str("").unwrap();
        let device = cfg.into_device().unwrap();
        assert_eq!(device, DeviceParams::default());
    }

    #[test]
    fn keys_override_in_expected_units() {
        let cfg: DeviceConfig = toml::from_str(
            "omega_qubit_ghz = 3.0\ndelta_omega_mhz = 150\npi_ns = 1.8\nprojection_error = 0.02\n",
        )
        .unwrap();
        let device = cfg.into_device().unwrap();
        assert!((device.omega_qubit - TWO_PI * 3e9).abs() < 1.0);
        assert!((device.jba.delta_omega() - TWO_PI * 150e6).abs() < 1e-3);
        assert!((device.rabi_omega - std::f64::consts::PI / 1.8e-9).abs() < 1e-3);
        assert_eq!(device.jba.projection_error, 0.02);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(toml::from_str::<DeviceConfig>("delta_mhz = 1\n").is_err());
    }

    #[test]
    fn conflicting_rabi_keys_rejected() {
        let dir = std::env::temp_dir().join("qfb_cfg_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("both.toml");
        std::fs::write(&path, "rabi_mhz = 500\npi_ns = 0.9\n").unwrap();
        assert!(matches!(DeviceConfig::load(&path), Err(CliError::Input(_))));
    }

    #[test]
    fn invalid_coherence_ordering_rejected() {
        let cfg: DeviceConfig = toml::from_str("t1_us = 1.0\nt2_us = 3.0\n").unwrap();
        assert!(cfg.into_device().is_err());
    }
}
