//! Physical device constants shared across modules.

use crate::error::{Error, Result};
use crate::jba::JbaParams;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Qubit and readout constants for one device.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviceParams {
    /// Bare qubit angular frequency at the operating point (rad/s).
    pub omega_qubit: f64,
    /// Qubit gap at the degeneracy point (rad/s); kept for bookkeeping.
    pub qubit_gap: f64,
    /// Control-pulse amplitude Ω (rad/s); rotation angle is Ω × duration.
    pub rabi_omega: f64,
    pub jba: JbaParams,
    /// Energy-relaxation time (s), if modeled.
    pub t1: Option<f64>,
    /// Total coherence time (s), if modeled.
    pub t2: Option<f64>,
}

impl DeviceParams {
    pub fn new(
        omega_qubit: f64,
        qubit_gap: f64,
        rabi_omega: f64,
        jba: JbaParams,
        t1: Option<f64>,
        t2: Option<f64>,
    ) -> Result<Self> {
        if !(rabi_omega.is_finite() && rabi_omega > 0.0) {
            return Err(Error::invalid("rabi_omega must be > 0"));
        }
        for (name, v) in [("omega_qubit", omega_qubit), ("qubit_gap", qubit_gap)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::invalid(format!("{name} must be finite and >= 0")));
            }
        }
        for (name, v) in [("t1", t1), ("t2", t2)] {
            if let Some(x) = v {
                if !x.is_finite() || x <= 0.0 {
                    return Err(Error::invalid(format!("{name} must be > 0 when present")));
                }
            }
        }
        if let (Some(a), Some(b)) = (t1, t2) {
            if b > 2.0 * a {
                return Err(Error::invalid(format!("t2 = {b:e} exceeds 2·t1 = {:e}", 2.0 * a)));
            }
        }
        Ok(Self { omega_qubit, qubit_gap, rabi_omega, jba, t1, t2 })
    }

    /// Selective-Ramsey π time `π/δω` for this device's shift difference.
    pub fn ramsey_pi_time(&self) -> f64 {
        std::f64::consts::PI / self.jba.delta_omega()
    }

    /// Resonant π-pulse duration `π/Ω`.
    pub fn pi_pulse_duration(&self) -> f64 {
        std::f64::consts::PI / self.rabi_omega
    }

    pub fn with_delta_omega(mut self, delta_omega: f64) -> Self {
        self.jba = self.jba.with_delta_omega(delta_omega);
        self
    }

    pub fn with_readout_errors(mut self, projection_error: f64, assignment_error: f64) -> Self {
        self.jba = self.jba.with_errors(projection_error, assignment_error);
        self
    }
}

impl Default for DeviceParams {
    /// The initialization-demo device: 3.4 GHz qubit (3.3 GHz gap), control
    /// amplitude set by the 0.9 ns π time, and the readout shift chosen so
    /// the selective-Ramsey π time is exactly 5.5 ns (δω/2π ≈ 90.9 MHz).
    ///
    /// [`JbaParams::default`] alone carries the Ramsey-measurement value
    /// δω = 2π·150 MHz; experiments override whichever they calibrate to.
    fn default() -> Self {
        let jba = JbaParams::default().with_delta_omega(std::f64::consts::PI / 5.5e-9);
        Self::new(
            TWO_PI * 3.4e9,
            TWO_PI * 3.3e9,
            std::f64::consts::PI / 0.9e-9,
            jba,
            None,
            None,
        )
        .expect("valid defaults")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn default_device_times() {
        let d = DeviceParams::default();
        assert_relative_eq!(d.ramsey_pi_time(), 5.5e-9, epsilon = 1e-22);
        assert_relative_eq!(d.pi_pulse_duration(), 0.9e-9, epsilon = 1e-22);
        assert_relative_eq!(d.jba.tau_jba(), 7e-9, epsilon = 1e-21);
        assert_relative_eq!(d.rabi_omega / TWO_PI, 555.6e6, max_relative = 1e-3);
    }

    #[test]
    fn coherence_ordering_enforced() {
        let jba = JbaParams::default();
        assert!(DeviceParams::new(1e9, 1e9, 1e9, jba.clone(), Some(1e-6), Some(3e-6)).is_err());
        assert!(DeviceParams::new(1e9, 1e9, 1e9, jba, Some(1e-6), Some(2e-6)).is_ok());
    }

    #[test]
    fn rabi_must_be_positive() {
        assert!(DeviceParams::new(1e9, 1e9, 0.0, JbaParams::default(), None, None).is_err());
    }
}
